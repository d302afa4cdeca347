// Copyright 2026 The bpl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "bpl/qsim.hpp"
#include "oracles.hpp"

namespace bpl {
namespace {

Operator random_density(int n, Rng& rng) {
  std::normal_distribution<double> g;
  const Eigen::Index dim = Eigen::Index{1} << n;
  MatXc a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = cplx(g(rng), g(rng));
  MatXc rho = a * a.adjoint();
  rho /= rho.trace();
  return Operator(n, rho);
}

ProductState random_state(int n, Rng& rng) {
  ProductState s;
  const BlochDistribution sphere = BlochDistribution::uniform_sphere(64);
  std::uniform_real_distribution<double> r(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    const BlochVector v = sample(sphere, rng);
    const double len = r(rng);
    s.sites.emplace_back(len * v.x, len * v.y, len * v.z);
  }
  return s;
}

TEST(PauliTest, OperatorMatchesKroneckerOracle) {
  for (const char* w : {"X", "IZ", "XYZ", "ZIYX"}) {
    const Operator op = pauli_to_operator(PauliString(w));
    EXPECT_NEAR((op.matrix() - oracle::pauli_word(w)).norm(), 0.0, 1e-15) << w;
    EXPECT_NEAR((pauli_to_product(PauliString(w)).dense().matrix() - oracle::pauli_word(w)).norm(), 0.0, 1e-15);
  }
  EXPECT_EQ(PauliString("IXIZ").degree(), 2);
  EXPECT_THROW(PauliString("IQ"), Error);
}

TEST(DensityTest, Examples) {
  const Operator zero = density({{BlochVector(0, 0, 1)}});
  EXPECT_NEAR(std::abs(zero.matrix()(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(zero.matrix()(1, 1)), 0.0, 1e-15);
  const Operator mixed = density({{BlochVector(0, 0, 0)}});
  EXPECT_NEAR((mixed.matrix() - MatXc::Identity(2, 2) / 2.0).norm(), 0.0, 1e-15);
  // |0><0| (x) |+><+| with |+><+| = (I + X)/2.
  const Operator two = density({{BlochVector(0, 0, 1), BlochVector(1, 0, 0)}});
  MatXc plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  MatXc ket0 = MatXc::Zero(2, 2);
  ket0(0, 0) = 1;
  EXPECT_NEAR((two.matrix() - oracle::kron(ket0, plus)).norm(), 0.0, 1e-15);
}

TEST(ChannelTest, Examples) {
  const Operator zero = density({{BlochVector(0, 0, 1)}});
  EXPECT_NEAR((apply_channel(KrausChannel::identity(1), zero).matrix() - zero.matrix()).norm(), 0.0, 1e-15);
  const Operator dep = apply_channel(KrausChannel::depolarizing(1, 0.4), zero);
  EXPECT_NEAR(std::abs(dep.matrix()(0, 0) - 0.8), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(dep.matrix()(1, 1) - 0.2), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(dep.matrix()(0, 1)), 0.0, 1e-12);

  const Operator z = pauli_to_operator(PauliString("Z"));
  const Operator zd = heisenberg_adjoint(KrausChannel::depolarizing(1, 0.3), z);
  EXPECT_NEAR((zd.matrix() - 0.7 * z.matrix()).norm(), 0.0, 1e-12);

  Rng rng = make_rng(2);
  const KrausChannel u = random_channel(2, 1, rng);
  const MatXc& k = u.kraus()[0];
  EXPECT_NEAR((k.adjoint() * k - MatXc::Identity(4, 4)).norm(), 0.0, 1e-8);
  const Operator rho = random_density(2, rng);
  EXPECT_NEAR((apply_channel(u, rho).matrix() - k * rho.matrix() * k.adjoint()).norm(), 0.0, 1e-12);
  const Operator o = random_observable(2, rng);
  EXPECT_NEAR((heisenberg_adjoint(u, o).matrix() - k.adjoint() * o.matrix() * k).norm(), 0.0, 1e-12);
}

TEST(ChannelTest, RejectsNonTracePreservingAndMismatch) {
  EXPECT_THROW(KrausChannel(1, {MatXc::Identity(2, 2) * 0.5}), Error);
  EXPECT_THROW(apply_channel(KrausChannel::identity(2), density({{BlochVector(0, 0, 1)}})), Error);
}

TEST(ChannelTest, RandomChannelDeterministicAndTracePreserving) {
  Rng a = make_rng(17);
  Rng b = make_rng(17);
  const KrausChannel e1 = random_channel(3, 4, a);
  const KrausChannel e2 = random_channel(3, 4, b);
  ASSERT_EQ(e1.kraus().size(), 4u);
  MatXc sum = MatXc::Zero(8, 8);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(e1.kraus()[i], e2.kraus()[i]);
    sum += e1.kraus()[i].adjoint() * e1.kraus()[i];
  }
  EXPECT_NEAR((sum - MatXc::Identity(8, 8)).norm(), 0.0, 1e-8);
  Rng c = make_rng(1);
  EXPECT_THROW(random_channel(11, 1, c), Error);
}

TEST(PropertyTest, AdjointDualityAndTracePreservation) {
  Rng rng = make_rng(31);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 4;
    const KrausChannel e = random_channel(n, 1 + t % 4, rng);
    const Operator o = random_observable(n, rng);
    const ProductState s = random_state(n, rng);
    const Operator rho = density(s);
    const Operator out = apply_channel(e, rho);
    const Operator adj = heisenberg_adjoint(e, o);
    EXPECT_TRUE(adj.is_hermitian(1e-10));
    EXPECT_NEAR(oracle::expect(adj.matrix(), rho.matrix()), oracle::expect(o.matrix(), out.matrix()), 1e-9);
    EXPECT_NEAR(std::abs(out.matrix().trace() - 1.0), 0.0, 1e-8);
    EXPECT_LE(adj.op_norm(), 1.0 + 1e-9);
    const Operator mixed = random_density(n, rng);
    EXPECT_NEAR(std::abs(apply_channel(e, mixed).matrix().trace() - 1.0), 0.0, 1e-8);
  }
}

TEST(ExpectationTest, Examples) {
  const Operator z = pauli_to_operator(PauliString("Z"));
  EXPECT_DOUBLE_EQ(expectation(z, {{BlochVector(0, 0, 1)}}), 1.0);
  EXPECT_NEAR(expectation(pauli_to_operator(PauliString("X")), {{BlochVector(0, 0, 1)}}), 0.0, 1e-15);
  EXPECT_NEAR(expectation(pauli_to_operator(PauliString("ZZ")), {{BlochVector(0, 0, 0.3), BlochVector(0, 0, -0.6)}}),
              -0.18, 1e-15);
}

TEST(PropertyTest, ProductFormulaMatchesDenseTrace) {
  Rng rng = make_rng(8);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 5;
    ProductOperator po;
    for (int i = 0; i < n; ++i) {
      Mat2c f;
      f << g(rng), cplx(g(rng), g(rng)), 0, g(rng);
      f(1, 0) = std::conj(f(0, 1));
      po.factors.push_back(f);
    }
    const ProductState s = random_state(n, rng);
    EXPECT_NEAR(expectation(po, s), expectation(po.dense(), s), 1e-10);
  }
}

TEST(PauliCoefficientTest, RoundTripAndEvaluation) {
  Rng rng = make_rng(12);
  for (int n = 1; n <= 4; ++n) {
    const Operator o = random_observable(n, rng);
    const std::vector<double> c = pauli_coefficients(o);
    ASSERT_EQ(c.size(), std::size_t{1} << (2 * n));
    EXPECT_NEAR((operator_from_pauli_coefficients(n, c).matrix() - o.matrix()).norm(), 0.0, 1e-12);
    const ProductState s = random_state(n, rng);
    EXPECT_NEAR(evaluate_pauli_coefficients(c, s), expectation(o, s), 1e-12);
  }
  // Indexing: site 0 is the most significant base-4 digit.
  const std::vector<double> xz = pauli_coefficients(pauli_to_operator(PauliString("XZ")));
  EXPECT_NEAR(xz[1 * 4 + 3], 1.0, 1e-15);
}

TEST(LabelTest, Examples) {
  Rng rng = make_rng(4);
  const Operator z = pauli_to_operator(PauliString("Z"));
  for (long shots : {1L, 7L, 1000L})
    EXPECT_DOUBLE_EQ(estimate_label(KrausChannel::identity(1), z, {{BlochVector(0, 0, 1)}}, shots, rng), 1.0);
  int within = 0;
  for (int i = 0; i < 200; ++i)
    within += std::abs(estimate_label(KrausChannel::identity(1), z, {{BlochVector(1, 0, 0)}}, 10000, rng)) <= 0.05;
  EXPECT_EQ(within, 200);
  EXPECT_THROW(estimate_label(KrausChannel::identity(1), Operator(1, 2.0 * z.matrix()), {{BlochVector(0, 0, 1)}}, 10,
                            rng),
               Error);
  Rng a = make_rng(6);
  Rng b = make_rng(6);
  EXPECT_EQ(estimate_label_from_value(0.3, 100, a), estimate_label_from_value(0.3, 100, b));
}

TEST(PropertyTest, LabelEstimatorUnbiased) {
  Rng rng = make_rng(77);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 3;
    const KrausChannel e = random_channel(n, 2, rng);
    const Operator o = random_observable(n, rng);
    const ProductState s = random_state(n, rng);
    const double value = oracle::expect(o.matrix(), apply_channel(e, density(s)).matrix());
    const long shots = 10;
    const int reps = 10000;
    double sum = 0.0;
    for (int r = 0; r < reps; ++r) sum += estimate_label(e, o, s, shots, rng);
    const double sigma = std::sqrt((1.0 - value * value) / static_cast<double>(shots * reps));
    EXPECT_LE(std::abs(sum / reps - value), 3.0 * sigma + 1e-12) << t;
  }
}

TEST(ShadowTest, ZeroStateInZBasis) {
  Rng rng = make_rng(3);
  const Operator zero = density({{BlochVector(0, 0, 1)}});
  for (int i = 0; i < 200; ++i) {
    const ShadowSnapshot snap = shadow_estimate(zero, rng);
    EXPECT_NE(snap.outcomes[0], StabilizerState::kOne);
  }
  EXPECT_THROW(shadow_estimate(Operator(1, MatXc::Identity(2, 2)), rng), Error);
}

TEST(ShadowTest, ProjectorsAreStabilizerStates) {
  const StabilizerState all[6] = {StabilizerState::kZero,  StabilizerState::kOne,   StabilizerState::kPlus,
                                  StabilizerState::kMinus, StabilizerState::kYPlus, StabilizerState::kYMinus};
  const BlochVector vecs[6] = {{0, 0, 1}, {0, 0, -1}, {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  for (int i = 0; i < 6; ++i)
    EXPECT_NEAR((stabilizer_projector(all[i]) - oracle::bloch_rho(vecs[i])).norm(), 0.0, 1e-15);
}

TEST(ShadowTest, AverageReproducesMaximallyMixed) {
  Rng rng = make_rng(10);
  const Operator mixed(1, MatXc::Identity(2, 2) / 2.0);
  MatXc avg = MatXc::Zero(2, 2);
  const int reps = 100000;
  for (int i = 0; i < reps; ++i) avg += shadow_estimate(mixed, rng).estimator().matrix();
  avg /= reps;
  EXPECT_LE((avg - mixed.matrix()).cwiseAbs().maxCoeff(), 0.02);
}

TEST(ShadowTest, AverageReproducesProductBlochVectors) {
  Rng rng = make_rng(14);
  const ProductState s = random_state(2, rng);
  const Operator rho = density(s);
  MatXc avg = MatXc::Zero(4, 4);
  const int reps = 100000;
  for (int i = 0; i < reps; ++i) avg += shadow_estimate(rho, rng).estimator().matrix();
  avg /= reps;
  for (const char* w : {"XI", "YI", "ZI", "IX", "IY", "IZ"}) {
    const MatXc p = oracle::pauli_word(w);
    EXPECT_NEAR(oracle::expect(p, avg), oracle::expect(p, rho.matrix()), 0.02) << w;
  }
}

}  // namespace
}  // namespace bpl
