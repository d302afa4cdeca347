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

#include "bpl/bloch.hpp"
#include "oracles.hpp"

namespace bpl {
namespace {

BlochDistribution z_pair() { return BlochDistribution::uniform({{0, 0, 1}, {0, 0, -1}}); }

TEST(BlochVectorTest, RejectsOutsideBall) {
  EXPECT_NO_THROW(validate({0, 0, 1}));
  EXPECT_NO_THROW(validate({0, 0, 1 + 1e-13}));
  EXPECT_THROW(validate({0.8, 0.8, 0}), Error);
}

TEST(BlochDistributionTest, ValidatesWeights) {
  EXPECT_THROW(BlochDistribution({{0, 0, 1}}, {0.5}), Error);
  EXPECT_THROW(BlochDistribution({{0, 0, 1}, {0, 0, 0}}, {1.5, -0.5}), Error);
  EXPECT_THROW(BlochDistribution({{0, 0, 1}}, {0.5, 0.5}), Error);
  EXPECT_THROW(BlochDistribution({}, {}), Error);
}

TEST(MomentsTest, MeanExamples) {
  EXPECT_NEAR(mean(z_pair()).norm(), 0.0, 1e-15);
  EXPECT_EQ(mean(BlochDistribution::point_mass({0, 0, 0.5})), BlochVector(0, 0, 0.5));
  EXPECT_NEAR(mean(BlochDistribution::pauli_eigenstates()).norm(), 0.0, 1e-15);
}

TEST(MomentsTest, SecondMomentExamples) {
  EXPECT_TRUE(second_moment(z_pair()).isApprox(Vec3(0, 0, 1).asDiagonal().toDenseMatrix(), 1e-15));
  EXPECT_NEAR((second_moment(BlochDistribution::pauli_eigenstates()) - Mat3::Identity() / 3.0).norm(), 0.0, 1e-15);
  const Mat3 s = second_moment(BlochDistribution::uniform_sphere(2000));
  EXPECT_NEAR((s - Mat3::Identity() / 3.0).norm(), 0.0, 5e-3);
}

TEST(MomentsTest, CovarianceExamples) {
  EXPECT_NEAR(covariance(BlochDistribution::point_mass({0, 0, 0.5})).norm(), 0.0, 1e-15);
  EXPECT_NEAR((covariance(z_pair()) - Vec3(0, 0, 1).asDiagonal().toDenseMatrix()).norm(), 0.0, 1e-15);
  const auto d = BlochDistribution::uniform({{0, 0, 1}, {0, 0, 0}});
  EXPECT_NEAR((covariance(d) - Vec3(0, 0, 0.25).asDiagonal().toDenseMatrix()).norm(), 0.0, 1e-15);
}

TEST(MomentsTest, SpectralNormExamples) {
  EXPECT_DOUBLE_EQ(spectral_norm(Vec3(0, 0, 1).asDiagonal().toDenseMatrix()), 1.0);
  EXPECT_NEAR(spectral_norm(Mat3::Identity() / 3.0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(spectral_norm(Vec3(0.2, 0.3, 0.5).asDiagonal().toDenseMatrix()), 0.5, 1e-15);
}

TEST(RotationTest, ConventionMatchesDenseConjugation) {
  Rng rng = make_rng(11);
  std::normal_distribution<double> g;
  for (int t = 0; t < 50; ++t) {
    const Vec3 axis = Vec3(g(rng), g(rng), g(rng)).normalized();
    const Rotation rot = Rotation::about_axis(axis, g(rng));
    EXPECT_NEAR((rot.u.adjoint() * rot.u - Mat2c::Identity()).norm(), 0.0, 1e-12);
    EXPECT_NEAR(rot.r.determinant(), 1.0, 1e-12);
    // u^dagger P u = sum_Q r(P, Q) Q, equivalently Bloch vectors map to r alpha.
    const char letters[3] = {'X', 'Y', 'Z'};
    for (int p = 0; p < 3; ++p) {
      oracle::Mat expect = oracle::Mat::Zero(2, 2);
      for (int q = 0; q < 3; ++q) expect += rot.r(p, q) * oracle::single(letters[q]);
      EXPECT_NEAR((rot.u.adjoint() * oracle::single(letters[p]) * rot.u - expect).norm(), 0.0, 1e-12);
    }
    const BlochVector a(0.3, -0.2, 0.5);
    const oracle::Mat rotated = rot.u * oracle::bloch_rho(a) * rot.u.adjoint();
    EXPECT_NEAR((rotated - oracle::bloch_rho(BlochVector(Vec3(rot.r * a.vec())))).norm(), 0.0, 1e-12);
  }
}

TEST(RotationTest, DiagonalizingExamples) {
  EXPECT_TRUE(diagonalizing_rotation(Vec3(0, 0, 0.3)).r.isApprox(Mat3::Identity()));
  EXPECT_TRUE(diagonalizing_rotation(Vec3(0, 0, 0)).r.isApprox(Mat3::Identity()));
  const Rotation x = diagonalizing_rotation(Vec3(0.3, 0, 0));
  EXPECT_NEAR((x.r * Vec3(0.3, 0, 0) - Vec3(0, 0, 0.3)).norm(), 0.0, 1e-15);
  const Rotation down = diagonalizing_rotation(Vec3(0, 0, -0.4));
  EXPECT_NEAR((down.r * Vec3(0, 0, -0.4) - Vec3(0, 0, 0.4)).norm(), 0.0, 1e-15);
  const BlochDistribution moved = rotate(BlochDistribution::point_mass({1, 0, 0}), x);
  EXPECT_NEAR((moved.atoms()[0].vec() - Vec3(0, 0, 1)).norm(), 0.0, 1e-15);
}

TEST(RotationTest, MeanStateDiagonalWithLargerEigenvalueFirst) {
  Rng rng = make_rng(5);
  for (int t = 0; t < 100; ++t) {
    const BlochDistribution d = random_distribution(rng);
    const Rotation rot = diagonalizing_rotation(d);
    const oracle::Mat rho = oracle::bloch_rho(mean(d));
    const oracle::Mat diag = rot.u * rho * rot.u.adjoint();
    EXPECT_NEAR(std::abs(diag(0, 1)), 0.0, 1e-10);
    EXPECT_GE(diag(0, 0).real(), diag(1, 1).real() - 1e-12);
    const BlochVector m = mean(rotate(d, rot));
    EXPECT_NEAR(m.x, 0.0, 1e-10);
    EXPECT_NEAR(m.y, 0.0, 1e-10);
    EXPECT_NEAR(m.z, mean(d).norm(), 1e-10);
  }
}

TEST(PropertyTest, MomentInvariantsOnRandomDistributions) {
  Rng rng = make_rng(21);
  for (int t = 0; t < 1000; ++t) {
    RandomDistributionOptions opts;
    opts.max_second_moment = 0.95;
    const BlochDistribution d = random_distribution(rng, opts);
    const Mat3 s = second_moment(d);
    const Mat3 c = covariance(d);
    EXPECT_GE(min_eigenvalue(s), -1e-10);
    EXPECT_GE(min_eigenvalue(c), -1e-10);
    const Vec3 mu = mean(d).vec();
    EXPECT_TRUE((c - (s - mu * mu.transpose())).isZero(0.0));
    double trace_bound = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) trace_bound += d.weights()[i] * d.atoms()[i].vec().squaredNorm();
    EXPECT_NEAR(s.trace(), trace_bound, 1e-12);
    if (d.on_sphere()) {
      EXPECT_NEAR(s.trace(), 1.0, 1e-12);
    }
    EXPECT_LE(spectral_norm(s), 0.95 + 1e-12);
    const Rotation rot = Rotation::about_axis(Vec3(0.2, -0.5, 0.7).normalized(), 1.1 + t * 0.01);
    const BlochDistribution r = rotate(d, rot);
    EXPECT_NEAR(spectral_norm(second_moment(r)), spectral_norm(s), 1e-12);
    EXPECT_NEAR(spectral_norm(covariance(r)), spectral_norm(c), 1e-12);
    EXPECT_NEAR((second_moment(r) - rot.r * s * rot.r.transpose()).norm(), 0.0, 1e-12);
  }
}

TEST(SamplingTest, FrequenciesAndDeterminism) {
  const BlochDistribution d = z_pair();
  Rng a = make_rng(9);
  int up = 0;
  for (int i = 0; i < 100000; ++i) up += sample(d, a).z > 0;
  EXPECT_NEAR(up / 1e5, 0.5, 0.01);
  Rng b = make_rng(3);
  Rng c = make_rng(3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample(d, b), sample(d, c));
  Rng p = make_rng(4);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(sample(BlochDistribution::point_mass({0.1, 0, 0}), p), BlochVector(0.1, 0, 0));
}

TEST(SamplingTest, StreamsDiffer) {
  Rng a = make_rng(1, 0);
  Rng b = make_rng(1, 1);
  EXPECT_NE(a(), b());
}

TEST(FactoryTest, NamedDistributions) {
  const auto tp = BlochDistribution::two_point(Vec3(0, 0, 1), 0.1);
  EXPECT_NEAR(spectral_norm(second_moment(tp)), 0.81, 1e-15);
  const auto b = BlochDistribution::bernoulli_axis(Vec3(1, 0, 0), 0.75, 0.5);
  EXPECT_NEAR(mean(b).x, 0.25, 1e-15);
  EXPECT_TRUE(BlochDistribution::uniform_sphere(50).on_sphere());
  EXPECT_TRUE(BlochDistribution::pauli_eigenstates().on_sphere());
  const auto prod = ProductDistribution::iid(tp, 3);
  EXPECT_DOUBLE_EQ(prod.support_size(), 8.0);
  EXPECT_NEAR(prod.max_second_moment_norm(), 0.81, 1e-15);
}

}  // namespace
}  // namespace bpl
