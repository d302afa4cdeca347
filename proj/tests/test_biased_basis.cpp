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

#include <bit>
#include <cmath>

#include "bpl/biased_basis.hpp"
#include "oracles.hpp"

namespace bpl {
namespace {

ProductDistribution random_product(int n, Rng& rng, double max_s = 0.8, std::size_t max_atoms = 4) {
  RandomDistributionOptions opts;
  opts.max_second_moment = max_s;
  opts.max_atoms = max_atoms;
  std::vector<BlochDistribution> sites;
  for (int i = 0; i < n; ++i) sites.push_back(random_distribution(rng, opts));
  return ProductDistribution(std::move(sites));
}

int word_degree(std::size_t index, int n) {
  int deg = 0;
  for (int i = 0; i < n; ++i, index /= 4) deg += index % 4 != 0;
  return deg;
}

TEST(SiteBasisTest, MeanZeroGivesStandardPaulis) {
  const BiasedSiteBasis b = build_site_basis(BlochDistribution::pauli_eigenstates());
  EXPECT_EQ(b.mu, 0.0);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(MatXc(b.ops[static_cast<std::size_t>(k)]), oracle::single("IXYZ"[k])) << k;
}

TEST(SiteBasisTest, ZMeanHalf) {
  const BiasedSiteBasis b = build_site_basis(BlochDistribution::uniform({{0, 0, 1}, {0, 0, 0}}));
  EXPECT_NEAR(b.mu, 0.5, 1e-15);
  const MatXc expect = (oracle::single('Z') - 0.5 * oracle::single('I')) / std::sqrt(0.75);
  EXPECT_NEAR((MatXc(b.ops[3]) - expect).norm(), 0.0, 1e-12);
  EXPECT_NEAR(std::abs((b.ops[3] * b.mean_state()).trace()), 0.0, 1e-12);
}

TEST(SiteBasisTest, XMeanIsConjugatedZMeanBasis) {
  const BiasedSiteBasis bx = site_basis_from_mean(Vec3(0.5, 0, 0));
  const BiasedSiteBasis bz = site_basis_from_mean(Vec3(0, 0, 0.5));
  EXPECT_NEAR(bx.mu, 0.5, 1e-15);
  const MatXc zt = (oracle::single('X') - 0.5 * oracle::single('I')) / std::sqrt(0.75);
  EXPECT_NEAR((MatXc(bx.ops[3]) - zt).norm(), 0.0, 1e-12);
  const Mat2c& u = bx.rotation.u;
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR((bx.ops[k] - u.adjoint() * bz.ops[k] * u).norm(), 0.0, 1e-12);
}

TEST(SiteBasisTest, DegenerateMeanThrows) {
  try {
    build_site_basis(BlochDistribution::point_mass({0, 0, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateDistribution);
  }
}

TEST(PropertyTest, BasisReconstructionAndCenteredness) {
  Rng rng = make_rng(41);
  RandomDistributionOptions opts;
  opts.max_second_moment = 0.95;
  for (int t = 0; t < 300; ++t) {
    const BlochDistribution d = random_distribution(rng, opts);
    const BiasedSiteBasis b = build_site_basis(d);
    const Mat2c& u = b.rotation.u;
    const Mat2c rho_bar = oracle::bloch_rho(mean(d));
    EXPECT_NEAR((b.mean_state() - rho_bar).norm(), 0.0, 1e-12);
    EXPECT_NEAR((b.ops[1] - u.adjoint() * oracle::single('X') * u).norm(), 0.0, 1e-10);
    EXPECT_NEAR((b.ops[2] - u.adjoint() * oracle::single('Y') * u).norm(), 0.0, 1e-10);
    const Mat2c zr = u.adjoint() * oracle::single('Z') * u;
    const double m = (rho_bar * zr).trace().real();
    EXPECT_NEAR((b.ops[3] - (zr - m * Mat2c::Identity()) / std::sqrt(1 - m * m)).norm(), 0.0, 1e-10);
    for (std::size_t k = 1; k < 4; ++k) {
      double first = 0.0;
      double second = 0.0;
      for (std::size_t a = 0; a < d.size(); ++a) {
        const double v = oracle::expect(b.ops[k], oracle::bloch_rho(d.atoms()[a]));
        EXPECT_NEAR(v, b.values(d.atoms()[a])(static_cast<Eigen::Index>(k)), 1e-10);
        first += d.weights()[a] * v;
        second += d.weights()[a] * v * v;
      }
      EXPECT_NEAR(first, 0.0, 1e-10);
      EXPECT_LE(second, 1.0 + 1e-10);
    }
  }
}

TEST(ExpandTest, Examples) {
  const BiasedSiteBasis b = site_basis_from_mean(Vec3(0, 0, 0.5));
  const BasisExpansion z = expand(pauli_to_operator(PauliString("Z")), b);
  EXPECT_NEAR(z.coeff("I"), 0.5, 1e-12);
  EXPECT_NEAR(z.coeff("Z"), std::sqrt(0.75), 1e-12);
  EXPECT_NEAR(z.coeff("X"), 0.0, 1e-15);
  EXPECT_NEAR(z.coeff("Y"), 0.0, 1e-15);
  const BasisExpansion id = expand(Operator::identity(3), b);
  for (std::size_t i = 0; i < id.coeffs().size(); ++i) EXPECT_NEAR(id.coeffs()[i], i == 0 ? 1.0 : 0.0, 1e-12);
  EXPECT_THROW(expand(Operator(1, oracle::single('Y') * cplx(0, 1)), b), Error);
}

TEST(ExpandTest, MeanZeroMatchesStandardCoefficients) {
  Rng rng = make_rng(3);
  const Operator o = random_observable(3, rng);
  const BasisExpansion e = expand(o, standard_site_basis());
  const std::vector<double> c = pauli_coefficients(o);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(e.coeffs()[i], c[i], 1e-12);
}

TEST(PropertyTest, ExpansionReconstructs) {
  Rng rng = make_rng(9);
  for (int t = 0; t < 40; ++t) {
    const int n = 1 + t % 4;
    const ProductDistribution d = random_product(n, rng, 0.9);
    const Operator o = random_observable(n, rng);
    const BasisExpansion e = expand(o, build_bases(d));
    EXPECT_NEAR((e.to_operator().matrix() - o.matrix()).norm(), 0.0, 1e-8);
    // Reconstruct directly from the basis matrices as a second oracle.
    MatXc sum = MatXc::Zero(o.matrix().rows(), o.matrix().cols());
    for (std::size_t idx = 0; idx < e.coeffs().size(); ++idx) {
      MatXc term = MatXc::Identity(1, 1);
      for (int i = 0; i < n; ++i) {
        const std::size_t letter = (idx >> (2 * (n - 1 - i))) & 3u;
        term = oracle::kron(term, e.bases()[static_cast<std::size_t>(i)].ops[letter]);
      }
      sum += e.coeffs()[idx] * term;
    }
    EXPECT_NEAR((sum - o.matrix()).norm(), 0.0, 1e-8);
  }
}

TEST(TruncateTest, Examples) {
  Rng rng = make_rng(5);
  const ProductDistribution d = random_product(3, rng);
  const Operator o = random_observable(3, rng);
  const BasisExpansion e = expand(o, build_bases(d));
  EXPECT_NEAR((truncate(e, 3).op.matrix() - o.matrix()).norm(), 0.0, 1e-8);
  EXPECT_NEAR((truncate(e, 0).op.matrix() - e.coeffs()[0] * MatXc::Identity(8, 8)).norm(), 0.0, 1e-12);
  const BasisExpansion zz = expand(pauli_to_operator(PauliString("ZZ")), standard_site_basis());
  EXPECT_NEAR(truncate(zz, 1).op.matrix().norm(), 0.0, 1e-15);
  EXPECT_THROW(truncate(e, -1), Error);
}

TEST(TruncationErrorTest, Examples) {
  const ProductDistribution flat = ProductDistribution::iid(BlochDistribution::pauli_eigenstates(), 2);
  const Operator zz = pauli_to_operator(PauliString("ZZ"));
  const ErrorEstimate e = truncation_error_exact(zz, 1, flat);
  EXPECT_TRUE(e.exact);
  EXPECT_NEAR(e.value, 1.0 / 9.0, 1e-12);
  EXPECT_NEAR(truncation_error_exact(zz, 2, flat).value, 0.0, 1e-12);
}

TEST(TruncationErrorTest, MatchesDenseOracle) {
  Rng rng = make_rng(19);
  for (int t = 0; t < 10; ++t) {
    const int n = 1 + t % 3;
    const ProductDistribution d = random_product(n, rng);
    const Operator o = random_observable(n, rng);
    const BasisExpansion e = expand(o, build_bases(d));
    for (int deg = 0; deg <= n; ++deg) {
      const double dense = oracle::expected_sq_diff(o.matrix(), truncate(e, deg).op.matrix(), d);
      EXPECT_NEAR(truncation_error_exact(o, deg, d).value, dense, 1e-10);
    }
  }
}

TEST(TruncationErrorTest, GuardAndMonteCarlo) {
  Rng rng = make_rng(23);
  const ProductDistribution d = random_product(3, rng, 0.8, 4);
  const Operator o = random_observable(3, rng);
  EnumerationOptions tight;
  tight.enumeration_limit = 2;
  try {
    truncation_error_exact(o, 1, d, tight);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kGuardExceeded);
  }
  tight.mc_samples = 200000;
  tight.seed = 4;
  const ErrorEstimate mc = truncation_error_exact(o, 1, d, tight);
  const ErrorEstimate exact = truncation_error_exact(o, 1, d);
  EXPECT_FALSE(mc.exact);
  EXPECT_EQ(mc.samples, 200000u);
  EXPECT_GT(mc.std_error, 0.0);
  EXPECT_LE(std::abs(mc.value - exact.value), 4.0 * mc.std_error + 1e-12);
}

TEST(MatrixMTest, Examples) {
  EXPECT_TRUE(matrix_M(0.0).isApprox(Mat3c::Identity()));
  const Mat3c m = matrix_M(0.5);
  EXPECT_NEAR(std::abs(m(0, 1) - cplx(0, 0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m(1, 0) - cplx(0, -0.5)), 0.0, 1e-15);
  Eigen::SelfAdjointEigenSolver<Mat3c> es(m);
  EXPECT_NEAR(es.eigenvalues()(0), 0.5, 1e-12);
  EXPECT_NEAR(es.eigenvalues()(1), 1.0, 1e-12);
  EXPECT_NEAR(es.eigenvalues()(2), 1.5, 1e-12);
}

TEST(MatrixMTest, MatchesTraceOracle) {
  for (const Vec3& mean_vec : {Vec3(0, 0, 0.5), Vec3(0.3, -0.4, 0.2), Vec3(-0.7, 0.1, 0.0)}) {
    const BiasedSiteBasis b = site_basis_from_mean(mean_vec);
    const Mat3c m = matrix_M(b.mu);
    const Mat2c rho_bar = b.mean_state();
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) {
        const cplx tr = (b.ops[static_cast<std::size_t>(p + 1)] * b.ops[static_cast<std::size_t>(q + 1)] * rho_bar).trace();
        EXPECT_NEAR(std::abs(tr - m(p, q)), 0.0, 1e-10);
      }
  }
}

TEST(MatrixMprimeTest, Examples) {
  const auto flat = BlochDistribution::pauli_eigenstates();
  EXPECT_NEAR((matrix_Mprime(flat) - second_moment(flat)).norm(), 0.0, 1e-12);
  EXPECT_NEAR(matrix_Mprime(BlochDistribution::point_mass({0, 0, 0.5})).norm(), 0.0, 1e-12);
  const Mat3 m = matrix_Mprime(BlochDistribution::uniform({{0, 0, 1}, {0, 0, 0}}));
  EXPECT_NEAR((m - Vec3(0, 0, 1.0 / 3.0).asDiagonal().toDenseMatrix()).norm(), 0.0, 1e-12);
}

TEST(PropertyTest, MprimeMatchesDisplayedFormAndTraces) {
  Rng rng = make_rng(27);
  for (int t = 0; t < 200; ++t) {
    const BlochDistribution d = random_distribution(rng);
    const BiasedSiteBasis b = build_site_basis(d);
    const Mat3 mp = matrix_Mprime(d);
    const Mat3 sigma = covariance(rotate(d, b.rotation));
    const double s = std::sqrt(1 - b.mu * b.mu);
    Mat3 shown = sigma;
    for (int i = 0; i < 2; ++i) shown(i, 2) /= s, shown(2, i) /= s;
    shown(2, 2) /= s * s;
    EXPECT_NEAR((mp - shown).norm(), 0.0, 1e-10);
    Mat3 traced = Mat3::Zero();
    for (std::size_t a = 0; a < d.size(); ++a) {
      Vec3 v;
      for (int k = 0; k < 3; ++k)
        v(k) = oracle::expect(b.ops[static_cast<std::size_t>(k + 1)], oracle::bloch_rho(d.atoms()[a]));
      traced += d.weights()[a] * v * v.transpose();
    }
    EXPECT_NEAR((mp - traced).norm(), 0.0, 1e-10);
  }
}

TEST(EtaPrimeTest, Examples) {
  EXPECT_NEAR(eta_prime(0.5), 0.5 * (1 - std::sqrt(0.75)) / 0.75, 1e-15);
  EXPECT_NEAR(eta_prime(0.5), 0.08932, 1e-5);
  EXPECT_NEAR(eta_prime(1.0), 0.5, 1e-15);
  EXPECT_NEAR(eta_prime(0.1), oracle::eta_prime(0.1), 1e-15);
  EXPECT_NEAR(eta_prime(0.1), 0.0026654, 2e-7);
  EXPECT_THROW(eta_prime(0.0), Error);
  EXPECT_THROW(eta_prime(1.5), Error);
  for (double eta = 0.01; eta <= 1.0; eta += 0.01) {
    EXPECT_GT(eta_prime(eta), 0.0);
    EXPECT_NEAR(decay_bound(eta, 3), std::pow(1 - oracle::eta_prime(eta), 3), 1e-14);
  }
}

TEST(MinEigenvalueTest, Examples) {
  for (int k = 1; k <= 5; ++k) {
    const MinEigenvalueCheck c = verify_min_eigenvalue(0.0, k);
    EXPECT_NEAR(c.lambda_min, 1.0, 1e-12);
    EXPECT_NEAR(c.bound, 1.0, 1e-15);
  }
  const MinEigenvalueCheck tight = verify_min_eigenvalue(0.6, 2);
  EXPECT_NEAR(tight.lambda_min, 0.64, 1e-12);
  EXPECT_NEAR(tight.bound, 0.64, 1e-12);
  EXPECT_TRUE(tight.pass);
  const MinEigenvalueCheck three = verify_min_eigenvalue(0.5, 3);
  EXPECT_NEAR(three.bound, std::pow(0.75, 1.5), 1e-12);
  // Independent oracle: Re of the dense Kronecker power.
  MatXc mt(2, 2);
  mt << 1, cplx(0, 0.5), cplx(0, -0.5), 1;
  const MatXc k3 = oracle::kron(oracle::kron(mt, mt), mt);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k3.real());
  EXPECT_NEAR(three.lambda_min, es.eigenvalues()(0), 1e-12);
  EXPECT_GE(three.lambda_min, three.bound - 1e-10);
  EXPECT_THROW(verify_min_eigenvalue(0.5, 11), Error);
  EXPECT_THROW(verify_min_eigenvalue(0.5, 0), Error);
}

TEST(DeltaSigmaDeltaTest, Examples) {
  const SpectralCertificate pm = verify_delta_sigma_delta(BlochDistribution::point_mass({0, 0, 0.5}), 0.75);
  EXPECT_NEAR(pm.norm_delta_sigma_delta, 0.0, 1e-12);
  EXPECT_TRUE(pm.pass);
  const SpectralCertificate flat = verify_delta_sigma_delta(BlochDistribution::pauli_eigenstates(), 2.0 / 3.0);
  EXPECT_NEAR(flat.norm_delta_sigma_delta, 1.0 / 3.0, 1e-12);
  EXPECT_TRUE(flat.pass);
  EXPECT_THROW(verify_delta_sigma_delta(BlochDistribution::pauli_eigenstates(), 0.9), Error);
}

TEST(PropertyTest, DeltaSigmaDeltaAndOrderingOnRandomDistributions) {
  Rng rng = make_rng(55);
  for (int t = 0; t < 1000; ++t) {
    const double eta = t % 2 ? 0.1 : 0.3;
    RandomDistributionOptions opts;
    opts.max_second_moment = 1 - eta;
    const BlochDistribution d = random_distribution(rng, opts);
    const SpectralCertificate c = verify_delta_sigma_delta(d, eta);
    EXPECT_TRUE(c.pass) << t;
    EXPECT_EQ(c.pass, c.norm_delta_sigma_delta <= 1 - c.eta_prime + 1e-10);
    EXPECT_GE(mprime_ordering_margin(d, eta), -1e-9) << t;
  }
}

TEST(QuadraticFormTest, MatchesDenseEvaluation) {
  Rng rng = make_rng(61);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 3;
    const ProductDistribution d = random_product(n, rng);
    const Operator o = random_observable(n, rng);
    const BasisExpansion e = expand(o, build_bases(d));
    // E[tr(O^2 rho)] = tr(O^2 rho_bar) by linearity.
    std::vector<BlochVector> means;
    for (std::size_t i = 0; i < d.num_sites(); ++i) means.push_back(mean(d.site(i)));
    const double o2 = oracle::expect(o.matrix() * o.matrix(), oracle::product_rho(means));
    EXPECT_NEAR(quadratic_form_M(e), o2, 1e-8);
    EXPECT_LE(o2, 1.0 + 1e-9);
    for (int deg = -1; deg <= n; ++deg) {
      const MatXc tail = deg < 0 ? MatXc(MatXc::Zero(o.matrix().rows(), o.matrix().cols())) : truncate(e, deg).op.matrix();
      EXPECT_NEAR(quadratic_form_Mprime(e, d, deg), oracle::expected_sq_diff(o.matrix(), tail, d), 1e-8);
    }
  }
}

TEST(PropertyTest, DecayCertificate) {
  Rng rng = make_rng(71);
  const double eta = 0.2;
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + t % 5;
    const ProductDistribution d = random_product(n, rng, 1 - eta, 3);
    const Operator o = random_observable(n, rng);
    for (int deg = 0; deg <= n; ++deg) {
      const double err = truncation_error_exact(o, deg, d).value;
      EXPECT_LE(err, decay_bound(eta, deg) + 1e-9) << t << " " << deg;
      if (deg == n) {
        EXPECT_NEAR(err, 0.0, 1e-12);
      }
    }
  }
}

TEST(PropertyTest, MeanZeroReduction) {
  // On uniform Pauli eigenstates E[tr(P rho) tr(Q rho)] = delta_PQ / 3 per site,
  // so the tail error is sum_{|P| > d} c_P^2 3^{-|P|}.
  Rng rng = make_rng(83);
  for (int n = 1; n <= 4; ++n) {
    const ProductDistribution flat = ProductDistribution::iid(BlochDistribution::pauli_eigenstates(), static_cast<std::size_t>(n));
    const Operator o = random_observable(n, rng);
    const std::vector<double> c = pauli_coefficients(o);
    const BasisExpansion e = expand(o, build_bases(flat));
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(e.coeffs()[i], c[i], 1e-10);
    for (int deg = 0; deg <= n; ++deg) {
      double expect = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        const int w = word_degree(i, n);
        if (w > deg) expect += c[i] * c[i] * std::pow(3.0, -w);
      }
      EXPECT_NEAR(truncation_error_exact(o, deg, flat).value, expect, 1e-10);
    }
  }
}

}  // namespace
}  // namespace bpl
