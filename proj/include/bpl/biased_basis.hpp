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

#pragma once

// Biased Pauli basis adapted to a product distribution over single-qubit
// states, and the spectral certificates that bound low-degree truncation
// error in that basis.
//
// For a site with mean state rho_bar = u^dagger (I + mu Z)/2 u the basis is
//   I,  X~ = u^dagger X u,  Y~ = u^dagger Y u,
//   Z~ = (u^dagger Z u - mu I) / sqrt(1 - mu^2).
// Every non-identity element has zero mean under the site distribution. The
// basis is not trace-orthogonal, so coefficients are obtained from the
// standard Pauli coefficients by a per-site change of basis.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "bpl/bloch.hpp"
#include "bpl/common.hpp"
#include "bpl/qsim.hpp"

namespace bpl {

struct BiasedSiteBasis {
  Rotation rotation;
  /// Length of the mean Bloch vector; the rotated mean is (0, 0, mu).
  double mu = 0.0;
  /// I, X~, Y~, Z~ as 2x2 matrices in the original frame.
  std::array<Mat2c, 4> ops;

  double scale() const;
  /// Maps standard letter coefficients (I, X, Y, Z) of a single-site operator
  /// to its coefficients over (I, X~, Y~, Z~).
  Mat4 change_of_basis() const;
  /// (1, tr(X~ rho), tr(Y~ rho), tr(Z~ rho)) for the state with Bloch vector v.
  Eigen::Vector4d values(const BlochVector& v) const;
  /// rho_bar in the original frame.
  Mat2c mean_state() const;
};

/// Throws kDegenerateDistribution when |mu| = 1.
BiasedSiteBasis build_site_basis(const BlochDistribution& d);
BiasedSiteBasis site_basis_from_mean(const Vec3& mean);
/// Rebuilds a basis from a stored frame (rotation plus mu).
BiasedSiteBasis site_basis_from_rotation(const Rotation& rot, double mu);
/// The unbiased Pauli basis (identity rotation, mu = 0).
BiasedSiteBasis standard_site_basis();
std::vector<BiasedSiteBasis> build_bases(const ProductDistribution& d);

/// Real coefficients over the tensor basis, indexed by
/// sum_i letter_i 4^(n-1-i) with letters (I, X~, Y~, Z~) = (0, 1, 2, 3).
class BasisExpansion {
 public:
  BasisExpansion(std::vector<BiasedSiteBasis> bases, std::vector<double> coeffs);

  int num_qubits() const { return static_cast<int>(bases_.size()); }
  const std::vector<BiasedSiteBasis>& bases() const { return bases_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  /// Coefficient of a word given as letters "IXYZ" (meaning I, X~, Y~, Z~).
  double coeff(const std::string& word) const;
  /// Degree of the basis element at `index`.
  int degree_of(std::size_t index) const;
  /// sum_P coeff(P) P as a dense operator.
  Operator to_operator() const;
  /// Copy keeping only coefficients with degree in (lo, hi].
  BasisExpansion degree_band(int lo, int hi) const;

 private:
  std::vector<BiasedSiteBasis> bases_;
  std::vector<double> coeffs_;
};

BasisExpansion expand(const Operator& o, const std::vector<BiasedSiteBasis>& bases);
BasisExpansion expand(const Operator& o, const BiasedSiteBasis& basis);

struct Truncation {
  BasisExpansion retained;
  Operator op;
};

/// O^{<=d}: the degree <= d part, as a sparse expansion and a dense operator.
Truncation truncate(const BasisExpansion& expansion, int d);

struct ErrorEstimate {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = true;
  std::size_t samples = 0;
};

struct EnumerationOptions {
  /// Enumerate atom tuples when their count is at most this.
  double enumeration_limit = 1e7;
  /// Monte-Carlo sample count used beyond the limit; without it the guard throws.
  std::optional<std::size_t> mc_samples;
  std::uint64_t seed = 0;
};

/// E_{rho ~ D}[(tr(O rho) - tr(O^{<=d} rho))^2], truncating in the basis
/// built from D.
ErrorEstimate truncation_error_exact(const Operator& o, int d, const ProductDistribution& dist,
                                     const EnumerationOptions& opts = {});
/// Same, with the tail taken from an existing expansion whose bases need not
/// come from `dist`.
ErrorEstimate truncation_error_exact(const BasisExpansion& expansion, int d,
                                     const ProductDistribution& dist,
                                     const EnumerationOptions& opts = {});

/// M(P, Q) = tr(P Q rho_bar) over (X~, Y~, Z~) for a mean state (I + mu Z)/2.
Mat3c matrix_M(double mu);
/// M'(P, Q) = E[tr(P rho) tr(Q rho)] over (X~, Y~, Z~) in the frame of the
/// basis built from d.
Mat3 matrix_Mprime(const BlochDistribution& d);
Mat3 matrix_Mprime(const BiasedSiteBasis& basis, const BlochDistribution& d);

/// sum_{|S| > d} O_S^dagger (tensor_{i in S} M_i) O_S, using the mean of each
/// site basis. With d = -1 this equals E[tr(O^2 rho)].
double quadratic_form_M(const BasisExpansion& expansion, int d = -1);
/// sum_{|S| > d} O_S^dagger (tensor_{i in S} M'_i) O_S, which equals
/// E[tr(O^{>d} rho)^2] under dist.
double quadratic_form_Mprime(const BasisExpansion& expansion, const ProductDistribution& dist,
                             int d = -1);

/// eta' = min{eta (1 - sqrt(1 - eta/2)) / (1 - eta/2), eta/2}.
double eta_prime(double eta);
/// (1 - eta'(eta))^d.
double decay_bound(double eta, int d);

struct MinEigenvalueCheck {
  double lambda_min = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// lambda_min(Re(M~^{tensor k})) against (1 - mu^2)^{k/2}, M~ = [[1, i mu], [-i mu, 1]].
MinEigenvalueCheck verify_min_eigenvalue(double mu, int k);

struct SpectralCertificate {
  double eta = 0.0;
  double eta_prime = 0.0;
  double norm_delta_sigma_delta = 0.0;
  bool pass = false;
};

/// ||Delta Sigma Delta||_op <= 1 - eta' in the diagonalizing frame of d,
/// Delta = diag((1-mu^2)^{-1/4}, (1-mu^2)^{-1/4}, (1-mu^2)^{-1/2}).
/// Throws when ||S||_op > 1 - eta.
SpectralCertificate verify_delta_sigma_delta(const BlochDistribution& d, double eta);

/// lambda_min((1 - eta') diag(s, s, 1) - M'), s = sqrt(1 - mu^2).
double mprime_ordering_margin(const BlochDistribution& d, double eta);

}  // namespace bpl
