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

#include "bpl/biased_basis.hpp"

#include <algorithm>
#include <cmath>

#include "bpl/detail/product_sum.hpp"
#include "bpl/detail/site_tensor.hpp"
#include "bpl/pauli.hpp"

namespace bpl {

namespace {

constexpr double kDegenerateTol = 1e-12;

int count_nonidentity(std::size_t index, int n) {
  int deg = 0;
  for (int i = 0; i < n; ++i) {
    if (index % 4 != 0) ++deg;
    index /= 4;
  }
  return deg;
}

std::vector<detail::SiteTable<4>> site_tables(const std::vector<BiasedSiteBasis>& bases,
                                              const ProductDistribution& dist) {
  require(bases.size() == dist.num_sites(), ErrorCode::kDimensionMismatch,
          "basis and distribution site counts differ");
  std::vector<detail::SiteTable<4>> tables(bases.size());
  for (std::size_t i = 0; i < bases.size(); ++i) {
    const auto& site = dist.site(i);
    tables[i].weights = site.weights();
    for (const auto& atom : site.atoms()) {
      const Eigen::Vector4d v = bases[i].values(atom);
      tables[i].values.push_back({v(0), v(1), v(2), v(3)});
    }
  }
  return tables;
}

}  // namespace

double BiasedSiteBasis::scale() const { return std::sqrt(1.0 - mu * mu); }

Mat4 BiasedSiteBasis::change_of_basis() const {
  const Mat3& r = rotation.r;
  const double s = scale();
  Mat4 t = Mat4::Zero();
  t(0, 0) = 1.0;
  for (int q = 0; q < 3; ++q) {
    t(0, q + 1) = mu * r(2, q);
    t(1, q + 1) = r(0, q);
    t(2, q + 1) = r(1, q);
    t(3, q + 1) = s * r(2, q);
  }
  return t;
}

Eigen::Vector4d BiasedSiteBasis::values(const BlochVector& v) const {
  const Vec3 a = rotation.r * v.vec();
  return {1.0, a.x(), a.y(), (a.z() - mu) / scale()};
}

Mat2c BiasedSiteBasis::mean_state() const {
  return rotation.u.adjoint() * (0.5 * (pauli(0) + mu * pauli(3))) * rotation.u;
}

BiasedSiteBasis site_basis_from_rotation(const Rotation& rot, double mu) {
  require(std::isfinite(mu) && mu >= 0.0, ErrorCode::kInvalidArgument, "mu must be >= 0");
  require(1.0 - mu * mu > kDegenerateTol, ErrorCode::kDegenerateDistribution,
          "mean Bloch vector has unit length; the biased Z element is undefined");
  BiasedSiteBasis b;
  b.rotation = rot;
  b.mu = mu;
  const Mat2c& u = rot.u;
  b.ops[0] = pauli(0);
  b.ops[1] = u.adjoint() * pauli(1) * u;
  b.ops[2] = u.adjoint() * pauli(2) * u;
  b.ops[3] = (u.adjoint() * pauli(3) * u - mu * pauli(0)) / b.scale();
  return b;
}

BiasedSiteBasis site_basis_from_mean(const Vec3& mean) {
  const Rotation rot = diagonalizing_rotation(mean);
  const double mu = mean.norm() <= 1e-12 ? 0.0 : std::max(0.0, (rot.r * mean).z());
  return site_basis_from_rotation(rot, mu);
}

BiasedSiteBasis build_site_basis(const BlochDistribution& d) {
  return site_basis_from_mean(mean(d).vec());
}

BiasedSiteBasis standard_site_basis() { return site_basis_from_rotation(Rotation::identity(), 0.0); }

std::vector<BiasedSiteBasis> build_bases(const ProductDistribution& d) {
  std::vector<BiasedSiteBasis> out;
  out.reserve(d.num_sites());
  for (const auto& s : d.sites()) out.push_back(build_site_basis(s));
  return out;
}

BasisExpansion::BasisExpansion(std::vector<BiasedSiteBasis> bases, std::vector<double> coeffs)
    : bases_(std::move(bases)), coeffs_(std::move(coeffs)) {
  require(!bases_.empty(), ErrorCode::kInvalidArgument, "expansion needs at least one site");
  require(coeffs_.size() == detail::ipow(4, num_qubits()), ErrorCode::kDimensionMismatch,
          "expansion needs 4^n coefficients");
}

double BasisExpansion::coeff(const std::string& word) const {
  require(static_cast<int>(word.size()) == num_qubits(), ErrorCode::kDimensionMismatch,
          "word length differs from qubit count");
  const PauliString p(word);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < word.size(); ++i) idx = idx * 4 + static_cast<std::size_t>(p.letter(i));
  return coeffs_[idx];
}

int BasisExpansion::degree_of(std::size_t index) const { return count_nonidentity(index, num_qubits()); }

Operator BasisExpansion::to_operator() const {
  const int n = num_qubits();
  std::vector<double> std_coeffs = coeffs_;
  for (int i = 0; i < n; ++i) {
    const Mat4 inv = bases_[static_cast<std::size_t>(i)].change_of_basis().inverse();
    detail::apply_site_map<4>(std_coeffs, n, i, inv);
  }
  return operator_from_pauli_coefficients(n, std_coeffs);
}

BasisExpansion BasisExpansion::degree_band(int lo, int hi) const {
  std::vector<double> out(coeffs_.size(), 0.0);
  const int n = num_qubits();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const int deg = count_nonidentity(i, n);
    if (deg > lo && deg <= hi) out[i] = coeffs_[i];
  }
  return BasisExpansion(bases_, std::move(out));
}

BasisExpansion expand(const Operator& o, const std::vector<BiasedSiteBasis>& bases) {
  const int n = o.num_qubits();
  require(static_cast<int>(bases.size()) == n, ErrorCode::kDimensionMismatch,
          "one site basis per qubit required");
  std::vector<double> c = pauli_coefficients(o);
  for (int i = 0; i < n; ++i)
    detail::apply_site_map<4>(c, n, i, bases[static_cast<std::size_t>(i)].change_of_basis());
  return BasisExpansion(bases, std::move(c));
}

BasisExpansion expand(const Operator& o, const BiasedSiteBasis& basis) {
  return expand(o, std::vector<BiasedSiteBasis>(static_cast<std::size_t>(o.num_qubits()), basis));
}

Truncation truncate(const BasisExpansion& expansion, int d) {
  require(d >= 0, ErrorCode::kInvalidArgument, "truncation degree must be >= 0");
  BasisExpansion kept = expansion.degree_band(-1, d);
  Operator op = kept.to_operator();
  return {std::move(kept), std::move(op)};
}

ErrorEstimate truncation_error_exact(const BasisExpansion& expansion, int d,
                                     const ProductDistribution& dist,
                                     const EnumerationOptions& opts) {
  require(d >= 0, ErrorCode::kInvalidArgument, "truncation degree must be >= 0");
  const int n = expansion.num_qubits();
  const BasisExpansion tail = expansion.degree_band(d, n);
  const auto tables = site_tables(expansion.bases(), dist);
  const std::span<const detail::SiteTable<4>> view(tables);
  ErrorEstimate out;
  if (detail::support_size<4>(view) <= opts.enumeration_limit) {
    out.value = detail::expected_square_by_enumeration<4>(tail.coeffs(), view);
    out.exact = true;
    return out;
  }
  require(opts.mc_samples.has_value(), ErrorCode::kGuardExceeded,
          "atom tuple count exceeds the enumeration limit; set a Monte-Carlo sample count");
  const auto mc = detail::expected_square_by_sampling<4>(tail.coeffs(), view, *opts.mc_samples, opts.seed);
  out.value = mc.mean;
  out.std_error = mc.std_error;
  out.exact = false;
  out.samples = *opts.mc_samples;
  return out;
}

ErrorEstimate truncation_error_exact(const Operator& o, int d, const ProductDistribution& dist,
                                     const EnumerationOptions& opts) {
  return truncation_error_exact(expand(o, build_bases(dist)), d, dist, opts);
}

Mat3c matrix_M(double mu) {
  require(std::abs(mu) < 1.0, ErrorCode::kInvalidArgument, "matrix_M requires |mu| < 1");
  Mat3c m = Mat3c::Identity();
  m(0, 1) = cplx(0, mu);
  m(1, 0) = cplx(0, -mu);
  return m;
}

Mat3 matrix_Mprime(const BiasedSiteBasis& basis, const BlochDistribution& d) {
  Mat3 m = Mat3::Zero();
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Vec3 v = basis.values(d.atoms()[i]).tail<3>();
    m += d.weights()[i] * (v * v.transpose());
  }
  return m;
}

Mat3 matrix_Mprime(const BlochDistribution& d) { return matrix_Mprime(build_site_basis(d), d); }

double quadratic_form_M(const BasisExpansion& expansion, int d) {
  const int n = expansion.num_qubits();
  const BasisExpansion band = expansion.degree_band(d, n);
  std::vector<cplx> y(band.coeffs().begin(), band.coeffs().end());
  for (int i = 0; i < n; ++i) {
    Mat4c g = Mat4c::Zero();
    g(0, 0) = 1.0;
    g.bottomRightCorner<3, 3>() = matrix_M(expansion.bases()[static_cast<std::size_t>(i)].mu);
    detail::apply_site_map<4>(y, n, i, g);
  }
  cplx acc = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) acc += band.coeffs()[k] * y[k];
  return acc.real();
}

double quadratic_form_Mprime(const BasisExpansion& expansion, const ProductDistribution& dist, int d) {
  const int n = expansion.num_qubits();
  require(static_cast<int>(dist.num_sites()) == n, ErrorCode::kDimensionMismatch,
          "distribution and expansion site counts differ");
  const BasisExpansion band = expansion.degree_band(d, n);
  std::vector<double> y = band.coeffs();
  for (int i = 0; i < n; ++i) {
    Mat4 g = Mat4::Zero();
    g(0, 0) = 1.0;
    g.bottomRightCorner<3, 3>() =
        matrix_Mprime(expansion.bases()[static_cast<std::size_t>(i)], dist.site(static_cast<std::size_t>(i)));
    detail::apply_site_map<4>(y, n, i, g);
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) acc += band.coeffs()[k] * y[k];
  return acc;
}

double eta_prime(double eta) {
  require(eta > 0.0 && eta <= 1.0, ErrorCode::kInvalidArgument, "eta must lie in (0, 1]");
  const double half = 1.0 - eta / 2.0;
  return std::min(eta * (1.0 - std::sqrt(half)) / half, eta / 2.0);
}

double decay_bound(double eta, int d) { return std::pow(1.0 - eta_prime(eta), d); }

MinEigenvalueCheck verify_min_eigenvalue(double mu, int k) {
  require(std::abs(mu) < 1.0, ErrorCode::kInvalidArgument, "verify_min_eigenvalue requires |mu| < 1");
  require(k >= 1, ErrorCode::kInvalidArgument, "k must be >= 1");
  require(k <= 10, ErrorCode::kGuardExceeded, "k is limited to 10");
  Mat2c tilde;
  tilde << 1, cplx(0, mu), cplx(0, -mu), 1;
  MatXc power = tilde;
  for (int i = 1; i < k; ++i) {
    MatXc next(power.rows() * 2, power.cols() * 2);
    for (Eigen::Index r = 0; r < power.rows(); ++r)
      for (Eigen::Index c = 0; c < power.cols(); ++c) next.block<2, 2>(2 * r, 2 * c) = power(r, c) * tilde;
    power.swap(next);
  }
  const MatX re = power.real();
  Eigen::SelfAdjointEigenSolver<MatX> es(re, Eigen::EigenvaluesOnly);
  MinEigenvalueCheck out;
  out.lambda_min = es.eigenvalues().minCoeff();
  out.bound = std::pow(1.0 - mu * mu, 0.5 * k);
  out.pass = out.lambda_min >= out.bound - 1e-10;
  return out;
}

SpectralCertificate verify_delta_sigma_delta(const BlochDistribution& d, double eta) {
  const double ep = eta_prime(eta);
  const double s_norm = spectral_norm(second_moment(d));
  require(s_norm <= 1.0 - eta + 1e-12, ErrorCode::kInvalidArgument,
          "||S||_op exceeds 1 - eta");
  const BlochDistribution rotated = rotate(d, diagonalizing_rotation(d));
  const double mu = mean(rotated).z;
  const double one_minus = 1.0 - mu * mu;
  const Vec3 delta(std::pow(one_minus, -0.25), std::pow(one_minus, -0.25), std::pow(one_minus, -0.5));
  const Mat3 dsd = delta.asDiagonal() * covariance(rotated) * delta.asDiagonal();
  SpectralCertificate out;
  out.eta = eta;
  out.eta_prime = ep;
  out.norm_delta_sigma_delta = spectral_norm(dsd);
  out.pass = out.norm_delta_sigma_delta <= 1.0 - ep + 1e-10;
  return out;
}

double mprime_ordering_margin(const BlochDistribution& d, double eta) {
  const BiasedSiteBasis basis = build_site_basis(d);
  const double s = basis.scale();
  const Mat3 target = (1.0 - eta_prime(eta)) * Vec3(s, s, 1.0).asDiagonal().toDenseMatrix();
  return min_eigenvalue(target - matrix_Mprime(basis, d));
}

}  // namespace bpl
