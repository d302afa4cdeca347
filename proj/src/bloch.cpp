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

#include "bpl/bloch.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "bpl/pauli.hpp"

namespace bpl {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kWeightTol = 1e-12;

Vec3 unit_axis(const Vec3& axis) {
  const double len = axis.norm();
  require(len > 0.0, ErrorCode::kInvalidArgument, "axis must be nonzero");
  return axis / len;
}

}  // namespace

void validate(const BlochVector& v) {
  const double n2 = v.x * v.x + v.y * v.y + v.z * v.z;
  require(std::isfinite(n2) && n2 <= 1.0 + kNormTol, ErrorCode::kInvalidArgument,
          "Bloch vector outside the unit ball");
}

Rotation Rotation::from_unitary(const Mat2c& u) {
  Rotation rot;
  rot.u = u;
  for (int p = 0; p < 3; ++p) {
    for (int q = 0; q < 3; ++q) {
      rot.r(p, q) = 0.5 * (pauli(p + 1) * u * pauli(q + 1) * u.adjoint()).trace().real();
    }
  }
  return rot;
}

Rotation Rotation::about_axis(const Vec3& axis, double angle) {
  const Vec3 n = unit_axis(axis);
  const Mat2c ns = n.x() * pauli(1) + n.y() * pauli(2) + n.z() * pauli(3);
  const Mat2c u = std::cos(angle / 2) * pauli(0) - cplx(0, std::sin(angle / 2)) * ns;
  return from_unitary(u);
}

BlochDistribution::BlochDistribution(std::vector<BlochVector> atoms,
                                     std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  require(!atoms_.empty(), ErrorCode::kInvalidArgument, "distribution needs at least one atom");
  require(atoms_.size() == weights_.size(), ErrorCode::kInvalidArgument,
          "atoms and weights differ in length");
  double total = 0.0;
  for (double w : weights_) {
    require(std::isfinite(w) && w >= 0.0, ErrorCode::kInvalidArgument,
            "weights must be nonnegative");
    total += w;
  }
  require(std::abs(total - 1.0) <= kWeightTol, ErrorCode::kInvalidArgument,
          "weights must sum to 1");
  for (const auto& a : atoms_) validate(a);
}

BlochDistribution BlochDistribution::uniform(std::vector<BlochVector> atoms) {
  require(!atoms.empty(), ErrorCode::kInvalidArgument, "distribution needs at least one atom");
  std::vector<double> w(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
  // Make the weights sum to one exactly in floating point.
  w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
  return BlochDistribution(std::move(atoms), std::move(w));
}

BlochDistribution BlochDistribution::point_mass(const BlochVector& v) {
  return BlochDistribution({v}, {1.0});
}

BlochDistribution BlochDistribution::two_point(const Vec3& axis, double eta) {
  require(eta >= 0.0 && eta <= 1.0, ErrorCode::kInvalidArgument, "eta must lie in [0, 1]");
  const Vec3 a = (1.0 - eta) * unit_axis(axis);
  return BlochDistribution({BlochVector(a), BlochVector(Vec3(-a))}, {0.5, 0.5});
}

BlochDistribution BlochDistribution::bernoulli_axis(const Vec3& axis, double p, double radius) {
  require(p >= 0.0 && p <= 1.0, ErrorCode::kInvalidArgument, "p must lie in [0, 1]");
  require(radius >= 0.0 && radius <= 1.0, ErrorCode::kInvalidArgument,
          "radius must lie in [0, 1]");
  const Vec3 a = radius * unit_axis(axis);
  return BlochDistribution({BlochVector(a), BlochVector(Vec3(-a))}, {p, 1.0 - p});
}

BlochDistribution BlochDistribution::uniform_sphere(std::size_t k) {
  require(k >= 1, ErrorCode::kInvalidArgument, "uniform_sphere needs k >= 1");
  std::vector<BlochVector> atoms;
  atoms.reserve(k);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < k; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(k);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    atoms.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
  }
  return uniform(std::move(atoms));
}

BlochDistribution BlochDistribution::pauli_eigenstates() {
  return uniform({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}});
}

bool BlochDistribution::on_sphere() const {
  for (const auto& a : atoms_)
    if (std::abs(a.norm() - 1.0) > kNormTol) return false;
  return true;
}

BlochVector mean(const BlochDistribution& d) {
  Vec3 m = Vec3::Zero();
  for (std::size_t i = 0; i < d.size(); ++i) m += d.weights()[i] * d.atoms()[i].vec();
  return BlochVector(m);
}

Mat3 second_moment(const BlochDistribution& d) {
  Mat3 s = Mat3::Zero();
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Vec3 a = d.atoms()[i].vec();
    s += d.weights()[i] * (a * a.transpose());
  }
  return s;
}

Mat3 covariance(const BlochDistribution& d) {
  const Vec3 m = mean(d).vec();
  return second_moment(d) - m * m.transpose();
}

double spectral_norm(const Mat3& m) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Mat3& m) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Rotation diagonalizing_rotation(const Vec3& m) {
  const double len = m.norm();
  // Round-off in a zero mean must not pick an arbitrary frame.
  if (len <= 1e-12) return Rotation::identity();
  const Vec3 dir = m / len;
  const Vec3 z(0, 0, 1);
  const Vec3 cross = dir.cross(z);
  const double s = cross.norm();
  const double c = dir.dot(z);
  if (s < 1e-15) {
    if (c > 0) return Rotation::identity();
    return Rotation::about_axis(Vec3(1, 0, 0), std::numbers::pi);
  }
  return Rotation::about_axis(cross / s, std::atan2(s, c));
}

Rotation diagonalizing_rotation(const BlochDistribution& d) {
  return diagonalizing_rotation(mean(d).vec());
}

BlochDistribution rotate(const BlochDistribution& d, const Rotation& rot) {
  std::vector<BlochVector> atoms;
  atoms.reserve(d.size());
  for (const auto& a : d.atoms()) {
    Vec3 v = rot.r * a.vec();
    // Orthogonal maps preserve the norm; clip round-off so unit atoms stay valid.
    const double len = v.norm();
    if (len > 1.0) v /= len;
    atoms.emplace_back(v);
  }
  return BlochDistribution(std::move(atoms), d.weights());
}

BlochVector sample(const BlochDistribution& d, Rng& rng) {
  if (d.size() == 1) return d.atoms().front();
  std::discrete_distribution<std::size_t> pick(d.weights().begin(), d.weights().end());
  return d.atoms()[pick(rng)];
}

ProductDistribution::ProductDistribution(std::vector<BlochDistribution> sites)
    : sites_(std::move(sites)) {
  require(!sites_.empty(), ErrorCode::kInvalidArgument, "product distribution needs >= 1 site");
}

ProductDistribution ProductDistribution::iid(const BlochDistribution& d, std::size_t n) {
  return ProductDistribution(std::vector<BlochDistribution>(n, d));
}

double ProductDistribution::support_size() const {
  double total = 1.0;
  for (const auto& s : sites_) total *= static_cast<double>(s.size());
  return total;
}

double ProductDistribution::max_second_moment_norm() const {
  double worst = 0.0;
  for (const auto& s : sites_) worst = std::max(worst, spectral_norm(second_moment(s)));
  return worst;
}

BlochDistribution random_distribution(Rng& rng, const RandomDistributionOptions& opts) {
  require(opts.min_atoms >= 1 && opts.min_atoms <= opts.max_atoms,
          ErrorCode::kInvalidArgument, "bad atom-count range");
  require(opts.max_second_moment > 0.0 && opts.max_second_moment <= 1.0,
          ErrorCode::kInvalidArgument, "max_second_moment must lie in (0, 1]");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> count(opts.min_atoms, opts.max_atoms);

  auto random_unit = [&] {
    Vec3 v;
    do {
      v = Vec3(gauss(rng), gauss(rng), gauss(rng));
    } while (v.norm() < 1e-9);
    return Vec3(v.normalized());
  };

  constexpr int kSphereAttempts = 12;
  for (int attempt = 0;; ++attempt) {
    const std::size_t k = count(rng);
    const Vec3 bias_dir = random_unit();
    const double bias = 2.5 * unit(rng);
    std::vector<Vec3> atoms;
    std::vector<double> weights;
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      Vec3 v = (bias * bias_dir + Vec3(gauss(rng), gauss(rng), gauss(rng)));
      if (v.norm() < 1e-9) v = bias_dir;
      v.normalize();
      if (!opts.prefer_sphere) v *= 0.3 + 0.7 * unit(rng);
      atoms.push_back(v);
      const double w = -std::log(1.0 - unit(rng)) + 1e-3;
      weights.push_back(w);
      total += w;
    }
    for (auto& w : weights) w /= total;
    // Renormalize so the weights sum to one in floating point.
    weights.back() = 1.0 - std::accumulate(weights.begin(), weights.end() - 1, 0.0);

    auto build = [&](double scale) {
      std::vector<BlochVector> out;
      for (const auto& v : atoms) out.emplace_back(Vec3(scale * v));
      return BlochDistribution(std::move(out), weights);
    };
    BlochDistribution d = build(1.0);
    const double norm = spectral_norm(second_moment(d));
    if (norm <= opts.max_second_moment) return d;
    if (opts.prefer_sphere && attempt + 1 < kSphereAttempts) continue;
    // S scales with the square of the radius.
    return build(std::sqrt(opts.max_second_moment / norm) * (1.0 - 1e-12));
  }
}

}  // namespace bpl
