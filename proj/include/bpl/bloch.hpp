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

#include <cstddef>
#include <span>
#include <vector>

#include "bpl/common.hpp"

namespace bpl {

/// Bloch coordinates (x, y, z) of the single-qubit state (I + x X + y Y + z Z)/2.
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  BlochVector() = default;
  BlochVector(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}
  explicit BlochVector(const Vec3& v) : x(v.x()), y(v.y()), z(v.z()) {}

  Vec3 vec() const { return {x, y, z}; }
  double norm() const { return vec().norm(); }
  bool operator==(const BlochVector&) const = default;
};

/// Throws unless |v| <= 1 + 1e-12.
void validate(const BlochVector& v);

/// A single-qubit frame change. `u` acts on states as rho -> u rho u^dagger;
/// `r` is the induced map on Bloch vectors, alpha -> r alpha. Equivalently
/// u^dagger P u = sum_Q r(P, Q) Q for P, Q in {X, Y, Z}.
struct Rotation {
  Mat2c u = Mat2c::Identity();
  Mat3 r = Mat3::Identity();

  static Rotation identity() { return {}; }
  /// Builds the rotation from a unitary, deriving r(P, Q) = tr(P u Q u^dagger)/2.
  static Rotation from_unitary(const Mat2c& u);
  /// Rotation by `angle` about the unit axis `axis`: u = exp(-i angle/2 axis.sigma).
  static Rotation about_axis(const Vec3& axis, double angle);
};

/// Finite weighted set of Bloch vectors. Atoms may lie inside the ball.
class BlochDistribution {
 public:
  BlochDistribution(std::vector<BlochVector> atoms, std::vector<double> weights);

  /// Equal weights.
  static BlochDistribution uniform(std::vector<BlochVector> atoms);
  static BlochDistribution point_mass(const BlochVector& v);
  /// Equal-weight atoms at +-(1 - eta) * axis.
  static BlochDistribution two_point(const Vec3& axis, double eta);
  /// +radius * axis with probability p, -radius * axis otherwise.
  static BlochDistribution bernoulli_axis(const Vec3& axis, double p, double radius);
  /// k equal-weight atoms on the unit sphere from a Fibonacci lattice.
  static BlochDistribution uniform_sphere(std::size_t k);
  /// The six Pauli eigenstates +-x, +-y, +-z with equal weights.
  static BlochDistribution pauli_eigenstates();

  const std::vector<BlochVector>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return atoms_.size(); }
  /// True when every atom has unit norm (within 1e-12).
  bool on_sphere() const;

 private:
  std::vector<BlochVector> atoms_;
  std::vector<double> weights_;
};

BlochVector mean(const BlochDistribution& d);
/// S(P, Q) = E[alpha_P alpha_Q] over {X, Y, Z}.
Mat3 second_moment(const BlochDistribution& d);
/// S - mu mu^T.
Mat3 covariance(const BlochDistribution& d);
/// Largest absolute eigenvalue of a symmetric 3x3 matrix.
double spectral_norm(const Mat3& m);
double min_eigenvalue(const Mat3& m);

/// Rotation taking the mean Bloch vector to (0, 0, |mu|). Identity when the
/// mean vanishes or already points along +z.
Rotation diagonalizing_rotation(const BlochDistribution& d);
Rotation diagonalizing_rotation(const Vec3& mean);
BlochDistribution rotate(const BlochDistribution& d, const Rotation& rot);

BlochVector sample(const BlochDistribution& d, Rng& rng);

/// Independent (possibly heterogeneous) single-qubit distributions, one per site.
class ProductDistribution {
 public:
  explicit ProductDistribution(std::vector<BlochDistribution> sites);
  static ProductDistribution iid(const BlochDistribution& d, std::size_t n);

  std::size_t num_sites() const { return sites_.size(); }
  const BlochDistribution& site(std::size_t i) const { return sites_[i]; }
  const std::vector<BlochDistribution>& sites() const { return sites_; }
  /// Product of the atom counts, i.e. the number of atom tuples.
  double support_size() const;
  /// max_i ||S_i||_op.
  double max_second_moment_norm() const;

 private:
  std::vector<BlochDistribution> sites_;
};

struct RandomDistributionOptions {
  std::size_t min_atoms = 2;
  std::size_t max_atoms = 6;
  /// Target bound on ||S||_op; atoms are resampled, then shrunk radially,
  /// until it holds.
  double max_second_moment = 0.8;
  /// Keep atoms on the unit sphere; when the bound cannot be met after a few
  /// attempts the atoms are shrunk anyway.
  bool prefer_sphere = true;
};

/// Random atom distribution with a random mean direction and spread.
BlochDistribution random_distribution(Rng& rng, const RandomDistributionOptions& opts = {});

}  // namespace bpl
