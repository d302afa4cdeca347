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

// Biased Fourier analysis of multilinear functions on [-1, 1]^n under i.i.d.
// product distributions, plus the majority and linear-code constructions used
// by the negative-result demos.
//
// Subsets of [n] are bit masks: bit i set means variable i is in S.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "bpl/biased_basis.hpp"
#include "bpl/common.hpp"

namespace bpl {

using Subset = std::uint32_t;

inline constexpr int kMaxDenseVars = 24;
inline constexpr int kMaxExhaustiveVars = 20;

class MultilinearFunction {
 public:
  MultilinearFunction() = default;
  /// Zero coefficients are dropped.
  MultilinearFunction(int n, std::map<Subset, double> coeffs);
  /// From a dense 2^n table of monomial coefficients.
  static MultilinearFunction from_dense(int n, const std::vector<double>& dense);
  /// Monomial coefficients of the function whose values on {-1, 1}^n are
  /// `values`; vertex index bit i set means x_i = -1.
  static MultilinearFunction from_vertex_values(int n, std::vector<double> values);

  int num_vars() const { return n_; }
  const std::map<Subset, double>& coeffs() const { return coeffs_; }
  double coeff(Subset s) const;
  int degree() const;
  std::vector<double> dense() const;

  double operator()(std::span<const double> x) const;

  /// max |f| over hypercube vertices, exhaustive for n <= 20, otherwise over
  /// `samples` random vertices.
  double max_abs_on_vertices(std::uint64_t seed = 0, std::size_t samples = 100000) const;
  bool is_bounded(double tol = 1e-9, std::uint64_t seed = 0) const;

 private:
  int n_ = 0;
  std::map<Subset, double> coeffs_;
};

/// Discrete distribution on [-1, 1]; the product distribution is i.i.d.
class IntervalDistribution {
 public:
  IntervalDistribution(std::vector<double> atoms, std::vector<double> weights);
  static IntervalDistribution uniform(std::vector<double> atoms);

  const std::vector<double>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return atoms_.size(); }

  double mean() const;
  double variance() const;
  /// True when every atom lies in [-(1 - eta), 1 - eta].
  bool within(double eta) const;
  double sample(Rng& rng) const;

 private:
  std::vector<double> atoms_;
  std::vector<double> weights_;
};

/// prod_{i in S} (x_i - mu) / scale.
double biased_char(Subset s, std::span<const double> x, double mu, double scale);

/// Dense coefficients of f over the basis prod_{i in S} (x_i - mu) / scale,
/// indexed by mask.
struct BiasedCoefficients {
  int n = 0;
  double mu = 0.0;
  double scale = 1.0;
  std::vector<double> coeffs;
};

/// Change of basis x_i = scale y_i + mu applied variable by variable.
BiasedCoefficients expand_biased(const MultilinearFunction& f, double mu, double scale);
/// The mu-biased Bernoulli basis, scale = sqrt(1 - mu^2).
BiasedCoefficients expand_psi(const MultilinearFunction& f, double mu);
/// Inverse of expand_biased.
MultilinearFunction to_monomial(const BiasedCoefficients& c);

/// f^{<=d} in the psi basis, mapped back to monomials.
MultilinearFunction truncate_classical(const MultilinearFunction& f, int d, double mu);

/// E_{x ~ D^n}[(f(x) - f^{<=d}(x))^2] with the truncation taken in the psi
/// basis for the mean of D. Enumerates |D|^n atom tuples within the limit.
ErrorEstimate truncation_error_classical(const MultilinearFunction& f, const IntervalDistribution& d,
                                         int degree, const EnumerationOptions& opts = {});
/// sum_{|S| > d} f^(S)^2 (sigma^2 / (1 - mu^2))^{|S|}.
double truncation_error_closed_form(const MultilinearFunction& f, const IntervalDistribution& d,
                                    int degree);
/// (sigma^2 / (1 - mu^2))^d.
double classical_decay_bound(const IntervalDistribution& d, int degree);

/// Level coefficients f^(k), k = 0..n, of majority on n (odd) bits.
std::vector<double> majority_levels(int n);
/// Majority as a multilinear function (n odd, n <= 20).
MultilinearFunction majority_function(int n);

struct BlowupResult {
  int n = 0;
  double delta = 0.0;
  int degree = 0;
  double t_star = 0.0;
  double max_abs = 0.0;
};

/// max over a uniform grid in [a, b] of |sum_{k <= floor(delta n)} f^(k) C(n, k) t^k|.
BlowupResult truncation_blowup_scan(int n, double delta, double a, double b, int grid = 2001);

/// Monomial coefficients (ascending) of the monic Chebyshev polynomial T_d / 2^{d-1}.
std::vector<double> monic_chebyshev(int d);
/// max over a uniform grid in [a, b] of |p|, p given by ascending coefficients.
double poly_max_abs(const std::vector<double>& p, double a, double b, int grid = 4001);

/// Binary linear code given by generator rows; bit i of a word is coordinate i.
class LinearCode {
 public:
  LinearCode(int n, std::vector<std::uint32_t> generators);
  static LinearCode repetition(int n);
  static LinearCode random(int n, int k, Rng& rng);

  int length() const { return n_; }
  int dimension() const { return static_cast<int>(generators_.size()); }
  const std::vector<std::uint32_t>& generators() const { return generators_; }
  std::vector<std::uint32_t> codewords() const;
  /// Exhaustive minimum Hamming weight over non-zero codewords.
  int min_distance() const;
  /// Generators are linearly independent.
  bool full_rank() const;
  /// Bit 0 maps to +1, bit 1 to -1.
  std::vector<double> to_signs(std::uint32_t word) const;

 private:
  int n_;
  std::vector<std::uint32_t> generators_;
};

struct CodeDistribution {
  LinearCode code;
  double eta = 0.1;
  std::vector<std::uint32_t> codewords;
  /// (1 - eta) c for each codeword, uniform weight.
  std::vector<std::vector<double>> atoms;
  /// Uniform +-1 label per codeword.
  std::vector<double> labels;
  int attempts = 0;
};

/// Rejection-samples generator matrices of dimension max(1, round(rate n))
/// until the code is full rank with minimum distance >= ceil(n / 4).
CodeDistribution build_code_distribution(int n, Rng& rng, double eta = 0.1, double rate = 0.1,
                                         int max_attempts = 10000);

/// Walsh-Hadamard transform in place; after it t[S] = sum_x t[x] (-1)^{|S & x|}.
void walsh_hadamard(std::vector<double>& t);

}  // namespace bpl
