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

// Low-degree regression learners for channel outputs on product states and
// for bounded multilinear functions on [-1, 1]^n.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bpl/biased_basis.hpp"
#include "bpl/classical_fourier.hpp"
#include "bpl/common.hpp"
#include "bpl/qsim.hpp"

namespace bpl {

/// ceil(log(1/epsilon) / log(1/(1 - rate))).
int required_degree(double epsilon, double rate);

/// One feature: a product of non-identity letters (1, 2, 3) on distinct sites.
struct Term {
  std::vector<int> sites;
  std::vector<int> letters;

  int degree() const { return static_cast<int>(sites.size()); }
  /// Index of the word in a 4^n tensor with site 0 most significant.
  std::size_t tensor_index(int n) const;
};

/// All terms of degree <= d, ordered by degree, then sites, then letters.
/// The constant term comes first.
std::vector<Term> enumerate_terms(int n, int d, int letters = 3);
/// sum_{k <= d} C(n, k) letters^k.
std::size_t feature_count(int n, int d, int letters = 3);

VecX feature_map(const ProductState& s, const std::vector<BiasedSiteBasis>& bases,
                 const std::vector<Term>& terms);
VecX feature_map(const ProductState& s, const std::vector<BiasedSiteBasis>& bases, int d);

/// Label precision: exact expectation values or a fixed number of shots.
struct Shots {
  std::optional<long> count;

  static Shots exact() { return {}; }
  static Shots fixed(long n) { return {n}; }
  bool is_exact() const { return !count.has_value(); }
};

struct TrainingSet {
  std::vector<ProductState> descriptions;
  std::vector<double> labels;
  Shots shots;
  std::uint64_t seed = 0;
};

/// m product states drawn from `dist`, each labelled with an estimate of
/// tr(o e[rho]). Sample i uses its own stream derived from (seed, i).
TrainingSet generate_dataset(const ProductDistribution& dist, const KrausChannel& e,
                             const Operator& o, std::size_t m, Shots shots, std::uint64_t seed);

/// Accumulates X^T X and X^T y row block by row block.
class NormalEquations {
 public:
  explicit NormalEquations(Eigen::Index features);
  void add(const MatX& rows, const VecX& labels);
  void add_row(const VecX& row, double label);
  /// Minimizes ||X w - y||^2 + ridge ||w||^2. With ridge = 0 a singular
  /// system throws kRankDeficient.
  VecX solve(double ridge) const;
  const MatX& gram() const { return gram_; }
  const VecX& moment() const { return moment_; }

 private:
  MatX gram_;
  VecX moment_;
};

VecX fit_least_squares(const MatX& features, const VecX& labels, double ridge);

/// Degree <= d predictor h(rho) = sum_t w_t prod_{i in t} tr(P~_i rho_i).
class Hypothesis {
 public:
  Hypothesis(std::vector<BiasedSiteBasis> bases, int degree, std::vector<Term> terms, VecX weights);

  int num_qubits() const { return static_cast<int>(bases_.size()); }
  int degree() const { return degree_; }
  const std::vector<BiasedSiteBasis>& bases() const { return bases_; }
  const std::vector<Term>& terms() const { return terms_; }
  const VecX& weights() const { return weights_; }

  double predict(const ProductState& s) const;
  /// The weights as a coefficient tensor over the site bases.
  BasisExpansion to_expansion() const;
  /// H with h(rho) = tr(H rho).
  Operator to_operator() const;

 private:
  std::vector<BiasedSiteBasis> bases_;
  int degree_;
  std::vector<Term> terms_;
  VecX weights_;
};

/// E_{rho ~ dist}[(sum_P a_P tr(P rho))^2] for a coefficient tensor over
/// per-site bases, contracting per-site moment matrices E[v v^T].
double expected_square(const BasisExpansion& a, const ProductDistribution& dist);

/// E_{rho ~ dist}[(tr(target rho) - h(rho))^2].
double exact_test_mse(const Hypothesis& h, const Operator& target, const ProductDistribution& dist);

struct ShotsPolicy {
  enum class Kind { kExact, kFixed, kAuto };
  Kind kind = Kind::kFixed;
  long fixed = 10000;
  /// kAuto uses ceil(constant * log(m + 1/epsilon^2 + 1/delta)).
  double constant = 1000.0;
};

struct LearnOptions {
  double epsilon = 0.05;
  double delta = 0.1;
  /// Unset means estimate from sampled descriptions.
  std::optional<double> eta;
  /// Check ||S||_op <= 1 - eta for every site before learning.
  bool verify_eta = true;
  std::optional<int> degree;
  std::optional<std::size_t> samples;
  double sample_constant = 10.0;
  ShotsPolicy shots;
  double ridge = 1e-8;
  std::uint64_t seed = 0;
  /// Use the unbiased Pauli basis on every site instead of the biased one.
  bool standard_basis = false;
};

struct LearnReport {
  double eta = 0.0;
  bool eta_estimated = false;
  double eta_prime = 0.0;
  int degree = 0;
  std::size_t samples = 0;
  std::size_t features = 0;
  std::optional<long> shots;
  double sample_constant = 0.0;
  double ridge = 0.0;
  std::uint64_t seed = 0;
  double train_mse = 0.0;
  double test_mse = 0.0;
  double truncation_bound = 0.0;
};

/// m = max(F, ceil(C min(n^d, F) log(1/delta))), F the feature count.
std::size_t sample_size(int n, int d, double constant, double delta, int letters = 3);

std::pair<Hypothesis, LearnReport> learn_channel(const ProductDistribution& dist, const KrausChannel& e,
                                                 const Operator& o, const LearnOptions& opts = {});

/// Fits a hypothesis of degree d on a fixed training set.
Hypothesis fit_hypothesis(const std::vector<BiasedSiteBasis>& bases, int d, const TrainingSet& data,
                          double ridge);

struct SecondMomentEstimate {
  std::vector<Mat3> s_hat;
  double max_norm = 0.0;
  /// 1 - max_i ||S_hat_i||_op.
  double eta_hat = 0.0;
  /// Deviation allowance sqrt(2 log(6 n / delta) / m); eta_hat - shrinkage is
  /// a conservative plug-in value.
  double shrinkage = 0.0;
};

SecondMomentEstimate estimate_second_moment_bound(const std::vector<ProductState>& descriptions,
                                                  double delta = 0.1);

/// Degree <= d predictor over prod_{i in S} (x_i - mu) / sigma.
class ClassicalHypothesis {
 public:
  ClassicalHypothesis(int n, double mu, double sigma, int degree, std::vector<Subset> terms, VecX weights);

  int num_vars() const { return n_; }
  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  int degree() const { return degree_; }
  const std::vector<Subset>& terms() const { return terms_; }
  const VecX& weights() const { return weights_; }

  double predict(std::span<const double> x) const;
  /// The predictor as a multilinear function.
  MultilinearFunction to_function() const;

 private:
  int n_;
  double mu_;
  double sigma_;
  int degree_;
  std::vector<Subset> terms_;
  VecX weights_;
};

/// Subsets of size <= d ordered by size, then lexicographically by members.
std::vector<Subset> enumerate_subsets(int n, int d);

struct ClassicalLearnOptions {
  double epsilon = 0.05;
  double delta = 0.1;
  /// Unset means 1 - max |atom|.
  std::optional<double> eta;
  std::optional<int> degree;
  std::optional<std::size_t> samples;
  double sample_constant = 10.0;
  double ridge = 1e-8;
  std::uint64_t seed = 0;
};

struct ClassicalLearnReport {
  double eta = 0.0;
  int degree = 0;
  std::size_t samples = 0;
  std::size_t features = 0;
  double sample_constant = 0.0;
  double ridge = 0.0;
  std::uint64_t seed = 0;
  double train_mse = 0.0;
  double test_mse = 0.0;
  double direct_test_mse = 0.0;
  /// Regression weight minus direct estimate, over its standard error.
  double rms_z = 0.0;
  double max_abs_z = 0.0;
};

struct ClassicalFit {
  ClassicalHypothesis regression;
  ClassicalHypothesis direct;
  /// Standard errors of the direct estimates, aligned with the terms.
  VecX direct_std_error;
  ClassicalLearnReport report;
};

/// Regression plus direct estimation f^(S) = E[f(x) phi_S(x)] on the same sample.
ClassicalFit learn_classical(const IntervalDistribution& dist, const MultilinearFunction& f,
                             const ClassicalLearnOptions& opts = {});

/// E_{x ~ dist^n}[(f(x) - h(x))^2], by enumeration within the limit and by
/// orthonormal expansion otherwise.
double classical_test_mse(const ClassicalHypothesis& h, const MultilinearFunction& f,
                          const IntervalDistribution& dist, double enumeration_limit = 1e7);

struct CodeDemoOptions {
  int n = 20;
  int degree = 3;
  double eta = 0.1;
  double rate = 0.1;
  /// Training set size as a multiple of the feature count.
  double sample_factor = 8.0;
  double ridge = 1e-8;
};

struct CodeDemoResult {
  int n = 0;
  int degree = 0;
  double test_mse_code = 0.0;
  double test_mse_product = 0.0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t codewords = 0;
  int min_distance = 0;
};

/// Trains the same degree-d regression learner on the (1 - eta) C code
/// distribution and on the matched product distribution {+-(1 - eta)}^n, and
/// reports both exact test errors.
CodeDemoResult run_code_demo(const CodeDemoOptions& opts, std::uint64_t seed);

}  // namespace bpl
