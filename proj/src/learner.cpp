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

#include "bpl/learner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "bpl/detail/parallel.hpp"
#include "bpl/detail/product_sum.hpp"
#include "bpl/detail/site_tensor.hpp"

namespace bpl {

namespace {

constexpr std::size_t kSampleChunk = 256;
constexpr std::uint64_t kEtaStream = 0xe7a0000000000000ull;

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void combinations(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

std::vector<Eigen::Vector4d> site_values(const ProductState& s, const std::vector<BiasedSiteBasis>& bases) {
  require(s.sites.size() == bases.size(), ErrorCode::kDimensionMismatch,
          "state and basis site counts differ");
  std::vector<Eigen::Vector4d> v(bases.size());
  for (std::size_t i = 0; i < bases.size(); ++i) v[i] = bases[i].values(s.sites[i]);
  return v;
}

double term_value(const Term& t, const std::vector<Eigen::Vector4d>& v) {
  double p = 1.0;
  for (std::size_t j = 0; j < t.sites.size(); ++j)
    p *= v[static_cast<std::size_t>(t.sites[j])](t.letters[j]);
  return p;
}

// E[g(x)^2] for a multilinear g under dist^n.
double expected_square_classical(const MultilinearFunction& g, const IntervalDistribution& dist,
                                 double enumeration_limit) {
  const int n = g.num_vars();
  if (std::pow(static_cast<double>(dist.size()), n) <= enumeration_limit) {
    std::vector<double> tensor(std::size_t{1} << n, 0.0);
    for (const auto& [s, c] : g.coeffs()) {
      std::size_t t = 0;
      for (int i = 0; i < n; ++i)
        if (s & (Subset{1} << i)) t |= std::size_t{1} << (n - 1 - i);
      tensor[t] = c;
    }
    detail::SiteTable<2> site;
    site.weights = dist.weights();
    for (double a : dist.atoms()) site.values.push_back({1.0, a});
    const std::vector<detail::SiteTable<2>> tables(static_cast<std::size_t>(n), site);
    return detail::expected_square_by_enumeration<2>(tensor, std::span<const detail::SiteTable<2>>(tables));
  }
  // The basis prod (x_i - mu) / sigma is orthonormal under dist^n.
  const double sigma = std::sqrt(dist.variance());
  require(sigma > 0.0, ErrorCode::kDegenerateDistribution, "distribution has zero variance");
  const BiasedCoefficients c = expand_biased(g, dist.mean(), sigma);
  double total = 0.0;
  for (double v : c.coeffs) total += v * v;
  return total;
}

}  // namespace

int required_degree(double epsilon, double rate) {
  require(epsilon > 0.0 && epsilon < 1.0, ErrorCode::kInvalidArgument, "epsilon must lie in (0, 1)");
  require(rate > 0.0 && rate < 1.0, ErrorCode::kInvalidArgument, "decay rate must lie in (0, 1)");
  const double ratio = std::log(1.0 / epsilon) / std::log(1.0 / (1.0 - rate));
  int d = std::max(0, static_cast<int>(std::ceil(ratio - 1e-12)));
  while (std::pow(1.0 - rate, d) > epsilon) ++d;
  return d;
}

std::size_t Term::tensor_index(int n) const {
  std::size_t idx = 0;
  for (std::size_t j = 0; j < sites.size(); ++j)
    idx += static_cast<std::size_t>(letters[j]) * detail::ipow(4, n - 1 - sites[j]);
  return idx;
}

std::vector<Term> enumerate_terms(int n, int d, int letters) {
  require(n >= 1 && d >= 0, ErrorCode::kInvalidArgument, "need n >= 1 and d >= 0");
  require(letters >= 1 && letters <= 3, ErrorCode::kInvalidArgument, "letters must lie in [1, 3]");
  std::vector<Term> out;
  for (int k = 0; k <= std::min(d, n); ++k) {
    std::vector<std::vector<int>> combos;
    std::vector<int> cur;
    combinations(n, k, 0, cur, combos);
    const std::size_t words = detail::ipow(static_cast<std::size_t>(letters), k);
    for (const auto& sites : combos) {
      for (std::size_t w = 0; w < words; ++w) {
        Term t;
        t.sites = sites;
        t.letters.assign(static_cast<std::size_t>(k), 1);
        std::size_t rest = w;
        for (int j = k - 1; j >= 0; --j) {
          t.letters[static_cast<std::size_t>(j)] = 1 + static_cast<int>(rest % static_cast<std::size_t>(letters));
          rest /= static_cast<std::size_t>(letters);
        }
        out.push_back(std::move(t));
      }
    }
  }
  return out;
}

std::size_t feature_count(int n, int d, int letters) {
  double total = 0.0;
  for (int k = 0; k <= std::min(d, n); ++k) total += binomial(n, k) * std::pow(letters, k);
  return static_cast<std::size_t>(std::llround(total));
}

VecX feature_map(const ProductState& s, const std::vector<BiasedSiteBasis>& bases,
                 const std::vector<Term>& terms) {
  const auto v = site_values(s, bases);
  VecX out(static_cast<Eigen::Index>(terms.size()));
  for (std::size_t t = 0; t < terms.size(); ++t) out(static_cast<Eigen::Index>(t)) = term_value(terms[t], v);
  return out;
}

VecX feature_map(const ProductState& s, const std::vector<BiasedSiteBasis>& bases, int d) {
  return feature_map(s, bases, enumerate_terms(static_cast<int>(bases.size()), d));
}

TrainingSet generate_dataset(const ProductDistribution& dist, const KrausChannel& e, const Operator& o,
                             std::size_t m, Shots shots, std::uint64_t seed) {
  require(o.num_qubits() == static_cast<int>(dist.num_sites()), ErrorCode::kDimensionMismatch,
          "observable and distribution site counts differ");
  require(o.op_norm() <= 1.0 + 1e-9, ErrorCode::kInvalidArgument, "observable must have operator norm <= 1");
  require(shots.is_exact() || *shots.count >= 1, ErrorCode::kInvalidArgument, "shots must be >= 1");
  const std::vector<double> coeffs = pauli_coefficients(heisenberg_adjoint(e, o));
  TrainingSet out;
  out.descriptions.resize(m);
  out.labels.resize(m);
  out.shots = shots;
  out.seed = seed;
  const std::size_t chunks = (m + kSampleChunk - 1) / kSampleChunk;
  detail::parallel_chunks(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(m, (c + 1) * kSampleChunk);
    for (std::size_t i = c * kSampleChunk; i < end; ++i) {
      Rng rng = make_rng(seed, i);
      ProductState s = sample_product_state(dist, rng);
      const double v = evaluate_pauli_coefficients(coeffs, s);
      const double label = shots.is_exact() ? v : estimate_label_from_value(v, *shots.count, rng);
      out.labels[i] = std::clamp(label, -1.0, 1.0);
      out.descriptions[i] = std::move(s);
    }
  });
  return out;
}

NormalEquations::NormalEquations(Eigen::Index features)
    : gram_(MatX::Zero(features, features)), moment_(VecX::Zero(features)) {}

void NormalEquations::add(const MatX& rows, const VecX& labels) {
  require(rows.cols() == gram_.cols() && rows.rows() == labels.size(), ErrorCode::kDimensionMismatch,
          "row block does not match the system");
  gram_.selfadjointView<Eigen::Lower>().rankUpdate(rows.transpose());
  moment_.noalias() += rows.transpose() * labels;
}

void NormalEquations::add_row(const VecX& row, double label) {
  require(row.size() == gram_.cols(), ErrorCode::kDimensionMismatch, "row does not match the system");
  gram_.selfadjointView<Eigen::Lower>().rankUpdate(row);
  moment_ += label * row;
}

VecX NormalEquations::solve(double ridge) const {
  require(ridge >= 0.0 && std::isfinite(ridge), ErrorCode::kInvalidArgument, "ridge must be >= 0");
  MatX a = gram_.selfadjointView<Eigen::Lower>();
  a.diagonal().array() += ridge;
  const Eigen::LDLT<MatX> ldlt(a);
  const auto& dvec = ldlt.vectorD();
  const double dmax = dvec.cwiseAbs().maxCoeff();
  const bool singular = ldlt.info() != Eigen::Success || dvec.minCoeff() <= 1e-12 * std::max(dmax, 1e-300);
  if (singular && ridge == 0.0)
    throw Error(ErrorCode::kRankDeficient,
                "normal equations are singular; use a ridge > 0 or more samples");
  VecX w = ldlt.solve(moment_);
  const VecX r = moment_ - a * w;
  w += ldlt.solve(r);
  return w;
}

VecX fit_least_squares(const MatX& features, const VecX& labels, double ridge) {
  require(features.rows() == labels.size(), ErrorCode::kDimensionMismatch,
          "feature rows and label count differ");
  NormalEquations ne(features.cols());
  ne.add(features, labels);
  return ne.solve(ridge);
}

Hypothesis::Hypothesis(std::vector<BiasedSiteBasis> bases, int degree, std::vector<Term> terms, VecX weights)
    : bases_(std::move(bases)), degree_(degree), terms_(std::move(terms)), weights_(std::move(weights)) {
  require(static_cast<std::size_t>(weights_.size()) == terms_.size(), ErrorCode::kDimensionMismatch,
          "one weight per term required");
  const std::size_t cap = feature_count(static_cast<int>(bases_.size()), degree_);
  require(terms_.size() <= cap, ErrorCode::kInvalidArgument, "more terms than degree-d words");
  for (const auto& t : terms_)
    require(t.degree() <= degree_, ErrorCode::kInvalidArgument, "term exceeds the hypothesis degree");
}

double Hypothesis::predict(const ProductState& s) const {
  const auto v = site_values(s, bases_);
  double total = 0.0;
  for (std::size_t t = 0; t < terms_.size(); ++t) total += weights_(static_cast<Eigen::Index>(t)) * term_value(terms_[t], v);
  return total;
}

BasisExpansion Hypothesis::to_expansion() const {
  const int n = num_qubits();
  require(n <= kDefaultMaxQubits, ErrorCode::kGuardExceeded, "dense expansion is limited to 10 qubits");
  std::vector<double> c(detail::ipow(4, n), 0.0);
  for (std::size_t t = 0; t < terms_.size(); ++t) c[terms_[t].tensor_index(n)] += weights_(static_cast<Eigen::Index>(t));
  return BasisExpansion(bases_, std::move(c));
}

Operator Hypothesis::to_operator() const { return to_expansion().to_operator(); }

double expected_square(const BasisExpansion& a, const ProductDistribution& dist) {
  const int n = a.num_qubits();
  require(static_cast<int>(dist.num_sites()) == n, ErrorCode::kDimensionMismatch,
          "distribution and expansion site counts differ");
  std::vector<double> y = a.coeffs();
  for (int i = 0; i < n; ++i) {
    const auto& site = dist.site(static_cast<std::size_t>(i));
    const auto& basis = a.bases()[static_cast<std::size_t>(i)];
    Mat4 g = Mat4::Zero();
    for (std::size_t k = 0; k < site.size(); ++k) {
      const Eigen::Vector4d v = basis.values(site.atoms()[k]);
      g += site.weights()[k] * (v * v.transpose());
    }
    detail::apply_site_map<4>(y, n, i, g);
  }
  double total = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) total += a.coeffs()[k] * y[k];
  return std::max(0.0, total);
}

double exact_test_mse(const Hypothesis& h, const Operator& target, const ProductDistribution& dist) {
  const BasisExpansion t = expand(target, h.bases());
  const BasisExpansion p = h.to_expansion();
  std::vector<double> diff = t.coeffs();
  for (std::size_t k = 0; k < diff.size(); ++k) diff[k] -= p.coeffs()[k];
  return expected_square(BasisExpansion(h.bases(), std::move(diff)), dist);
}

std::size_t sample_size(int n, int d, double constant, double delta, int letters) {
  require(constant > 0.0, ErrorCode::kInvalidArgument, "sample constant must be positive");
  require(delta > 0.0 && delta < 1.0, ErrorCode::kInvalidArgument, "delta must lie in (0, 1)");
  const auto features = feature_count(n, d, letters);
  const double scale = std::min(std::pow(static_cast<double>(n), d), static_cast<double>(features));
  const double m = std::ceil(constant * scale * std::log(1.0 / delta));
  return std::max(features, static_cast<std::size_t>(m));
}

Hypothesis fit_hypothesis(const std::vector<BiasedSiteBasis>& bases, int d, const TrainingSet& data,
                          double ridge) {
  const int n = static_cast<int>(bases.size());
  std::vector<Term> terms = enumerate_terms(n, d);
  const auto f = static_cast<Eigen::Index>(terms.size());
  const std::size_t m = data.descriptions.size();
  require(m == data.labels.size(), ErrorCode::kDimensionMismatch, "description and label counts differ");
  require(m > 0, ErrorCode::kInvalidArgument, "training set is empty");
  NormalEquations ne(f);
  for (std::size_t start = 0; start < m; start += kSampleChunk) {
    const std::size_t end = std::min(m, start + kSampleChunk);
    MatX rows(static_cast<Eigen::Index>(end - start), f);
    VecX y(static_cast<Eigen::Index>(end - start));
    for (std::size_t i = start; i < end; ++i) {
      const auto r = static_cast<Eigen::Index>(i - start);
      rows.row(r) = feature_map(data.descriptions[i], bases, terms).transpose();
      y(r) = data.labels[i];
    }
    ne.add(rows, y);
  }
  return Hypothesis(bases, d, std::move(terms), ne.solve(ridge));
}

std::pair<Hypothesis, LearnReport> learn_channel(const ProductDistribution& dist, const KrausChannel& e,
                                                 const Operator& o, const LearnOptions& opts) {
  const int n = static_cast<int>(dist.num_sites());
  require(e.num_qubits() == n && o.num_qubits() == n, ErrorCode::kDimensionMismatch,
          "channel, observable and distribution site counts differ");
  require(opts.epsilon > 0.0 && opts.epsilon < 1.0, ErrorCode::kInvalidArgument, "epsilon must lie in (0, 1)");
  require(opts.delta > 0.0 && opts.delta < 1.0, ErrorCode::kInvalidArgument, "delta must lie in (0, 1)");
  LearnReport rep;
  if (opts.eta) {
    rep.eta = *opts.eta;
    require(rep.eta > 0.0 && rep.eta <= 1.0, ErrorCode::kInvalidArgument, "eta must lie in (0, 1]");
    if (opts.verify_eta)
      require(dist.max_second_moment_norm() <= 1.0 - rep.eta + 1e-12, ErrorCode::kInvalidArgument,
              "a site has ||S||_op > 1 - eta");
  } else {
    constexpr std::size_t kEtaSamples = 10000;
    std::vector<ProductState> probe(kEtaSamples);
    for (std::size_t i = 0; i < kEtaSamples; ++i) {
      Rng rng = make_rng(opts.seed ^ kEtaStream, i);
      probe[i] = sample_product_state(dist, rng);
    }
    const auto est = estimate_second_moment_bound(probe, opts.delta);
    rep.eta = std::min(1.0, est.eta_hat - est.shrinkage);
    rep.eta_estimated = true;
    require(rep.eta > 0.0, ErrorCode::kDegenerateDistribution,
            "estimated eta is not positive; supply eta explicitly");
  }
  rep.eta_prime = eta_prime(rep.eta);
  if (opts.degree) {
    require(*opts.degree >= 0 && *opts.degree <= n, ErrorCode::kInvalidArgument, "degree must lie in [0, n]");
    rep.degree = *opts.degree;
  } else {
    rep.degree = std::min(required_degree(opts.epsilon, rep.eta_prime), n);
  }
  rep.features = feature_count(n, rep.degree);
  rep.samples = opts.samples ? *opts.samples : sample_size(n, rep.degree, opts.sample_constant, opts.delta);
  require(rep.samples >= 1, ErrorCode::kInvalidArgument, "sample count must be >= 1");
  Shots shots;
  switch (opts.shots.kind) {
    case ShotsPolicy::Kind::kExact:
      break;
    case ShotsPolicy::Kind::kFixed:
      shots = Shots::fixed(opts.shots.fixed);
      break;
    case ShotsPolicy::Kind::kAuto: {
      const double arg = static_cast<double>(rep.samples) + 1.0 / (opts.epsilon * opts.epsilon) + 1.0 / opts.delta;
      shots = Shots::fixed(static_cast<long>(std::ceil(opts.shots.constant * std::log(arg))));
      break;
    }
  }
  rep.shots = shots.count;
  rep.sample_constant = opts.sample_constant;
  rep.ridge = opts.ridge;
  rep.seed = opts.seed;
  rep.truncation_bound = std::pow(1.0 - rep.eta_prime, rep.degree);

  const std::vector<BiasedSiteBasis> bases =
      opts.standard_basis ? std::vector<BiasedSiteBasis>(static_cast<std::size_t>(n), standard_site_basis())
                          : build_bases(dist);
  const TrainingSet data = generate_dataset(dist, e, o, rep.samples, shots, opts.seed);
  Hypothesis h = fit_hypothesis(bases, rep.degree, data, opts.ridge);
  double sq = 0.0;
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    const double r = h.predict(data.descriptions[i]) - data.labels[i];
    sq += r * r;
  }
  rep.train_mse = sq / static_cast<double>(data.labels.size());
  rep.test_mse = exact_test_mse(h, heisenberg_adjoint(e, o), dist);
  return {std::move(h), rep};
}

SecondMomentEstimate estimate_second_moment_bound(const std::vector<ProductState>& descriptions, double delta) {
  require(descriptions.size() >= 2, ErrorCode::kInvalidArgument, "need at least two descriptions");
  require(delta > 0.0 && delta < 1.0, ErrorCode::kInvalidArgument, "delta must lie in (0, 1)");
  const std::size_t n = descriptions.front().sites.size();
  require(n >= 1, ErrorCode::kInvalidArgument, "descriptions have no sites");
  SecondMomentEstimate out;
  out.s_hat.assign(n, Mat3::Zero());
  for (const auto& s : descriptions) {
    require(s.sites.size() == n, ErrorCode::kDimensionMismatch, "descriptions have different site counts");
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3 a = s.sites[i].vec();
      out.s_hat[i] += a * a.transpose();
    }
  }
  const double m = static_cast<double>(descriptions.size());
  for (auto& s : out.s_hat) {
    s /= m;
    out.max_norm = std::max(out.max_norm, spectral_norm(s));
  }
  out.eta_hat = 1.0 - out.max_norm;
  out.shrinkage = std::sqrt(2.0 * std::log(6.0 * static_cast<double>(n) / delta) / m);
  return out;
}

ClassicalHypothesis::ClassicalHypothesis(int n, double mu, double sigma, int degree, std::vector<Subset> terms,
                                         VecX weights)
    : n_(n), mu_(mu), sigma_(sigma), degree_(degree), terms_(std::move(terms)), weights_(std::move(weights)) {
  require(sigma_ > 0.0, ErrorCode::kInvalidArgument, "sigma must be positive");
  require(static_cast<std::size_t>(weights_.size()) == terms_.size(), ErrorCode::kDimensionMismatch,
          "one weight per term required");
}

double ClassicalHypothesis::predict(std::span<const double> x) const {
  double total = 0.0;
  for (std::size_t t = 0; t < terms_.size(); ++t)
    total += weights_(static_cast<Eigen::Index>(t)) * biased_char(terms_[t], x, mu_, sigma_);
  return total;
}

MultilinearFunction ClassicalHypothesis::to_function() const {
  BiasedCoefficients c{n_, mu_, sigma_, std::vector<double>(std::size_t{1} << n_, 0.0)};
  for (std::size_t t = 0; t < terms_.size(); ++t) c.coeffs[terms_[t]] += weights_(static_cast<Eigen::Index>(t));
  return to_monomial(c);
}

std::vector<Subset> enumerate_subsets(int n, int d) {
  require(n >= 1 && n <= 32 && d >= 0, ErrorCode::kInvalidArgument, "need 1 <= n <= 32 and d >= 0");
  std::vector<Subset> out;
  for (int k = 0; k <= std::min(d, n); ++k) {
    std::vector<std::vector<int>> combos;
    std::vector<int> cur;
    combinations(n, k, 0, cur, combos);
    for (const auto& c : combos) {
      Subset s = 0;
      for (int i : c) s |= Subset{1} << i;
      out.push_back(s);
    }
  }
  return out;
}

double classical_test_mse(const ClassicalHypothesis& h, const MultilinearFunction& f,
                          const IntervalDistribution& dist, double enumeration_limit) {
  require(h.num_vars() == f.num_vars(), ErrorCode::kDimensionMismatch, "variable counts differ");
  std::map<Subset, double> diff = f.coeffs();
  const MultilinearFunction fitted = h.to_function();
  for (const auto& [s, c] : fitted.coeffs()) diff[s] -= c;
  return expected_square_classical(MultilinearFunction(f.num_vars(), std::move(diff)), dist, enumeration_limit);
}

ClassicalFit learn_classical(const IntervalDistribution& dist, const MultilinearFunction& f,
                             const ClassicalLearnOptions& opts) {
  const int n = f.num_vars();
  require(n <= kMaxDenseVars, ErrorCode::kGuardExceeded, "classical learner is limited to 24 variables");
  require(opts.epsilon > 0.0 && opts.epsilon < 1.0, ErrorCode::kInvalidArgument, "epsilon must lie in (0, 1)");
  const double mu = dist.mean();
  const double sigma = std::sqrt(dist.variance());
  require(sigma > 0.0, ErrorCode::kDegenerateDistribution, "distribution has zero variance");
  ClassicalLearnReport rep;
  if (opts.eta) {
    rep.eta = *opts.eta;
  } else {
    double amax = 0.0;
    for (double a : dist.atoms()) amax = std::max(amax, std::abs(a));
    rep.eta = 1.0 - amax;
  }
  require(rep.eta > 0.0 && rep.eta < 1.0, ErrorCode::kInvalidArgument, "eta must lie in (0, 1)");
  require(dist.within(rep.eta), ErrorCode::kInvalidArgument, "atoms exceed [-(1 - eta), 1 - eta]");
  if (opts.degree) {
    require(*opts.degree >= 0 && *opts.degree <= n, ErrorCode::kInvalidArgument, "degree must lie in [0, n]");
    rep.degree = *opts.degree;
  } else {
    rep.degree = std::min(required_degree(opts.epsilon, rep.eta), n);
  }
  std::vector<Subset> terms = enumerate_subsets(n, rep.degree);
  const auto nf = static_cast<Eigen::Index>(terms.size());
  rep.features = terms.size();
  rep.samples = opts.samples ? *opts.samples : sample_size(n, rep.degree, opts.sample_constant, opts.delta, 1);
  require(rep.samples >= 2, ErrorCode::kInvalidArgument, "sample count must be >= 2");
  rep.sample_constant = opts.sample_constant;
  rep.ridge = opts.ridge;
  rep.seed = opts.seed;

  const auto m = static_cast<Eigen::Index>(rep.samples);
  MatX x(m, nf);
  VecX y(m);
  std::vector<double> point(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < m; ++i) {
    Rng rng = make_rng(opts.seed, static_cast<std::uint64_t>(i));
    for (double& p : point) p = dist.sample(rng);
    y(i) = f(point);
    for (Eigen::Index t = 0; t < nf; ++t) x(i, t) = biased_char(terms[static_cast<std::size_t>(t)], point, mu, sigma);
  }
  const VecX w = fit_least_squares(x, y, opts.ridge);
  rep.train_mse = (x * w - y).squaredNorm() / static_cast<double>(m);

  // Direct estimation: sample means of f(x) phi_S(x) and their standard errors.
  const MatX prod = x.array().colwise() * y.array();
  const VecX direct = prod.colwise().mean().transpose();
  VecX se(nf);
  for (Eigen::Index t = 0; t < nf; ++t) {
    const double var = (prod.col(t).array() - direct(t)).square().sum() / static_cast<double>(m - 1);
    se(t) = std::sqrt(var / static_cast<double>(m));
  }
  double zsq = 0.0;
  for (Eigen::Index t = 0; t < nf; ++t) {
    const double z = (w(t) - direct(t)) / std::max(se(t), 1e-12);
    zsq += z * z;
    rep.max_abs_z = std::max(rep.max_abs_z, std::abs(z));
  }
  rep.rms_z = std::sqrt(zsq / static_cast<double>(nf));

  ClassicalHypothesis reg(n, mu, sigma, rep.degree, terms, w);
  ClassicalHypothesis dir(n, mu, sigma, rep.degree, terms, direct);
  rep.test_mse = classical_test_mse(reg, f, dist);
  rep.direct_test_mse = classical_test_mse(dir, f, dist);
  return {std::move(reg), std::move(dir), std::move(se), rep};
}

CodeDemoResult run_code_demo(const CodeDemoOptions& opts, std::uint64_t seed) {
  const int n = opts.n;
  require(n >= 2 && n <= kMaxExhaustiveVars, ErrorCode::kGuardExceeded, "code demo is limited to n <= 20");
  require(opts.degree >= 0 && opts.degree <= n, ErrorCode::kInvalidArgument, "degree must lie in [0, n]");
  require(opts.sample_factor > 0.0, ErrorCode::kInvalidArgument, "sample factor must be positive");
  Rng rng = make_rng(seed, 0xc0de);
  const CodeDistribution code = build_code_distribution(n, rng, opts.eta, opts.rate);
  const std::size_t vertices = std::size_t{1} << n;

  // The concept: label of the nearest codeword on {-1, 1}^n (ties to the
  // lowest index), extended multilinearly and evaluated at (1 - eta) y.
  std::vector<double> table(vertices);
  for (std::size_t v = 0; v < vertices; ++v) {
    std::size_t best = 0;
    int best_dist = n + 1;
    for (std::size_t c = 0; c < code.codewords.size(); ++c) {
      const int dist = std::popcount(static_cast<std::uint32_t>(v) ^ code.codewords[c]);
      if (dist < best_dist) {
        best_dist = dist;
        best = c;
      }
    }
    table[v] = code.labels[best];
  }
  walsh_hadamard(table);
  std::vector<double> fourier(vertices);
  for (std::size_t s = 0; s < vertices; ++s)
    fourier[s] = std::ldexp(table[s], -n) * std::pow(1.0 - opts.eta, std::popcount(s));
  std::vector<double> product_target = fourier;
  walsh_hadamard(product_target);

  const std::vector<Subset> terms = enumerate_subsets(n, opts.degree);
  const auto nf = static_cast<Eigen::Index>(terms.size());
  const auto m = static_cast<std::size_t>(std::ceil(opts.sample_factor * static_cast<double>(nf)));
  auto fill_row = [&](MatX& rows, Eigen::Index r, std::uint32_t y) {
    for (Eigen::Index t = 0; t < nf; ++t)
      rows(r, t) = std::popcount(terms[static_cast<std::size_t>(t)] & y) % 2 ? -1.0 : 1.0;
  };

  Rng prod_rng = make_rng(seed, 0x9d0c);
  Rng code_rng = make_rng(seed, 0xc0d5);
  std::uniform_int_distribution<std::uint32_t> vertex(0, static_cast<std::uint32_t>(vertices - 1));
  std::uniform_int_distribution<std::size_t> word(0, code.codewords.size() - 1);
  NormalEquations prod_ne(nf);
  NormalEquations code_ne(nf);
  for (std::size_t start = 0; start < m; start += kSampleChunk) {
    const auto rows = static_cast<Eigen::Index>(std::min(m, start + kSampleChunk) - start);
    MatX xp(rows, nf), xc(rows, nf);
    VecX yp(rows), yc(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const std::uint32_t v = vertex(prod_rng);
      fill_row(xp, r, v);
      yp(r) = product_target[v];
      const std::size_t c = word(code_rng);
      fill_row(xc, r, code.codewords[c]);
      yc(r) = code.labels[c];
    }
    prod_ne.add(xp, yp);
    code_ne.add(xc, yc);
  }
  const VecX wp = prod_ne.solve(opts.ridge);
  const VecX wc = code_ne.solve(opts.ridge);

  CodeDemoResult out;
  out.n = n;
  out.degree = opts.degree;
  out.seed = seed;
  out.samples = m;
  out.codewords = code.codewords.size();
  out.min_distance = code.code.min_distance();
  // Characters are orthonormal under the uniform product measure.
  double prod_err = 0.0;
  for (std::size_t s = 0; s < vertices; ++s)
    if (std::popcount(s) > opts.degree) prod_err += fourier[s] * fourier[s];
  for (Eigen::Index t = 0; t < nf; ++t) {
    const double diff = wp(t) - fourier[terms[static_cast<std::size_t>(t)]];
    prod_err += diff * diff;
  }
  out.test_mse_product = prod_err;
  MatX xc(1, nf);
  double code_err = 0.0;
  for (std::size_t c = 0; c < code.codewords.size(); ++c) {
    fill_row(xc, 0, code.codewords[c]);
    const double r = (xc.row(0) * wc)(0) - code.labels[c];
    code_err += r * r;
  }
  out.test_mse_code = code_err / static_cast<double>(code.codewords.size());
  return out;
}

}  // namespace bpl
