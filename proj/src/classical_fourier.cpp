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

#include "bpl/classical_fourier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "bpl/detail/product_sum.hpp"

namespace bpl {

namespace {

void require_vars(int n, int limit) {
  require(n >= 1, ErrorCode::kInvalidArgument, "variable count must be >= 1");
  require(n <= limit, ErrorCode::kGuardExceeded,
          "variable count " + std::to_string(n) + " exceeds the limit " + std::to_string(limit));
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::int64_t binomial_int(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

MultilinearFunction::MultilinearFunction(int n, std::map<Subset, double> coeffs) : n_(n) {
  require(n >= 1 && n <= 32, ErrorCode::kInvalidArgument, "variable count must lie in [1, 32]");
  const Subset full = n == 32 ? ~Subset{0} : ((Subset{1} << n) - 1);
  for (const auto& [s, c] : coeffs) {
    require((s & ~full) == 0, ErrorCode::kInvalidArgument, "subset mentions a variable >= n");
    require(std::isfinite(c), ErrorCode::kInvalidArgument, "coefficients must be finite");
    if (c != 0.0) coeffs_.emplace(s, c);
  }
}

MultilinearFunction MultilinearFunction::from_dense(int n, const std::vector<double>& dense) {
  require_vars(n, kMaxDenseVars);
  require(dense.size() == (std::size_t{1} << n), ErrorCode::kDimensionMismatch,
          "dense table needs 2^n entries");
  std::map<Subset, double> m;
  for (std::size_t s = 0; s < dense.size(); ++s)
    if (dense[s] != 0.0) m.emplace(static_cast<Subset>(s), dense[s]);
  return MultilinearFunction(n, std::move(m));
}

MultilinearFunction MultilinearFunction::from_vertex_values(int n, std::vector<double> values) {
  require_vars(n, kMaxDenseVars);
  require(values.size() == (std::size_t{1} << n), ErrorCode::kDimensionMismatch,
          "vertex table needs 2^n entries");
  walsh_hadamard(values);
  const double inv = std::ldexp(1.0, -n);
  for (double& v : values) v *= inv;
  return from_dense(n, values);
}

double MultilinearFunction::coeff(Subset s) const {
  const auto it = coeffs_.find(s);
  return it == coeffs_.end() ? 0.0 : it->second;
}

int MultilinearFunction::degree() const {
  int d = 0;
  for (const auto& [s, c] : coeffs_) d = std::max(d, std::popcount(s));
  return d;
}

std::vector<double> MultilinearFunction::dense() const {
  require_vars(n_, kMaxDenseVars);
  std::vector<double> out(std::size_t{1} << n_, 0.0);
  for (const auto& [s, c] : coeffs_) out[s] = c;
  return out;
}

double MultilinearFunction::operator()(std::span<const double> x) const {
  require(static_cast<int>(x.size()) == n_, ErrorCode::kDimensionMismatch, "point has the wrong length");
  double total = 0.0;
  for (const auto& [s, c] : coeffs_) {
    double term = c;
    for (Subset rest = s; rest != 0; rest &= rest - 1) term *= x[static_cast<std::size_t>(std::countr_zero(rest))];
    total += term;
  }
  return total;
}

double MultilinearFunction::max_abs_on_vertices(std::uint64_t seed, std::size_t samples) const {
  if (n_ <= kMaxExhaustiveVars) {
    std::vector<double> values = dense();
    walsh_hadamard(values);
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  Rng rng = make_rng(seed, 0xb0b);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> x(static_cast<std::size_t>(n_));
  double m = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    for (double& xi : x) xi = coin(rng) ? 1.0 : -1.0;
    m = std::max(m, std::abs((*this)(x)));
  }
  return m;
}

bool MultilinearFunction::is_bounded(double tol, std::uint64_t seed) const {
  return max_abs_on_vertices(seed) <= 1.0 + tol;
}

IntervalDistribution::IntervalDistribution(std::vector<double> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  require(!atoms_.empty(), ErrorCode::kInvalidArgument, "distribution needs at least one atom");
  require(atoms_.size() == weights_.size(), ErrorCode::kDimensionMismatch,
          "atom and weight counts differ");
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    require(std::isfinite(atoms_[i]) && std::abs(atoms_[i]) <= 1.0, ErrorCode::kInvalidArgument,
            "atoms must lie in [-1, 1]");
    require(weights_[i] >= 0.0, ErrorCode::kInvalidArgument, "weights must be nonnegative");
    total += weights_[i];
  }
  require(std::abs(total - 1.0) <= 1e-12, ErrorCode::kInvalidArgument, "weights must sum to 1");
}

IntervalDistribution IntervalDistribution::uniform(std::vector<double> atoms) {
  const std::size_t k = atoms.size();
  require(k > 0, ErrorCode::kInvalidArgument, "distribution needs at least one atom");
  return IntervalDistribution(std::move(atoms), std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

double IntervalDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) m += weights_[i] * atoms_[i];
  return m;
}

double IntervalDistribution::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) v += weights_[i] * (atoms_[i] - m) * (atoms_[i] - m);
  return v;
}

bool IntervalDistribution::within(double eta) const {
  return std::all_of(atoms_.begin(), atoms_.end(),
                     [&](double a) { return std::abs(a) <= 1.0 - eta + 1e-15; });
}

double IntervalDistribution::sample(Rng& rng) const {
  std::discrete_distribution<std::size_t> pick(weights_.begin(), weights_.end());
  return atoms_[pick(rng)];
}

double biased_char(Subset s, std::span<const double> x, double mu, double scale) {
  require(scale != 0.0, ErrorCode::kInvalidArgument, "scale must be non-zero");
  double v = 1.0;
  for (Subset rest = s; rest != 0; rest &= rest - 1) {
    const auto i = static_cast<std::size_t>(std::countr_zero(rest));
    require(i < x.size(), ErrorCode::kDimensionMismatch, "subset mentions a missing coordinate");
    v *= (x[i] - mu) / scale;
  }
  return v;
}

BiasedCoefficients expand_biased(const MultilinearFunction& f, double mu, double scale) {
  require(scale > 0.0, ErrorCode::kInvalidArgument, "scale must be positive");
  BiasedCoefficients out{f.num_vars(), mu, scale, f.dense()};
  const std::size_t size = out.coeffs.size();
  for (int i = 0; i < out.n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t s = 0; s < size; ++s) {
      if ((s & bit) == 0) continue;
      out.coeffs[s ^ bit] += mu * out.coeffs[s];
      out.coeffs[s] *= scale;
    }
  }
  return out;
}

BiasedCoefficients expand_psi(const MultilinearFunction& f, double mu) {
  require(std::abs(mu) < 1.0, ErrorCode::kInvalidArgument, "expand_psi requires |mu| < 1");
  return expand_biased(f, mu, std::sqrt(1.0 - mu * mu));
}

MultilinearFunction to_monomial(const BiasedCoefficients& c) {
  std::vector<double> m = c.coeffs;
  for (int i = 0; i < c.n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t s = 0; s < m.size(); ++s) {
      if ((s & bit) == 0) continue;
      m[s] /= c.scale;
      m[s ^ bit] -= c.mu * m[s];
    }
  }
  return MultilinearFunction::from_dense(c.n, m);
}

MultilinearFunction truncate_classical(const MultilinearFunction& f, int d, double mu) {
  require(d >= 0, ErrorCode::kInvalidArgument, "truncation degree must be >= 0");
  BiasedCoefficients c = expand_psi(f, mu);
  for (std::size_t s = 0; s < c.coeffs.size(); ++s)
    if (std::popcount(s) > d) c.coeffs[s] = 0.0;
  return to_monomial(c);
}

ErrorEstimate truncation_error_classical(const MultilinearFunction& f, const IntervalDistribution& d,
                                         int degree, const EnumerationOptions& opts) {
  require(degree >= 0, ErrorCode::kInvalidArgument, "truncation degree must be >= 0");
  const int n = f.num_vars();
  const double mu = d.mean();
  const BiasedCoefficients c = expand_psi(f, mu);
  // Site 0 is the leading tensor digit, so variable i sits at bit n-1-i.
  std::vector<double> tail(c.coeffs.size(), 0.0);
  for (std::size_t s = 0; s < c.coeffs.size(); ++s) {
    if (std::popcount(s) <= degree) continue;
    std::size_t t = 0;
    for (int i = 0; i < n; ++i)
      if (s & (std::size_t{1} << i)) t |= std::size_t{1} << (n - 1 - i);
    tail[t] = c.coeffs[s];
  }
  detail::SiteTable<2> site;
  site.weights = d.weights();
  for (double a : d.atoms()) site.values.push_back({1.0, (a - mu) / c.scale});
  const std::vector<detail::SiteTable<2>> tables(static_cast<std::size_t>(n), site);
  const std::span<const detail::SiteTable<2>> view(tables);
  ErrorEstimate out;
  if (detail::support_size<2>(view) <= opts.enumeration_limit) {
    out.value = detail::expected_square_by_enumeration<2>(tail, view);
    return out;
  }
  require(opts.mc_samples.has_value(), ErrorCode::kGuardExceeded,
          "atom tuple count exceeds the enumeration limit; set a Monte-Carlo sample count");
  const auto mc = detail::expected_square_by_sampling<2>(tail, view, *opts.mc_samples, opts.seed);
  out.value = mc.mean;
  out.std_error = mc.std_error;
  out.exact = false;
  out.samples = *opts.mc_samples;
  return out;
}

double truncation_error_closed_form(const MultilinearFunction& f, const IntervalDistribution& d,
                                    int degree) {
  const double mu = d.mean();
  const BiasedCoefficients c = expand_psi(f, mu);
  const double ratio = d.variance() / (1.0 - mu * mu);
  double total = 0.0;
  for (std::size_t s = 0; s < c.coeffs.size(); ++s) {
    const int k = std::popcount(s);
    if (k > degree) total += c.coeffs[s] * c.coeffs[s] * std::pow(ratio, k);
  }
  return total;
}

double classical_decay_bound(const IntervalDistribution& d, int degree) {
  const double mu = d.mean();
  require(std::abs(mu) < 1.0, ErrorCode::kDegenerateDistribution, "distribution mean has |mu| = 1");
  return std::pow(d.variance() / (1.0 - mu * mu), degree);
}

std::vector<double> majority_levels(int n) {
  require(n >= 1 && n % 2 == 1, ErrorCode::kInvalidArgument, "majority needs an odd bit count");
  require(n <= 31, ErrorCode::kGuardExceeded, "majority levels are limited to n <= 31");
  // f^(k) = 2^-n sum_x Maj(x) x^S for any |S| = k. Group vertices by j, the
  // number of -1 entries inside S, and l, the number outside.
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    std::int64_t acc = 0;
    for (int j = 0; j <= k; ++j) {
      for (int l = 0; l <= n - k; ++l) {
        const std::int64_t count = binomial_int(k, j) * binomial_int(n - k, l);
        const int sign_chi = j % 2 == 0 ? 1 : -1;
        const int sign_maj = n - 2 * (j + l) > 0 ? 1 : -1;
        acc += count * sign_chi * sign_maj;
      }
    }
    out[static_cast<std::size_t>(k)] = std::ldexp(static_cast<double>(acc), -n);
  }
  return out;
}

MultilinearFunction majority_function(int n) {
  require(n <= kMaxExhaustiveVars, ErrorCode::kGuardExceeded, "majority_function is limited to n <= 20");
  const std::vector<double> levels = majority_levels(n);
  std::map<Subset, double> m;
  for (Subset s = 0; s < (Subset{1} << n); ++s) {
    const double c = levels[static_cast<std::size_t>(std::popcount(s))];
    if (c != 0.0) m.emplace(s, c);
  }
  return MultilinearFunction(n, std::move(m));
}

BlowupResult truncation_blowup_scan(int n, double delta, double a, double b, int grid) {
  require(0.0 < a && a < b && b < 1.0, ErrorCode::kInvalidArgument, "need 0 < a < b < 1");
  require(grid >= 2, ErrorCode::kInvalidArgument, "grid needs at least two points");
  const int d = static_cast<int>(std::floor(delta * n));
  require(d >= 1, ErrorCode::kInvalidArgument, "delta * n must be >= 1");
  const std::vector<double> levels = majority_levels(n);
  std::vector<double> poly(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k <= d; ++k) poly[static_cast<std::size_t>(k)] = levels[static_cast<std::size_t>(k)] * binomial(n, k);
  BlowupResult out{n, delta, d, a, 0.0};
  for (int g = 0; g < grid; ++g) {
    const double t = a + (b - a) * g / (grid - 1);
    double v = 0.0;
    for (int k = d; k >= 0; --k) v = v * t + poly[static_cast<std::size_t>(k)];
    if (std::abs(v) > out.max_abs) {
      out.max_abs = std::abs(v);
      out.t_star = t;
    }
  }
  return out;
}

std::vector<double> monic_chebyshev(int d) {
  require(d >= 0, ErrorCode::kInvalidArgument, "degree must be >= 0");
  std::vector<double> prev{1.0};
  if (d == 0) return prev;
  std::vector<double> cur{0.0, 1.0};
  for (int k = 1; k < d; ++k) {
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2.0 * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    prev.swap(cur);
    cur.swap(next);
  }
  const double lead = cur.back();
  for (double& c : cur) c /= lead;
  return cur;
}

double poly_max_abs(const std::vector<double>& p, double a, double b, int grid) {
  require(a < b && grid >= 2, ErrorCode::kInvalidArgument, "need a < b and at least two grid points");
  double m = 0.0;
  for (int g = 0; g < grid; ++g) {
    const double t = a + (b - a) * g / (grid - 1);
    double v = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * t + *it;
    m = std::max(m, std::abs(v));
  }
  return m;
}

LinearCode::LinearCode(int n, std::vector<std::uint32_t> generators)
    : n_(n), generators_(std::move(generators)) {
  require(n >= 1 && n <= 30, ErrorCode::kInvalidArgument, "code length must lie in [1, 30]");
  require(!generators_.empty() && generators_.size() <= 24, ErrorCode::kInvalidArgument,
          "code dimension must lie in [1, 24]");
  for (auto g : generators_)
    require(g >> n == 0, ErrorCode::kInvalidArgument, "generator has bits beyond the code length");
}

LinearCode LinearCode::repetition(int n) {
  return LinearCode(n, {n == 32 ? ~std::uint32_t{0} : ((std::uint32_t{1} << n) - 1)});
}

LinearCode LinearCode::random(int n, int k, Rng& rng) {
  require(n >= 1 && n <= 30, ErrorCode::kInvalidArgument, "code length must lie in [1, 30]");
  std::uniform_int_distribution<std::uint32_t> word(0, (std::uint32_t{1} << n) - 1);
  std::vector<std::uint32_t> g(static_cast<std::size_t>(k));
  for (auto& row : g) row = word(rng);
  return LinearCode(n, std::move(g));
}

std::vector<std::uint32_t> LinearCode::codewords() const {
  const std::size_t count = std::size_t{1} << generators_.size();
  std::vector<std::uint32_t> out(count, 0);
  for (std::size_t m = 1; m < count; ++m) {
    const int low = std::countr_zero(m);
    out[m] = out[m & (m - 1)] ^ generators_[static_cast<std::size_t>(low)];
  }
  return out;
}

int LinearCode::min_distance() const {
  const auto words = codewords();
  int best = n_ + 1;
  for (std::size_t m = 1; m < words.size(); ++m) best = std::min(best, std::popcount(words[m]));
  return best;
}

bool LinearCode::full_rank() const {
  std::vector<std::uint32_t> rows = generators_;
  std::size_t rank = 0;
  for (int bit = 0; bit < n_ && rank < rows.size(); ++bit) {
    const std::uint32_t mask = std::uint32_t{1} << bit;
    auto pivot = std::find_if(rows.begin() + static_cast<std::ptrdiff_t>(rank), rows.end(),
                              [&](std::uint32_t r) { return (r & mask) != 0; });
    if (pivot == rows.end()) continue;
    std::iter_swap(rows.begin() + static_cast<std::ptrdiff_t>(rank), pivot);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != rank && (rows[i] & mask)) rows[i] ^= rows[rank];
    ++rank;
  }
  return rank == rows.size();
}

std::vector<double> LinearCode::to_signs(std::uint32_t word) const {
  std::vector<double> out(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] = (word >> i) & 1u ? -1.0 : 1.0;
  return out;
}

CodeDistribution build_code_distribution(int n, Rng& rng, double eta, double rate, int max_attempts) {
  require(n >= 2 && n <= 30, ErrorCode::kInvalidArgument, "code length must lie in [2, 30]");
  require(eta > 0.0 && eta < 1.0, ErrorCode::kInvalidArgument, "eta must lie in (0, 1)");
  require(rate > 0.0 && rate <= 1.0, ErrorCode::kInvalidArgument, "rate must lie in (0, 1]");
  const int k = std::max(1, static_cast<int>(std::lround(rate * n)));
  const int target = (n + 3) / 4;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    LinearCode code = LinearCode::random(n, k, rng);
    if (!code.full_rank() || code.min_distance() < target) continue;
    CodeDistribution out{code, eta, code.codewords(), {}, {}, attempt};
    std::bernoulli_distribution coin(0.5);
    for (auto w : out.codewords) {
      std::vector<double> atom = code.to_signs(w);
      for (double& x : atom) x *= 1.0 - eta;
      out.atoms.push_back(std::move(atom));
      out.labels.push_back(coin(rng) ? 1.0 : -1.0);
    }
    return out;
  }
  throw Error(ErrorCode::kGuardExceeded, "no code of length " + std::to_string(n) + " with distance >= " +
                                             std::to_string(target) + " found in " +
                                             std::to_string(max_attempts) + " attempts");
}

void walsh_hadamard(std::vector<double>& t) {
  const std::size_t size = t.size();
  require(std::has_single_bit(size), ErrorCode::kDimensionMismatch, "transform size must be a power of two");
  for (std::size_t h = 1; h < size; h <<= 1) {
    for (std::size_t i = 0; i < size; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = t[j];
        const double b = t[j + h];
        t[j] = a + b;
        t[j + h] = a - b;
      }
    }
  }
}

}  // namespace bpl
