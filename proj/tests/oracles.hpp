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

// Reference computations written without the library's fast paths: dense
// Kronecker products, brute-force enumeration over atom tuples and hypercube
// vertices, and QR least squares. Tests compare library results against
// these.

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "bpl/bloch.hpp"
#include "bpl/classical_fourier.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat single(char c) {
  Mat m(2, 2);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Mat pauli_word(const std::string& w) {
  Mat m = Mat::Identity(1, 1);
  for (char c : w) m = kron(m, single(c));
  return m;
}

inline Mat bloch_rho(const bpl::BlochVector& v) {
  return 0.5 * (single('I') + v.x * single('X') + v.y * single('Y') + v.z * single('Z'));
}

inline Mat product_rho(const std::vector<bpl::BlochVector>& sites) {
  Mat m = Mat::Identity(1, 1);
  for (const auto& s : sites) m = kron(m, bloch_rho(s));
  return m;
}

inline double expect(const Mat& o, const Mat& rho) { return (o * rho).trace().real(); }

/// Visits every atom tuple of a product distribution with its weight.
inline void for_each_tuple(const bpl::ProductDistribution& d,
                           const std::function<void(const std::vector<bpl::BlochVector>&, double)>& fn) {
  const std::size_t n = d.num_sites();
  std::vector<std::size_t> idx(n, 0);
  std::vector<bpl::BlochVector> cur(n);
  while (true) {
    double w = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      cur[i] = d.site(i).atoms()[idx[i]];
      w *= d.site(i).weights()[idx[i]];
    }
    fn(cur, w);
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++idx[i] < d.site(i).size()) break;
      idx[i] = 0;
      if (i == 0) return;
    }
    if (n == 0) return;
  }
}

/// E[(tr(a rho) - tr(b rho))^2] by dense traces over every atom tuple.
inline double expected_sq_diff(const Mat& a, const Mat& b, const bpl::ProductDistribution& d) {
  double total = 0.0;
  for_each_tuple(d, [&](const std::vector<bpl::BlochVector>& s, double w) {
    const Mat rho = product_rho(s);
    const double r = expect(a, rho) - expect(b, rho);
    total += w * r * r;
  });
  return total;
}

/// Closed-form eta' recomputed from scratch.
inline double eta_prime(double eta) {
  const double a = eta * (1.0 - std::sqrt(1.0 - eta / 2.0)) / (1.0 - eta / 2.0);
  return a < eta / 2.0 ? a : eta / 2.0;
}

/// Majority Fourier coefficient on the first k variables by summing over all
/// 2^n vertices.
inline double majority_coefficient(int n, int k) {
  double total = 0.0;
  for (std::uint32_t v = 0; v < (1u << n); ++v) {
    const int ones = std::popcount(v);
    const double maj = n - 2 * ones > 0 ? 1.0 : -1.0;
    const int inside = std::popcount(v & ((1u << k) - 1u));
    total += maj * (inside % 2 ? -1.0 : 1.0);
  }
  return total / static_cast<double>(1u << n);
}

/// f evaluated on every vertex of {-1, 1}^n (bit i set means x_i = -1).
inline std::vector<double> vertex_values(const bpl::MultilinearFunction& f) {
  const int n = f.num_vars();
  std::vector<double> out(std::size_t{1} << n);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (std::size_t v = 0; v < out.size(); ++v) {
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = (v >> i) & 1u ? -1.0 : 1.0;
    out[v] = f(x);
  }
  return out;
}

/// E_{x ~ D^n}[g(x)^2] by enumeration of all atom tuples.
inline double classical_expected_sq(const std::function<double(const std::vector<double>&)>& g, int n,
                                    const bpl::IntervalDistribution& d) {
  const std::size_t k = d.size();
  std::size_t total_tuples = 1;
  for (int i = 0; i < n; ++i) total_tuples *= k;
  double total = 0.0;
  std::vector<double> x(static_cast<std::size_t>(n));
  for (std::size_t t = 0; t < total_tuples; ++t) {
    std::size_t rest = t;
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(i)] = d.atoms()[rest % k];
      w *= d.weights()[rest % k];
      rest /= k;
    }
    const double v = g(x);
    total += w * v * v;
  }
  return total;
}

inline Eigen::VectorXd qr_least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  return x.colPivHouseholderQr().solve(y);
}

/// Minimum pairwise Hamming distance over a word list.
inline int pairwise_min_distance(const std::vector<std::uint32_t>& words) {
  int best = 1 << 30;
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = i + 1; j < words.size(); ++j) best = std::min(best, std::popcount(words[i] ^ words[j]));
  return best;
}

}  // namespace oracle
