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
#include <optional>
#include <string>
#include <vector>

#include "bpl/bloch.hpp"
#include "bpl/common.hpp"

namespace bpl {

/// Default qubit cap for dense simulation.
inline constexpr int kDefaultMaxQubits = 10;

/// Dense n-qubit operator. Site 0 is the most significant tensor factor.
class Operator {
 public:
  Operator(int n, MatXc entries);
  static Operator identity(int n);

  int num_qubits() const { return n_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const MatXc& matrix() const { return entries_; }

  bool is_hermitian(double tol = 1e-10) const;
  /// Largest singular value (largest |eigenvalue| for Hermitian operators).
  double op_norm() const;

 private:
  int n_;
  MatXc entries_;
};

/// Word over {I, X, Y, Z}; character i acts on site i.
class PauliString {
 public:
  explicit PauliString(std::string word);
  const std::string& word() const { return word_; }
  int num_qubits() const { return static_cast<int>(word_.size()); }
  int degree() const;
  int letter(std::size_t site) const;

 private:
  std::string word_;
};

/// Classical description of a product state: one Bloch vector per site.
struct ProductState {
  std::vector<BlochVector> sites;
  int num_qubits() const { return static_cast<int>(sites.size()); }
};

class KrausChannel {
 public:
  KrausChannel(int n, std::vector<MatXc> kraus, double tol = 1e-8);
  static KrausChannel identity(int n);
  /// Independent single-qubit depolarizing channels rho -> (1-p) rho + p I/2
  /// on every qubit. Has 4^n Kraus operators; limited to n <= 6.
  static KrausChannel depolarizing(int n, double p);
  static KrausChannel unitary(const MatXc& u);

  int num_qubits() const { return n_; }
  const std::vector<MatXc>& kraus() const { return kraus_; }

 private:
  int n_;
  std::vector<MatXc> kraus_;
};

/// Tensor product of 2x2 factors; evaluated against product states by the
/// per-site product formula.
struct ProductOperator {
  std::vector<Mat2c> factors;
  Operator dense() const;
};

Operator pauli_to_operator(const PauliString& p);
ProductOperator pauli_to_product(const PauliString& p);
Operator density(const ProductState& s);

Operator apply_channel(const KrausChannel& e, const Operator& rho);
/// sum_k K_k^dagger O K_k.
Operator heisenberg_adjoint(const KrausChannel& e, const Operator& o);

/// tr(o rho(s)) by dense trace.
double expectation(const Operator& o, const ProductState& s);
/// tr(o rho(s)) by the product formula prod_i tr(o_i rho_i).
double expectation(const ProductOperator& o, const ProductState& s);

/// Real standard Pauli coefficients tr(O P)/2^n for all 4^n words, indexed
/// by sum_i letter_i 4^(n-1-i). Requires a Hermitian operator.
std::vector<double> pauli_coefficients(const Operator& o);
/// Inverse of pauli_coefficients.
Operator operator_from_pauli_coefficients(int n, const std::vector<double>& coeffs);
/// sum_P c_P prod_i alpha_i^{P_i}, the expectation of the expansion on s.
double evaluate_pauli_coefficients(const std::vector<double>& coeffs, const ProductState& s);

/// Two-outcome label estimate 2 B/shots - 1 with B ~ Binomial(shots, (1+v)/2),
/// where v = tr(O E[rho]) is supplied directly.
double estimate_label_from_value(double value, long shots, Rng& rng);
/// Estimates tr(O E[rho(s)]) with `shots` two-outcome measurements. Requires
/// ||o||_op <= 1.
double estimate_label(const KrausChannel& e, const Operator& o, const ProductState& s,
                      long shots, Rng& rng);

/// Single-qubit stabilizer outcomes of a randomized Pauli measurement.
enum class StabilizerState { kZero, kOne, kPlus, kMinus, kYPlus, kYMinus };

struct ShadowSnapshot {
  std::vector<StabilizerState> outcomes;
  /// The single-copy estimator tensor_i (3 |s_i><s_i| - I).
  Operator estimator() const;
};

Mat2c stabilizer_projector(StabilizerState s);

/// Measures every qubit of `rho_out` in a uniformly random X/Y/Z basis using
/// exact Born probabilities.
ShadowSnapshot shadow_estimate(const Operator& rho_out, Rng& rng);

/// Kraus operators from i.i.d. complex Gaussians, jointly normalized so that
/// sum K^dagger K = I.
KrausChannel random_channel(int n, int num_kraus, Rng& rng, int max_qubits = kDefaultMaxQubits);
/// Random Hermitian operator scaled to operator norm 1.
Operator random_observable(int n, Rng& rng);

/// Samples one product state from a product distribution.
ProductState sample_product_state(const ProductDistribution& d, Rng& rng);

}  // namespace bpl
