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

#include "bpl/qsim.hpp"

#include <algorithm>
#include <cmath>

#include "bpl/detail/site_tensor.hpp"
#include "bpl/pauli.hpp"

namespace bpl {

namespace {

MatXc kron(const MatXc& a, const MatXc& b) {
  MatXc out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

std::size_t dim_of(int n) { return std::size_t{1} << n; }

void check_dims(int expected, int got, const char* what) {
  require(expected == got, ErrorCode::kDimensionMismatch,
          std::string(what) + ": qubit counts differ (" + std::to_string(expected) + " vs " +
              std::to_string(got) + ")");
}

// Pair-tensor index of matrix entry (row, col): digit i is 2 r_i + c_i.
std::size_t pair_index(std::size_t row, std::size_t col, int n) {
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    const std::size_t shift = static_cast<std::size_t>(n - 1 - i);
    const std::size_t digit = 2 * ((row >> shift) & 1u) + ((col >> shift) & 1u);
    idx = idx * 4 + digit;
  }
  return idx;
}

// Letters (I, X, Y, Z) from 2x2 entries (m00, m01, m10, m11): a_P = tr(P m)/2.
Mat4c entries_to_letters() {
  const cplx h(0.5, 0.0);
  const cplx ih(0.0, 0.5);
  Mat4c a;
  a << h, 0, 0, h,  //
      0, h, h, 0,   //
      0, ih, -ih, 0,  //
      h, 0, 0, -h;
  return a;
}

Mat4c letters_to_entries() {
  const cplx i(0.0, 1.0);
  Mat4c a;
  a << 1, 0, 0, 1,  //
      0, 1, -i, 0,  //
      0, 1, i, 0,   //
      1, 0, 0, -1;
  return a;
}

}  // namespace

Operator::Operator(int n, MatXc entries) : n_(n), entries_(std::move(entries)) {
  require(n >= 1 && n <= 16, ErrorCode::kInvalidArgument, "qubit count out of range");
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  require(entries_.rows() == d && entries_.cols() == d, ErrorCode::kDimensionMismatch,
          "operator matrix must be 2^n x 2^n");
}

Operator Operator::identity(int n) {
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  return Operator(n, MatXc::Identity(d, d));
}

bool Operator::is_hermitian(double tol) const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double Operator::op_norm() const {
  if (is_hermitian(1e-12)) {
    const MatXc h = 0.5 * (entries_ + entries_.adjoint());
    Eigen::SelfAdjointEigenSolver<MatXc> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::JacobiSVD<MatXc> svd(entries_);
  return svd.singularValues()(0);
}

PauliString::PauliString(std::string word) : word_(std::move(word)) {
  require(!word_.empty(), ErrorCode::kInvalidArgument, "empty Pauli word");
  for (char c : word_)
    require(c == 'I' || c == 'X' || c == 'Y' || c == 'Z', ErrorCode::kInvalidArgument,
            "Pauli word letters must be I, X, Y or Z");
}

int PauliString::degree() const {
  return static_cast<int>(std::count_if(word_.begin(), word_.end(), [](char c) { return c != 'I'; }));
}

int PauliString::letter(std::size_t site) const {
  switch (word_[site]) {
    case 'X': return 1;
    case 'Y': return 2;
    case 'Z': return 3;
    default: return 0;
  }
}

KrausChannel::KrausChannel(int n, std::vector<MatXc> kraus, double tol)
    : n_(n), kraus_(std::move(kraus)) {
  require(n >= 1 && n <= 16, ErrorCode::kInvalidArgument, "qubit count out of range");
  require(!kraus_.empty(), ErrorCode::kInvalidArgument, "channel needs at least one Kraus operator");
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  MatXc sum = MatXc::Zero(d, d);
  for (const auto& k : kraus_) {
    require(k.rows() == d && k.cols() == d, ErrorCode::kDimensionMismatch,
            "Kraus operator must be 2^n x 2^n");
    sum += k.adjoint() * k;
  }
  require((sum - MatXc::Identity(d, d)).cwiseAbs().maxCoeff() <= tol,
          ErrorCode::kInvalidArgument, "Kraus operators are not trace preserving");
}

KrausChannel KrausChannel::identity(int n) {
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  return KrausChannel(n, {MatXc::Identity(d, d)});
}

KrausChannel KrausChannel::depolarizing(int n, double p) {
  require(p >= 0.0 && p <= 1.0, ErrorCode::kInvalidArgument, "depolarizing p must lie in [0, 1]");
  require(n <= 6, ErrorCode::kGuardExceeded, "depolarizing channel limited to n <= 6");
  std::vector<MatXc> single = {std::sqrt(1.0 - 0.75 * p) * MatXc(pauli(0)),
                               std::sqrt(0.25 * p) * MatXc(pauli(1)),
                               std::sqrt(0.25 * p) * MatXc(pauli(2)),
                               std::sqrt(0.25 * p) * MatXc(pauli(3))};
  std::vector<MatXc> ops = single;
  for (int q = 1; q < n; ++q) {
    std::vector<MatXc> next;
    next.reserve(ops.size() * 4);
    for (const auto& a : ops)
      for (const auto& b : single) next.push_back(kron(a, b));
    ops.swap(next);
  }
  return KrausChannel(n, std::move(ops));
}

KrausChannel KrausChannel::unitary(const MatXc& u) {
  int n = 0;
  while ((Eigen::Index{1} << n) < u.rows()) ++n;
  return KrausChannel(n, {u});
}

Operator ProductOperator::dense() const {
  require(!factors.empty(), ErrorCode::kInvalidArgument, "empty product operator");
  MatXc m = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) m = kron(m, factors[i]);
  return Operator(static_cast<int>(factors.size()), std::move(m));
}

ProductOperator pauli_to_product(const PauliString& p) {
  ProductOperator out;
  for (std::size_t i = 0; i < p.word().size(); ++i) out.factors.push_back(pauli(p.letter(i)));
  return out;
}

Operator pauli_to_operator(const PauliString& p) { return pauli_to_product(p).dense(); }

Operator density(const ProductState& s) {
  require(!s.sites.empty(), ErrorCode::kInvalidArgument, "empty product state");
  ProductOperator rho;
  for (const auto& site : s.sites) {
    validate(site);
    rho.factors.push_back(bloch_density(site.vec()));
  }
  return rho.dense();
}

Operator apply_channel(const KrausChannel& e, const Operator& rho) {
  check_dims(e.num_qubits(), rho.num_qubits(), "apply_channel");
  MatXc out = MatXc::Zero(static_cast<Eigen::Index>(rho.dim()), static_cast<Eigen::Index>(rho.dim()));
  for (const auto& k : e.kraus()) out.noalias() += k * rho.matrix() * k.adjoint();
  return Operator(rho.num_qubits(), std::move(out));
}

Operator heisenberg_adjoint(const KrausChannel& e, const Operator& o) {
  check_dims(e.num_qubits(), o.num_qubits(), "heisenberg_adjoint");
  MatXc out = MatXc::Zero(static_cast<Eigen::Index>(o.dim()), static_cast<Eigen::Index>(o.dim()));
  for (const auto& k : e.kraus()) out.noalias() += k.adjoint() * o.matrix() * k;
  // Exactly Hermitian up to round-off; symmetrize.
  out = 0.5 * (out + out.adjoint()).eval();
  return Operator(o.num_qubits(), std::move(out));
}

double expectation(const Operator& o, const ProductState& s) {
  check_dims(o.num_qubits(), s.num_qubits(), "expectation");
  const Operator rho = density(s);
  return o.matrix().cwiseProduct(rho.matrix().transpose()).sum().real();
}

double expectation(const ProductOperator& o, const ProductState& s) {
  check_dims(static_cast<int>(o.factors.size()), s.num_qubits(), "expectation");
  cplx acc(1.0, 0.0);
  for (std::size_t i = 0; i < o.factors.size(); ++i) {
    validate(s.sites[i]);
    acc *= (o.factors[i] * bloch_density(s.sites[i].vec())).trace();
  }
  return acc.real();
}

std::vector<double> pauli_coefficients(const Operator& o) {
  require(o.is_hermitian(1e-10 * std::max(1.0, o.matrix().cwiseAbs().maxCoeff())),
          ErrorCode::kInvalidArgument, "Pauli coefficients require a Hermitian operator");
  const int n = o.num_qubits();
  const std::size_t d = o.dim();
  std::vector<cplx> t(d * d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c)
      t[pair_index(r, c, n)] = o.matrix()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  const Mat4c a = entries_to_letters();
  for (int site = 0; site < n; ++site) detail::apply_site_map<4>(t, n, site, a);
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i].real();
  return out;
}

Operator operator_from_pauli_coefficients(int n, const std::vector<double>& coeffs) {
  const std::size_t d = dim_of(n);
  require(coeffs.size() == d * d, ErrorCode::kDimensionMismatch, "coefficient count must be 4^n");
  std::vector<cplx> t(coeffs.begin(), coeffs.end());
  const Mat4c a = letters_to_entries();
  for (int site = 0; site < n; ++site) detail::apply_site_map<4>(t, n, site, a);
  MatXc m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = t[pair_index(r, c, n)];
  return Operator(n, std::move(m));
}

double evaluate_pauli_coefficients(const std::vector<double>& coeffs, const ProductState& s) {
  const int n = s.num_qubits();
  require(coeffs.size() == detail::ipow(4, n), ErrorCode::kDimensionMismatch,
          "coefficient count must be 4^n");
  std::vector<Eigen::Vector4d> vs;
  vs.reserve(s.sites.size());
  for (const auto& site : s.sites) vs.emplace_back(1.0, site.x, site.y, site.z);
  return detail::contract_all<4, double, Eigen::Vector4d>(coeffs, vs);
}

double estimate_label_from_value(double value, long shots, Rng& rng) {
  require(shots >= 1, ErrorCode::kInvalidArgument, "shots must be >= 1");
  const double p = std::clamp(0.5 * (1.0 + value), 0.0, 1.0);
  std::binomial_distribution<long> binom(shots, p);
  const double est = 2.0 * static_cast<double>(binom(rng)) / static_cast<double>(shots) - 1.0;
  return std::clamp(est, -1.0, 1.0);
}

double estimate_label(const KrausChannel& e, const Operator& o, const ProductState& s,
                      long shots, Rng& rng) {
  require(shots >= 1, ErrorCode::kInvalidArgument, "shots must be >= 1");
  require(o.op_norm() <= 1.0 + 1e-9, ErrorCode::kInvalidArgument,
          "two-outcome estimation requires ||O||_op <= 1");
  const Operator out = apply_channel(e, density(s));
  const double value = o.matrix().cwiseProduct(out.matrix().transpose()).sum().real();
  return estimate_label_from_value(value, shots, rng);
}

Mat2c stabilizer_projector(StabilizerState s) {
  switch (s) {
    case StabilizerState::kZero: return 0.5 * (pauli(0) + pauli(3));
    case StabilizerState::kOne: return 0.5 * (pauli(0) - pauli(3));
    case StabilizerState::kPlus: return 0.5 * (pauli(0) + pauli(1));
    case StabilizerState::kMinus: return 0.5 * (pauli(0) - pauli(1));
    case StabilizerState::kYPlus: return 0.5 * (pauli(0) + pauli(2));
    case StabilizerState::kYMinus: return 0.5 * (pauli(0) - pauli(2));
  }
  return pauli(0);
}

Operator ShadowSnapshot::estimator() const {
  ProductOperator op;
  for (auto s : outcomes) op.factors.push_back(3.0 * stabilizer_projector(s) - pauli(0));
  return op.dense();
}

ShadowSnapshot shadow_estimate(const Operator& rho_out, Rng& rng) {
  const MatXc& rho = rho_out.matrix();
  require(rho_out.is_hermitian(1e-9), ErrorCode::kInvalidArgument, "shadow input is not Hermitian");
  require(std::abs(rho.trace().real() - 1.0) <= 1e-8, ErrorCode::kInvalidArgument,
          "shadow input does not have unit trace");
  {
    Eigen::SelfAdjointEigenSolver<MatXc> es(rho, Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() >= -1e-8, ErrorCode::kInvalidArgument,
            "shadow input is not positive semidefinite");
  }
  const int n = rho_out.num_qubits();
  // V_b maps the +/- eigenbasis of basis b onto |0>, |1>.
  const double s = 1.0 / std::sqrt(2.0);
  Mat2c hadamard;
  hadamard << s, s, s, -s;
  Mat2c sdg;
  sdg << 1, 0, 0, cplx(0, -1);
  const Mat2c rotations[3] = {hadamard, hadamard * sdg, Mat2c::Identity()};

  std::uniform_int_distribution<int> basis_pick(0, 2);
  std::vector<int> bases(static_cast<std::size_t>(n));
  ProductOperator v;
  for (int i = 0; i < n; ++i) {
    bases[static_cast<std::size_t>(i)] = basis_pick(rng);
    v.factors.push_back(rotations[bases[static_cast<std::size_t>(i)]]);
  }
  const MatXc vm = v.dense().matrix();
  const MatXc rotated = vm * rho * vm.adjoint();
  std::vector<double> probs(static_cast<std::size_t>(rotated.rows()));
  for (Eigen::Index k = 0; k < rotated.rows(); ++k)
    probs[static_cast<std::size_t>(k)] = std::max(0.0, rotated(k, k).real());
  std::discrete_distribution<std::size_t> outcome(probs.begin(), probs.end());
  const std::size_t bits = outcome(rng);

  static constexpr StabilizerState kStates[3][2] = {
      {StabilizerState::kPlus, StabilizerState::kMinus},
      {StabilizerState::kYPlus, StabilizerState::kYMinus},
      {StabilizerState::kZero, StabilizerState::kOne}};
  ShadowSnapshot snap;
  for (int i = 0; i < n; ++i) {
    const std::size_t bit = (bits >> (n - 1 - i)) & 1u;
    snap.outcomes.push_back(kStates[bases[static_cast<std::size_t>(i)]][bit]);
  }
  return snap;
}

KrausChannel random_channel(int n, int num_kraus, Rng& rng, int max_qubits) {
  require(n >= 1 && n <= max_qubits, ErrorCode::kGuardExceeded,
          "random_channel: n exceeds the qubit cap");
  require(num_kraus >= 1, ErrorCode::kInvalidArgument, "random_channel needs num_kraus >= 1");
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  std::vector<MatXc> g(static_cast<std::size_t>(num_kraus), MatXc(d, d));
  MatXc sum = MatXc::Zero(d, d);
  for (auto& m : g) {
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) m(i, j) = cplx(gauss(rng), gauss(rng));
    sum += m.adjoint() * m;
  }
  Eigen::SelfAdjointEigenSolver<MatXc> es(0.5 * (sum + sum.adjoint()));
  const VecX inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
  const MatXc a = es.eigenvectors() * inv_sqrt.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  for (auto& m : g) m = (m * a).eval();
  return KrausChannel(n, std::move(g));
}

Operator random_observable(int n, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(dim_of(n));
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatXc g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
  MatXc h = 0.5 * (g + g.adjoint());
  Operator tmp(n, h);
  h /= tmp.op_norm();
  return Operator(n, std::move(h));
}

ProductState sample_product_state(const ProductDistribution& d, Rng& rng) {
  ProductState s;
  s.sites.reserve(d.num_sites());
  for (const auto& site : d.sites()) s.sites.push_back(sample(site, rng));
  return s;
}

}  // namespace bpl
