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

#include "bpl/serialize.hpp"

#include <fstream>
#include <initializer_list>
#include <string_view>

#include "bpl/pauli.hpp"

namespace bpl {

namespace {

void check_keys(const Json& spec, std::string_view what, std::initializer_list<std::string_view> allowed) {
  require(spec.is_object(), ErrorCode::kConfig, std::string(what) + " spec must be an object");
  for (const auto& item : spec.items()) {
    bool known = false;
    for (auto a : allowed) known = known || item.key() == a;
    require(known, ErrorCode::kConfig, "unknown field '" + item.key() + "' in " + std::string(what) + " spec");
  }
}

template <class T>
T get(const Json& spec, const char* key, std::string_view what) {
  require(spec.contains(key), ErrorCode::kConfig,
          std::string(what) + " spec is missing '" + key + "'");
  try {
    return spec.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kConfig, std::string(what) + " field '" + key + "' has the wrong type");
  }
}

template <class T>
T get_or(const Json& spec, const char* key, T fallback, std::string_view what) {
  return spec.contains(key) ? get<T>(spec, key, what) : fallback;
}

Vec3 vec3_from(const Json& j, std::string_view what) {
  require(j.is_array() && j.size() == 3, ErrorCode::kConfig, std::string(what) + " must be a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIo, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, "invalid JSON in " + path.string() + ": " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

Json rotation_to_json(const Rotation& r) {
  Json real = Json::array();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) real.push_back(r.r(i, j));
  return {{"u", complex_matrix_to_json(r.u)}, {"r", real}};
}

}  // namespace

BlochDistribution distribution_from_json(const Json& spec) {
  constexpr std::string_view what = "distribution";
  require(spec.is_object(), ErrorCode::kConfig, "distribution spec must be an object");
  const auto type = get<std::string>(spec, "type", what);
  if (type == "atoms") {
    check_keys(spec, what, {"type", "atoms", "weights"});
    std::vector<BlochVector> atoms;
    for (const auto& a : get<Json>(spec, "atoms", what)) {
      const Vec3 v = vec3_from(a, "atom");
      atoms.emplace_back(v.x(), v.y(), v.z());
    }
    if (!spec.contains("weights")) return BlochDistribution::uniform(std::move(atoms));
    return BlochDistribution(std::move(atoms), get<std::vector<double>>(spec, "weights", what));
  }
  if (type == "two_point") {
    check_keys(spec, what, {"type", "axis", "eta"});
    return BlochDistribution::two_point(vec3_from(get<Json>(spec, "axis", what), "axis"),
                                        get<double>(spec, "eta", what));
  }
  if (type == "uniform_sphere") {
    check_keys(spec, what, {"type", "k"});
    return BlochDistribution::uniform_sphere(get<std::size_t>(spec, "k", what));
  }
  if (type == "pauli_eigenstates") {
    check_keys(spec, what, {"type"});
    return BlochDistribution::pauli_eigenstates();
  }
  if (type == "bernoulli_axis") {
    check_keys(spec, what, {"type", "axis", "p", "radius"});
    return BlochDistribution::bernoulli_axis(vec3_from(get<Json>(spec, "axis", what), "axis"),
                                             get<double>(spec, "p", what), get<double>(spec, "radius", what));
  }
  if (type == "random") {
    check_keys(spec, what, {"type", "seed", "max_second_moment", "min_atoms", "max_atoms", "prefer_sphere"});
    RandomDistributionOptions opts;
    opts.max_second_moment = get_or<double>(spec, "max_second_moment", opts.max_second_moment, what);
    opts.min_atoms = get_or<std::size_t>(spec, "min_atoms", opts.min_atoms, what);
    opts.max_atoms = get_or<std::size_t>(spec, "max_atoms", opts.max_atoms, what);
    opts.prefer_sphere = get_or<bool>(spec, "prefer_sphere", opts.prefer_sphere, what);
    Rng rng = make_rng(get_or<std::uint64_t>(spec, "seed", 0, what), 0xd157);
    return random_distribution(rng, opts);
  }
  throw Error(ErrorCode::kConfig, "unknown distribution type '" + type + "'");
}

Json distribution_to_json(const BlochDistribution& d) {
  Json atoms = Json::array();
  for (const auto& a : d.atoms()) atoms.push_back({a.x, a.y, a.z});
  return {{"type", "atoms"}, {"atoms", atoms}, {"weights", d.weights()}};
}

ProductDistribution product_distribution_from_json(const Json& spec, int n) {
  require(n >= 1, ErrorCode::kConfig, "n must be >= 1");
  if (spec.is_object() && spec.contains("sites")) {
    check_keys(spec, "product distribution", {"sites"});
    const Json& sites = spec.at("sites");
    require(sites.is_array() && static_cast<int>(sites.size()) == n, ErrorCode::kConfig,
            "'sites' must list one distribution per qubit");
    std::vector<BlochDistribution> out;
    for (const auto& s : sites) out.push_back(distribution_from_json(s));
    return ProductDistribution(std::move(out));
  }
  return ProductDistribution::iid(distribution_from_json(spec), static_cast<std::size_t>(n));
}

Json complex_matrix_to_json(const MatXc& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back({m(i, j).real(), m(i, j).imag()});
  return out;
}

MatXc complex_matrix_from_json(const Json& flat, Eigen::Index rows, Eigen::Index cols) {
  require(flat.is_array() && static_cast<Eigen::Index>(flat.size()) == rows * cols, ErrorCode::kConfig,
          "matrix must have rows * cols entries");
  MatXc m(rows, cols);
  for (Eigen::Index k = 0; k < rows * cols; ++k) {
    const Json& e = flat[static_cast<std::size_t>(k)];
    if (e.is_number()) {
      m(k / cols, k % cols) = cplx(e.get<double>(), 0.0);
    } else {
      require(e.is_array() && e.size() == 2, ErrorCode::kConfig, "complex entries must be [re, im]");
      m(k / cols, k % cols) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

KrausChannel channel_from_file_json(const Json& doc) {
  check_keys(doc, "channel file", {"n", "kraus"});
  const int n = get<int>(doc, "n", "channel file");
  require(n >= 1 && n <= kDefaultMaxQubits, ErrorCode::kConfig, "channel file n must lie in [1, 10]");
  const Eigen::Index dim = Eigen::Index{1} << n;
  std::vector<MatXc> kraus;
  for (const auto& k : get<Json>(doc, "kraus", "channel file")) kraus.push_back(complex_matrix_from_json(k, dim, dim));
  return KrausChannel(n, std::move(kraus));
}

Json channel_to_json(const KrausChannel& e) {
  Json kraus = Json::array();
  for (const auto& k : e.kraus()) kraus.push_back(complex_matrix_to_json(k));
  return {{"n", e.num_qubits()}, {"kraus", kraus}};
}

KrausChannel channel_from_json(const Json& spec, int n, const std::filesystem::path& base_dir) {
  constexpr std::string_view what = "channel";
  require(spec.is_object(), ErrorCode::kConfig, "channel spec must be an object");
  const auto type = get<std::string>(spec, "type", what);
  if (type == "identity") {
    check_keys(spec, what, {"type"});
    return KrausChannel::identity(n);
  }
  if (type == "depolarizing") {
    check_keys(spec, what, {"type", "p"});
    return KrausChannel::depolarizing(n, get<double>(spec, "p", what));
  }
  if (type == "random") {
    check_keys(spec, what, {"type", "kraus", "seed"});
    Rng rng = make_rng(get_or<std::uint64_t>(spec, "seed", 0, what), 0xc4a2);
    return random_channel(n, get_or<int>(spec, "kraus", 4, what), rng);
  }
  if (type == "file") {
    check_keys(spec, what, {"type", "path"});
    KrausChannel e = channel_from_file_json(read_json_file(resolve(base_dir, get<std::string>(spec, "path", what))));
    require(e.num_qubits() == n, ErrorCode::kConfig, "channel file qubit count differs from n");
    return e;
  }
  throw Error(ErrorCode::kConfig, "unknown channel type '" + type + "'");
}

Operator observable_from_json(const Json& spec, int n, const std::filesystem::path& base_dir) {
  constexpr std::string_view what = "observable";
  if (spec.is_string()) return pauli_to_operator(PauliString(spec.get<std::string>()));
  require(spec.is_object(), ErrorCode::kConfig, "observable spec must be a string or an object");
  if (spec.contains("pauli")) {
    check_keys(spec, what, {"pauli", "coeff"});
    const Json& words = spec.at("pauli");
    const Eigen::Index dim = Eigen::Index{1} << n;
    MatXc m = MatXc::Zero(dim, dim);
    if (words.is_string()) {
      const double c = get_or<double>(spec, "coeff", 1.0, what);
      m = c * pauli_to_operator(PauliString(words.get<std::string>())).matrix();
    } else {
      require(words.is_array(), ErrorCode::kConfig, "'pauli' must be a string or a list");
      const auto coeffs = get<std::vector<double>>(spec, "coeff", what);
      require(coeffs.size() == words.size(), ErrorCode::kConfig, "one coefficient per Pauli word required");
      for (std::size_t i = 0; i < words.size(); ++i)
        m += coeffs[i] * pauli_to_operator(PauliString(words[i].get<std::string>())).matrix();
    }
    Operator o(n, std::move(m));
    require(o.num_qubits() == n, ErrorCode::kConfig, "observable qubit count differs from n");
    return o;
  }
  if (spec.contains("type")) {
    check_keys(spec, what, {"type", "seed"});
    require(get<std::string>(spec, "type", what) == "random", ErrorCode::kConfig, "unknown observable type");
    Rng rng = make_rng(get_or<std::uint64_t>(spec, "seed", 0, what), 0x0b5);
    return random_observable(n, rng);
  }
  if (spec.contains("file")) {
    check_keys(spec, what, {"file"});
    return observable_from_json(read_json_file(resolve(base_dir, get<std::string>(spec, "file", what))), n, base_dir);
  }
  check_keys(spec, what, {"n", "matrix"});
  const int on = get<int>(spec, "n", what);
  require(on == n, ErrorCode::kConfig, "observable qubit count differs from n");
  const Eigen::Index dim = Eigen::Index{1} << n;
  return Operator(n, complex_matrix_from_json(get<Json>(spec, "matrix", what), dim, dim));
}

Json operator_to_json(const Operator& o) {
  return {{"n", o.num_qubits()}, {"matrix", complex_matrix_to_json(o.matrix())}};
}

IntervalDistribution interval_distribution_from_json(const Json& spec) {
  constexpr std::string_view what = "interval distribution";
  check_keys(spec, what, {"atoms", "weights"});
  auto atoms = get<std::vector<double>>(spec, "atoms", what);
  if (!spec.contains("weights")) return IntervalDistribution::uniform(std::move(atoms));
  return IntervalDistribution(std::move(atoms), get<std::vector<double>>(spec, "weights", what));
}

MultilinearFunction function_from_json(const Json& spec) {
  constexpr std::string_view what = "function";
  require(spec.is_object(), ErrorCode::kConfig, "function spec must be an object");
  const auto type = get<std::string>(spec, "type", what);
  if (type == "majority") {
    check_keys(spec, what, {"type", "n"});
    return majority_function(get<int>(spec, "n", what));
  }
  if (type == "monomials") {
    check_keys(spec, what, {"type", "n", "terms"});
    const int n = get<int>(spec, "n", what);
    std::map<Subset, double> coeffs;
    for (const auto& t : get<Json>(spec, "terms", what)) {
      check_keys(t, "monomial", {"subset", "coeff"});
      Subset s = 0;
      for (int i : get<std::vector<int>>(t, "subset", "monomial")) {
        require(i >= 0 && i < n, ErrorCode::kConfig, "monomial subset index out of range");
        s |= Subset{1} << i;
      }
      coeffs[s] += get<double>(t, "coeff", "monomial");
    }
    return MultilinearFunction(n, std::move(coeffs));
  }
  throw Error(ErrorCode::kConfig, "unknown function type '" + type + "'");
}

Json hypothesis_to_json(const Hypothesis& h) {
  Json basis = Json::array();
  for (const auto& b : h.bases()) {
    Json site = rotation_to_json(b.rotation);
    site["mu"] = b.mu;
    basis.push_back(site);
  }
  Json terms = Json::array();
  for (std::size_t t = 0; t < h.terms().size(); ++t) {
    std::string letters;
    for (int l : h.terms()[t].letters) letters.push_back(letter_char(l));
    terms.push_back({{"sites", h.terms()[t].sites},
                     {"letters", letters},
                     {"weight", h.weights()(static_cast<Eigen::Index>(t))}});
  }
  return {{"basis", basis}, {"degree", h.degree()}, {"terms", terms}};
}

Json classical_hypothesis_to_json(const ClassicalHypothesis& h) {
  Json terms = Json::array();
  for (std::size_t t = 0; t < h.terms().size(); ++t) {
    std::vector<int> members;
    for (int i = 0; i < h.num_vars(); ++i)
      if (h.terms()[t] & (Subset{1} << i)) members.push_back(i);
    terms.push_back({{"subset", members}, {"weight", h.weights()(static_cast<Eigen::Index>(t))}});
  }
  return {{"n", h.num_vars()}, {"mu", h.mu()}, {"sigma", h.sigma()}, {"degree", h.degree()}, {"terms", terms}};
}

Json learn_report_to_json(const LearnReport& r) {
  Json shots = r.shots ? Json(*r.shots) : Json("exact");
  return {{"eta", r.eta},
          {"eta_estimated", r.eta_estimated},
          {"eta_prime", r.eta_prime},
          {"degree", r.degree},
          {"samples", r.samples},
          {"features", r.features},
          {"shots", shots},
          {"sample_constant", r.sample_constant},
          {"ridge", r.ridge},
          {"seed", r.seed},
          {"train_mse", r.train_mse},
          {"test_mse", r.test_mse},
          {"truncation_bound", r.truncation_bound}};
}

Json classical_report_to_json(const ClassicalLearnReport& r) {
  return {{"eta", r.eta},
          {"degree", r.degree},
          {"samples", r.samples},
          {"features", r.features},
          {"sample_constant", r.sample_constant},
          {"ridge", r.ridge},
          {"seed", r.seed},
          {"train_mse", r.train_mse},
          {"test_mse", r.test_mse},
          {"direct_test_mse", r.direct_test_mse},
          {"rms_z", r.rms_z},
          {"max_abs_z", r.max_abs_z}};
}

}  // namespace bpl
