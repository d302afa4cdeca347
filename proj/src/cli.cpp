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

#include "bpl/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "bpl/biased_basis.hpp"
#include "bpl/classical_fourier.hpp"
#include "bpl/learner.hpp"

namespace bpl {

namespace {

const std::set<std::string>& known_fields() {
  static const std::set<std::string> fields = {
      "command",  "n",          "distribution", "channel",       "observable", "function",  "interval",
      "epsilon",  "delta",      "eta",          "degree",        "samples",    "shots",     "sample_constant",
      "ridge",    "seed",       "out",          "threads",       "mu_grid",    "k_max",     "trials",
      "eta_list", "n_list",     "blowup_delta", "a",             "b",          "grid",      "seeds",
      "code_eta", "rate",       "sample_factor", "d_max",        "mc_samples"};
  return fields;
}

template <class T>
T field(const Json& doc, const char* key, T fallback) {
  if (!doc.contains(key) || doc.at(key).is_null()) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kConfig, std::string("config field '") + key + "' has the wrong type");
  }
}

void check(bool ok, const std::string& what) { require(ok, ErrorCode::kConfig, what); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

Json with_header(const ExperimentConfig& cfg, const char* key, Json body) {
  Json out;
  out["version"] = std::string(kVersion);
  out["config"] = config_to_json(cfg);
  out[key] = std::move(body);
  return out;
}

std::filesystem::path artifact(const ExperimentConfig& cfg, const char* name) {
  return std::filesystem::path(cfg.out) / name;
}

Operator resolve_observable(const ExperimentConfig& cfg) {
  if (cfg.observable.is_null()) return pauli_to_operator(PauliString("Z" + std::string(cfg.n - 1, 'I')));
  if (cfg.observable.is_string())
    check(static_cast<int>(cfg.observable.get<std::string>().size()) == cfg.n,
          "observable word length differs from n");
  return observable_from_json(cfg.observable, cfg.n, cfg.base_dir);
}

ShotsPolicy shots_policy(const std::string& s) {
  ShotsPolicy p;
  if (s == "exact") {
    p.kind = ShotsPolicy::Kind::kExact;
  } else if (s == "auto") {
    p.kind = ShotsPolicy::Kind::kAuto;
  } else {
    p.kind = ShotsPolicy::Kind::kFixed;
    p.fixed = std::stol(s);
  }
  return p;
}

RunResult run_verify(const ExperimentConfig& cfg) {
  RunResult res;
  std::string eig = "mu,k,lambda_min,bound,pass\n";
  int eig_pass = 0;
  int eig_total = 0;
  for (double mu : cfg.mu_grid) {
    for (int k = 1; k <= cfg.k_max; ++k) {
      const auto c = verify_min_eigenvalue(mu, k);
      eig += fmt(mu) + "," + std::to_string(k) + "," + fmt(c.lambda_min) + "," + fmt(c.bound) + "," +
             (c.pass ? "true" : "false") + "\n";
      eig_pass += c.pass;
      ++eig_total;
    }
  }
  std::string op = "seed,eta,norm,eta_prime,pass\n";
  int op_pass = 0;
  int op_total = 0;
  for (int t = 0; t < cfg.trials; ++t) {
    for (std::size_t e = 0; e < cfg.eta_list.size(); ++e) {
      const double eta = cfg.eta_list[e];
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(t);
      Rng rng = make_rng(seed, 0x0f00 + e);
      RandomDistributionOptions opts;
      opts.max_second_moment = 1.0 - eta;
      const auto c = verify_delta_sigma_delta(random_distribution(rng, opts), eta);
      op += std::to_string(seed) + "," + fmt(eta) + "," + fmt(c.norm_delta_sigma_delta) + "," +
            fmt(c.eta_prime) + "," + (c.pass ? "true" : "false") + "\n";
      op_pass += c.pass;
      ++op_total;
    }
  }
  write_atomic(artifact(cfg, "min_eigenvalue.csv"), eig);
  write_atomic(artifact(cfg, "op_norm.csv"), op);
  Json summary = {{"min_eigenvalue", {{"pass", eig_pass}, {"total", eig_total}}},
                  {"op_norm", {{"pass", op_pass}, {"total", op_total}}}};
  write_atomic(artifact(cfg, "verify.json"), with_header(cfg, "results", summary).dump(2) + "\n");
  res.artifacts = {artifact(cfg, "min_eigenvalue.csv"), artifact(cfg, "op_norm.csv"), artifact(cfg, "verify.json")};
  res.summary = "verify: min_eigenvalue " + std::to_string(eig_pass) + "/" + std::to_string(eig_total) +
                " pass, op_norm " + std::to_string(op_pass) + "/" + std::to_string(op_total) + " pass";
  res.exit_code = eig_pass == eig_total && op_pass == op_total ? 0 : 3;
  return res;
}

RunResult run_learn_quantum(const ExperimentConfig& cfg) {
  const ProductDistribution dist = product_distribution_from_json(cfg.distribution, cfg.n);
  const KrausChannel e = channel_from_json(cfg.channel, cfg.n, cfg.base_dir);
  const Operator o = resolve_observable(cfg);
  LearnOptions opts;
  opts.epsilon = cfg.epsilon;
  opts.delta = cfg.delta;
  if (cfg.eta_estimate) {
    opts.eta.reset();
  } else {
    opts.eta = cfg.eta ? *cfg.eta : 1.0 - dist.max_second_moment_norm();
  }
  opts.degree = cfg.degree;
  opts.samples = cfg.samples;
  opts.sample_constant = cfg.sample_constant;
  opts.shots = shots_policy(cfg.shots);
  opts.ridge = cfg.ridge;
  opts.seed = cfg.seed;
  const auto [h, rep] = learn_channel(dist, e, o, opts);
  write_atomic(artifact(cfg, "hypothesis.json"), with_header(cfg, "hypothesis", hypothesis_to_json(h)).dump(2) + "\n");
  write_atomic(artifact(cfg, "report.json"), with_header(cfg, "report", learn_report_to_json(rep)).dump(2) + "\n");
  RunResult res;
  res.artifacts = {artifact(cfg, "hypothesis.json"), artifact(cfg, "report.json")};
  res.summary = "learn-quantum: n=" + std::to_string(cfg.n) + " d=" + std::to_string(rep.degree) +
                " m=" + std::to_string(rep.samples) + " train_mse=" + fmt(rep.train_mse) +
                " test_mse=" + fmt(rep.test_mse);
  return res;
}

RunResult run_learn_classical(const ExperimentConfig& cfg) {
  const IntervalDistribution dist = interval_distribution_from_json(cfg.interval);
  const MultilinearFunction f = function_from_json(cfg.function);
  ClassicalLearnOptions opts;
  opts.epsilon = cfg.epsilon;
  opts.delta = cfg.delta;
  opts.eta = cfg.eta;
  opts.degree = cfg.degree;
  opts.samples = cfg.samples;
  opts.sample_constant = cfg.sample_constant;
  opts.ridge = cfg.ridge;
  opts.seed = cfg.seed;
  const ClassicalFit fit = learn_classical(dist, f, opts);
  write_atomic(artifact(cfg, "classical_hypothesis.json"),
               with_header(cfg, "hypothesis", classical_hypothesis_to_json(fit.regression)).dump(2) + "\n");
  write_atomic(artifact(cfg, "report.json"),
               with_header(cfg, "report", classical_report_to_json(fit.report)).dump(2) + "\n");
  RunResult res;
  res.artifacts = {artifact(cfg, "classical_hypothesis.json"), artifact(cfg, "report.json")};
  res.summary = "learn-classical: n=" + std::to_string(f.num_vars()) + " d=" + std::to_string(fit.report.degree) +
                " m=" + std::to_string(fit.report.samples) + " test_mse=" + fmt(fit.report.test_mse) +
                " rms_z=" + fmt(fit.report.rms_z);
  return res;
}

RunResult run_demo_majority(const ExperimentConfig& cfg) {
  std::string csv = "n,delta,t_star,max_abs\n";
  bool increasing = true;
  double prev = -1.0;
  for (int n : cfg.n_list) {
    const auto r = truncation_blowup_scan(n, cfg.blowup_delta, cfg.a, cfg.b, cfg.grid);
    csv += std::to_string(n) + "," + fmt(cfg.blowup_delta) + "," + fmt(r.t_star) + "," + fmt(r.max_abs) + "\n";
    increasing = increasing && r.max_abs > prev;
    prev = r.max_abs;
  }
  write_atomic(artifact(cfg, "majority.csv"), csv);
  RunResult res;
  res.artifacts = {artifact(cfg, "majority.csv")};
  res.summary = std::string("demo-majority: ") + std::to_string(cfg.n_list.size()) + " sizes, max_abs " +
                (increasing ? "strictly increasing" : "not strictly increasing") + ", last=" + fmt(prev);
  return res;
}

RunResult run_demo_code_lb(const ExperimentConfig& cfg) {
  CodeDemoOptions opts;
  opts.n = cfg.n;
  opts.degree = cfg.degree ? *cfg.degree : 3;
  opts.eta = cfg.code_eta;
  opts.rate = cfg.rate;
  opts.sample_factor = cfg.sample_factor;
  opts.ridge = cfg.ridge;
  std::string csv = "n,degree,test_mse_code,test_mse_product,seed\n";
  double worst_code = 1e300;
  double worst_product = 0.0;
  for (int s = 0; s < cfg.seeds; ++s) {
    const auto r = run_code_demo(opts, cfg.seed + static_cast<std::uint64_t>(s));
    csv += std::to_string(r.n) + "," + std::to_string(r.degree) + "," + fmt(r.test_mse_code) + "," +
           fmt(r.test_mse_product) + "," + std::to_string(r.seed) + "\n";
    worst_code = std::min(worst_code, r.test_mse_code);
    worst_product = std::max(worst_product, r.test_mse_product);
  }
  write_atomic(artifact(cfg, "code_lb.csv"), csv);
  RunResult res;
  res.artifacts = {artifact(cfg, "code_lb.csv")};
  res.summary = "demo-code-lb: n=" + std::to_string(cfg.n) + " seeds=" + std::to_string(cfg.seeds) +
                " min test_mse_code=" + fmt(worst_code) + " max test_mse_product=" + fmt(worst_product);
  return res;
}

RunResult run_decay_scan(const ExperimentConfig& cfg) {
  const ProductDistribution dist = product_distribution_from_json(cfg.distribution, cfg.n);
  const KrausChannel e = channel_from_json(cfg.channel, cfg.n, cfg.base_dir);
  const Operator target = heisenberg_adjoint(e, resolve_observable(cfg));
  const double eta = cfg.eta ? *cfg.eta : 1.0 - dist.max_second_moment_norm();
  require(eta > 0.0, ErrorCode::kDegenerateDistribution, "the distribution has ||S||_op = 1; no decay bound");
  require(dist.max_second_moment_norm() <= 1.0 - eta + 1e-12, ErrorCode::kInvalidArgument,
          "a site has ||S||_op > 1 - eta");
  const BasisExpansion expansion = expand(target, build_bases(dist));
  EnumerationOptions eo;
  eo.mc_samples = cfg.mc_samples;
  eo.seed = cfg.seed;
  const int d_max = cfg.d_max < 0 ? cfg.n : std::min(cfg.d_max, cfg.n);
  std::string csv = "d,exact_error,bound\n";
  bool within = true;
  for (int d = 0; d <= d_max; ++d) {
    const auto err = truncation_error_exact(expansion, d, dist, eo);
    const double bound = decay_bound(eta, d);
    csv += std::to_string(d) + "," + fmt(err.value) + "," + fmt(bound) + "\n";
    within = within && err.value <= bound + 1e-9;
  }
  write_atomic(artifact(cfg, "decay.csv"), csv);
  RunResult res;
  res.artifacts = {artifact(cfg, "decay.csv")};
  res.summary = "decay-scan: n=" + std::to_string(cfg.n) + " eta=" + fmt(eta) + " d_max=" + std::to_string(d_max) +
                (within ? " error within bound at every d" : " error exceeds bound");
  res.exit_code = within ? 0 : 3;
  return res;
}

}  // namespace

ExperimentConfig config_from_json(const Json& doc) {
  check(doc.is_object(), "config must be a JSON object");
  for (const auto& item : doc.items()) check(known_fields().count(item.key()) == 1, "unknown config field '" + item.key() + "'");
  ExperimentConfig c;
  c.command = field<std::string>(doc, "command", "");
  check(std::find(std::begin(kCommands), std::end(kCommands), c.command) != std::end(kCommands),
        "unknown command '" + c.command + "'");
  c.n = field<int>(doc, "n", c.command == "demo-code-lb" ? 20 : c.n);
  if (doc.contains("distribution")) c.distribution = doc.at("distribution");
  if (doc.contains("channel")) c.channel = doc.at("channel");
  if (doc.contains("observable")) c.observable = doc.at("observable");
  if (doc.contains("function")) c.function = doc.at("function");
  if (doc.contains("interval")) c.interval = doc.at("interval");
  c.epsilon = field<double>(doc, "epsilon", c.epsilon);
  c.delta = field<double>(doc, "delta", c.delta);
  if (doc.contains("eta") && !doc.at("eta").is_null()) {
    if (doc.at("eta").is_string()) {
      check(doc.at("eta").get<std::string>() == "estimate", "eta must be a number or \"estimate\"");
      c.eta_estimate = true;
    } else {
      c.eta = field<double>(doc, "eta", 0.0);
    }
  }
  if (doc.contains("degree") && !doc.at("degree").is_null()) c.degree = field<int>(doc, "degree", 0);
  if (doc.contains("samples") && !doc.at("samples").is_null()) c.samples = field<std::size_t>(doc, "samples", 0);
  if (doc.contains("shots")) {
    const Json& s = doc.at("shots");
    if (s.is_string()) {
      c.shots = s.get<std::string>();
    } else {
      check(s.is_number_integer(), "shots must be \"exact\", \"auto\" or an integer");
      c.shots = std::to_string(s.get<long>());
    }
  }
  c.sample_constant = field<double>(doc, "sample_constant", c.sample_constant);
  c.ridge = field<double>(doc, "ridge", c.ridge);
  c.seed = field<std::uint64_t>(doc, "seed", c.seed);
  c.out = field<std::string>(doc, "out", c.out);
  c.threads = field<int>(doc, "threads", c.threads);
  c.mu_grid = field<std::vector<double>>(doc, "mu_grid", c.mu_grid);
  c.k_max = field<int>(doc, "k_max", c.k_max);
  c.trials = field<int>(doc, "trials", c.trials);
  c.eta_list = field<std::vector<double>>(doc, "eta_list", c.eta_list);
  c.n_list = field<std::vector<int>>(doc, "n_list", c.n_list);
  c.blowup_delta = field<double>(doc, "blowup_delta", c.blowup_delta);
  c.a = field<double>(doc, "a", c.a);
  c.b = field<double>(doc, "b", c.b);
  c.grid = field<int>(doc, "grid", c.grid);
  c.seeds = field<int>(doc, "seeds", c.seeds);
  c.code_eta = field<double>(doc, "code_eta", c.code_eta);
  c.rate = field<double>(doc, "rate", c.rate);
  c.sample_factor = field<double>(doc, "sample_factor", c.sample_factor);
  c.d_max = field<int>(doc, "d_max", c.d_max);
  if (doc.contains("mc_samples") && !doc.at("mc_samples").is_null())
    c.mc_samples = field<std::size_t>(doc, "mc_samples", 0);

  const int n_limit = c.command == "demo-code-lb" ? kMaxExhaustiveVars : kDefaultMaxQubits;
  check(c.n >= 1 && c.n <= n_limit, "n must lie in [1, " + std::to_string(n_limit) + "]");
  check(c.epsilon > 0.0 && c.epsilon < 1.0, "epsilon must lie in (0, 1)");
  check(c.delta > 0.0 && c.delta < 1.0, "delta must lie in (0, 1)");
  if (c.eta) check(*c.eta > 0.0 && *c.eta <= 1.0, "eta must lie in (0, 1]");
  if (c.degree) check(*c.degree >= 0, "degree must be >= 0");
  if (c.samples) check(*c.samples >= 2, "samples must be >= 2");
  if (c.shots != "exact" && c.shots != "auto") {
    char* end = nullptr;
    const long v = std::strtol(c.shots.c_str(), &end, 10);
    check(end != c.shots.c_str() && *end == '\0' && v >= 1, "shots must be \"exact\", \"auto\" or an integer >= 1");
  }
  check(c.sample_constant > 0.0, "sample_constant must be positive");
  check(c.ridge >= 0.0, "ridge must be >= 0");
  check(!c.out.empty(), "out must be a non-empty path");
  check(c.threads >= 0, "threads must be >= 0");
  for (double mu : c.mu_grid) check(mu >= 0.0 && mu < 1.0, "mu_grid values must lie in [0, 1)");
  check(c.k_max >= 1 && c.k_max <= 10, "k_max must lie in [1, 10]");
  check(c.trials >= 0, "trials must be >= 0");
  for (double e : c.eta_list) check(e > 0.0 && e < 1.0, "eta_list values must lie in (0, 1)");
  for (int n : c.n_list) check(n >= 1 && n <= 31 && n % 2 == 1, "n_list values must be odd and at most 31");
  check(c.blowup_delta > 0.0 && c.blowup_delta <= 1.0, "blowup_delta must lie in (0, 1]");
  check(0.0 < c.a && c.a < c.b && c.b < 1.0, "need 0 < a < b < 1");
  check(c.grid >= 2, "grid must be >= 2");
  check(c.seeds >= 1, "seeds must be >= 1");
  check(c.code_eta > 0.0 && c.code_eta < 1.0, "code_eta must lie in (0, 1)");
  check(c.rate > 0.0 && c.rate <= 1.0, "rate must lie in (0, 1]");
  check(c.sample_factor > 0.0, "sample_factor must be positive");
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["command"] = c.command;
  j["n"] = c.n;
  j["distribution"] = c.distribution;
  j["channel"] = c.channel;
  j["observable"] = c.observable;
  j["function"] = c.function;
  j["interval"] = c.interval;
  j["epsilon"] = c.epsilon;
  j["delta"] = c.delta;
  j["eta"] = c.eta_estimate ? Json("estimate") : (c.eta ? Json(*c.eta) : Json(nullptr));
  j["degree"] = c.degree ? Json(*c.degree) : Json(nullptr);
  j["samples"] = c.samples ? Json(*c.samples) : Json(nullptr);
  if (c.shots == "exact" || c.shots == "auto")
    j["shots"] = c.shots;
  else
    j["shots"] = std::stol(c.shots);
  j["sample_constant"] = c.sample_constant;
  j["ridge"] = c.ridge;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["threads"] = c.threads;
  j["mu_grid"] = c.mu_grid;
  j["k_max"] = c.k_max;
  j["trials"] = c.trials;
  j["eta_list"] = c.eta_list;
  j["n_list"] = c.n_list;
  j["blowup_delta"] = c.blowup_delta;
  j["a"] = c.a;
  j["b"] = c.b;
  j["grid"] = c.grid;
  j["seeds"] = c.seeds;
  j["code_eta"] = c.code_eta;
  j["rate"] = c.rate;
  j["sample_factor"] = c.sample_factor;
  j["d_max"] = c.d_max;
  j["mc_samples"] = c.mc_samples ? Json(*c.mc_samples) : Json(nullptr);
  return j;
}

RunResult run(const ExperimentConfig& cfg) {
  if (cfg.threads > 0) set_worker_threads(cfg.threads);
  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  require(!ec, ErrorCode::kIo, "cannot create output directory " + cfg.out + ": " + ec.message());
  if (cfg.command == "verify") return run_verify(cfg);
  if (cfg.command == "learn-quantum") return run_learn_quantum(cfg);
  if (cfg.command == "learn-classical") return run_learn_classical(cfg);
  if (cfg.command == "demo-majority") return run_demo_majority(cfg);
  if (cfg.command == "demo-code-lb") return run_demo_code_lb(cfg);
  if (cfg.command == "decay-scan") return run_decay_scan(cfg);
  throw Error(ErrorCode::kConfig, "unknown command '" + cfg.command + "'");
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::kIo, "cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    require(out.good(), ErrorCode::kIo, "write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  require(!ec, ErrorCode::kIo, "cannot rename " + tmp.string() + ": " + ec.message());
}

Json error_json(const Error& e) {
  return {{"error", std::string(error_code_name(e.code()))}, {"message", e.what()}};
}

}  // namespace bpl
