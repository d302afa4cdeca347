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

// bpl: command-line front end. Flags override config-file fields, which
// override built-in defaults.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bpl/cli.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  int threads = 0;
  std::optional<std::uint64_t> seed;
  std::vector<double> mu_grid;
  std::optional<int> k_max;
  std::optional<int> trials;
  std::vector<int> n_list;
  std::optional<double> delta;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<int> n;
  std::optional<int> degree;
  std::optional<int> d_max;
  std::optional<int> seeds;
};

bpl::Json load_config(const std::string& path) {
  std::ifstream in(path);
  bpl::require(in.good(), bpl::ErrorCode::kIo, "cannot open config " + path);
  try {
    return bpl::Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw bpl::Error(bpl::ErrorCode::kConfig, "invalid JSON in " + path + ": " + e.what());
  }
}

void add_common(CLI::App* cmd, Flags& f, bool config_required) {
  auto* opt = cmd->add_option("--config", f.config, "JSON config file");
  if (config_required) opt->required();
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--threads", f.threads, "worker threads (also BPL_THREADS)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", f.seed, "base seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biased Pauli learning: certificates, learners and demos"};
  app.set_version_flag("--version", std::string(bpl::kVersion));
  app.require_subcommand(1);
  Flags f;

  auto* verify = app.add_subcommand("verify", "certify the min-eigenvalue and op-norm bounds on grids");
  add_common(verify, f, false);
  verify->add_option("--mu-grid", f.mu_grid, "mu values");
  verify->add_option("--k-max", f.k_max, "largest tensor power");
  verify->add_option("--trials", f.trials, "random distributions per eta");

  auto* lq = app.add_subcommand("learn-quantum", "learn a channel observable on product states");
  add_common(lq, f, true);

  auto* lc = app.add_subcommand("learn-classical", "learn a bounded multilinear function");
  add_common(lc, f, true);

  auto* maj = app.add_subcommand("demo-majority", "truncated majority blowup scan");
  add_common(maj, f, false);
  maj->add_option("--n-list", f.n_list, "odd majority sizes");
  maj->add_option("--delta", f.delta, "truncation degree fraction");
  maj->add_option("--a", f.a, "scan interval start");
  maj->add_option("--b", f.b, "scan interval end");

  auto* code = app.add_subcommand("demo-code-lb", "regression on a code distribution vs a product distribution");
  add_common(code, f, false);
  code->add_option("--n", f.n, "code length");
  code->add_option("--degree", f.degree, "regression degree");
  code->add_option("--seeds", f.seeds, "number of seeds");

  auto* decay = app.add_subcommand("decay-scan", "truncation error against the decay bound for d = 0..d_max");
  add_common(decay, f, true);
  decay->add_option("--d-max", f.d_max, "largest truncation degree");

  CLI11_PARSE(app, argc, argv);

  try {
    const CLI::App* cmd = app.get_subcommands().front();
    bpl::Json doc = f.config.empty() ? bpl::Json::object() : load_config(f.config);
    bpl::require(doc.is_object(), bpl::ErrorCode::kConfig, "config must be a JSON object");
    if (doc.contains("command"))
      bpl::require(doc["command"] == cmd->get_name(), bpl::ErrorCode::kConfig,
                   "config command differs from the subcommand");
    doc["command"] = cmd->get_name();
    if (!f.out.empty()) doc["out"] = f.out;
    if (f.threads > 0) doc["threads"] = f.threads;
    if (f.seed) doc["seed"] = *f.seed;
    if (!f.mu_grid.empty()) doc["mu_grid"] = f.mu_grid;
    if (f.k_max) doc["k_max"] = *f.k_max;
    if (f.trials) doc["trials"] = *f.trials;
    if (!f.n_list.empty()) doc["n_list"] = f.n_list;
    if (f.delta) doc["blowup_delta"] = *f.delta;
    if (f.a) doc["a"] = *f.a;
    if (f.b) doc["b"] = *f.b;
    if (f.n) doc["n"] = *f.n;
    if (f.degree) doc["degree"] = *f.degree;
    if (f.seeds) doc["seeds"] = *f.seeds;
    if (f.d_max) doc["d_max"] = *f.d_max;

    bpl::ExperimentConfig cfg = bpl::config_from_json(doc);
    if (!f.config.empty()) cfg.base_dir = std::filesystem::path(f.config).parent_path();
    const bpl::RunResult res = bpl::run(cfg);
    std::cout << res.summary << "\n";
    return res.exit_code;
  } catch (const bpl::Error& e) {
    std::cout << bpl::error_json(e).dump() << "\n";
    return e.code() == bpl::ErrorCode::kConfig ? 2 : 1;
  } catch (const std::exception& e) {
    std::cout << bpl::Json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}
