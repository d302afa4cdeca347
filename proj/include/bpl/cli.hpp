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

// Experiment configuration and command execution behind the bpl executable.
// Precedence is flags > config file > defaults; the executable merges the
// three JSON layers before calling config_from_json.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bpl/serialize.hpp"

namespace bpl {

inline constexpr const char* kCommands[] = {"verify",       "learn-quantum", "learn-classical",
                                            "demo-majority", "demo-code-lb", "decay-scan"};

struct ExperimentConfig {
  std::string command;
  int n = 3;
  Json distribution = {{"type", "random"}, {"seed", 0}, {"max_second_moment", 0.8}};
  Json channel = {{"type", "identity"}};
  /// Null means Z on qubit 0.
  Json observable;
  Json function = {{"type", "majority"}, {"n", 7}};
  Json interval = {{"atoms", {-0.8, 0.8}}};
  double epsilon = 0.05;
  double delta = 0.1;
  /// Unset with eta_estimate = false means "derive from the distribution".
  std::optional<double> eta;
  bool eta_estimate = false;
  std::optional<int> degree;
  std::optional<std::size_t> samples;
  /// "exact", "auto" or a positive integer.
  std::string shots = "10000";
  double sample_constant = 10.0;
  double ridge = 1e-8;
  std::uint64_t seed = 0;
  std::string out = "bpl_out";
  int threads = 0;

  std::vector<double> mu_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  int k_max = 8;
  int trials = 1000;
  std::vector<double> eta_list = {0.1, 0.3, 0.5};

  std::vector<int> n_list = {15, 21, 25};
  double blowup_delta = 0.2;
  double a = 0.3;
  double b = 0.7;
  int grid = 2001;

  int seeds = 5;
  double code_eta = 0.1;
  double rate = 0.1;
  double sample_factor = 8.0;

  /// Negative means n.
  int d_max = -1;
  std::optional<std::size_t> mc_samples;

  /// Directory that relative file paths in specs resolve against.
  std::filesystem::path base_dir;
};

/// Validates every field and range; unknown fields throw kConfig.
ExperimentConfig config_from_json(const Json& doc);
/// The fully resolved config, as embedded in artifacts.
Json config_to_json(const ExperimentConfig& cfg);

struct RunResult {
  std::string summary;
  std::vector<std::filesystem::path> artifacts;
  int exit_code = 0;
};

RunResult run(const ExperimentConfig& cfg);

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// {"error": code name, "message": text}.
Json error_json(const Error& e);

}  // namespace bpl
