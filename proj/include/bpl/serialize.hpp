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

// JSON specs for distributions, channels, observables and functions, and JSON
// encodings of learned hypotheses. Complex entries are [re, im] pairs and
// matrices are flattened row-major.

#include <filesystem>
#include <string>

#include "bpl/bloch.hpp"
#include "bpl/classical_fourier.hpp"
#include "bpl/learner.hpp"
#include "bpl/qsim.hpp"
#include "json.hpp"

namespace bpl {

using Json = nlohmann::ordered_json;

/// {"type": "atoms" | "two_point" | "uniform_sphere" | "pauli_eigenstates" |
///  "bernoulli_axis" | "random", ...}.
BlochDistribution distribution_from_json(const Json& spec);
Json distribution_to_json(const BlochDistribution& d);
/// A single spec repeated on n sites, or {"sites": [spec, ...]}.
ProductDistribution product_distribution_from_json(const Json& spec, int n);

/// {"type": "identity" | "depolarizing" | "random" | "file", ...}; relative
/// file paths resolve against base_dir.
KrausChannel channel_from_json(const Json& spec, int n, const std::filesystem::path& base_dir = {});
/// {"n": int, "kraus": [[[re, im], ...], ...]}.
KrausChannel channel_from_file_json(const Json& doc);
Json channel_to_json(const KrausChannel& e);

/// {"pauli": "ZI" | [...], "coeff": x | [...]}, {"type": "random", "seed": s},
/// {"file": path} or an inline {"n": int, "matrix": [...]}.
Operator observable_from_json(const Json& spec, int n, const std::filesystem::path& base_dir = {});
Json operator_to_json(const Operator& o);

/// {"atoms": [...], "weights": [...]} with weights optional (uniform).
IntervalDistribution interval_distribution_from_json(const Json& spec);
/// {"type": "majority", "n": int} or {"type": "monomials", "n": int,
///  "terms": [{"subset": [i, ...], "coeff": x}, ...]}.
MultilinearFunction function_from_json(const Json& spec);

Json complex_matrix_to_json(const MatXc& m);
MatXc complex_matrix_from_json(const Json& flat, Eigen::Index rows, Eigen::Index cols);

Json hypothesis_to_json(const Hypothesis& h);
Json classical_hypothesis_to_json(const ClassicalHypothesis& h);
Json learn_report_to_json(const LearnReport& r);
Json classical_report_to_json(const ClassicalLearnReport& r);

}  // namespace bpl
