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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bpl {

inline constexpr std::string_view kVersion = "0.1.0";

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat3c = Eigen::Matrix3cd;
using Mat2c = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4d;
using Mat4c = Eigen::Matrix4cd;
using MatX = Eigen::MatrixXd;
using MatXc = Eigen::MatrixXcd;
using VecX = Eigen::VectorXd;
using VecXc = Eigen::VectorXcd;

using Rng = std::mt19937_64;

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kDegenerateDistribution,
  kGuardExceeded,
  kRankDeficient,
  kConfig,
  kIo,
  kUnreachable,
};

std::string_view error_code_name(ErrorCode code);

/// Library error. The code is stable and is what the CLI reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

/// Seeds an independent stream from (seed, stream) with splitmix64 mixing,
/// so per-task streams do not depend on scheduling.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

// Worker count for the parallel helpers. Defaults to BPL_THREADS or 1.
int worker_threads();
void set_worker_threads(int threads);

}  // namespace bpl
