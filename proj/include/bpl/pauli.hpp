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

#include "bpl/common.hpp"

namespace bpl {

// Letters are indexed I = 0, X = 1, Y = 2, Z = 3 throughout.
inline constexpr int kNumLetters = 4;

inline const Mat2c& pauli(int letter) {
  static const Mat2c kPaulis[4] = {
      (Mat2c() << 1, 0, 0, 1).finished(),
      (Mat2c() << 0, 1, 1, 0).finished(),
      (Mat2c() << 0, cplx(0, -1), cplx(0, 1), 0).finished(),
      (Mat2c() << 1, 0, 0, -1).finished(),
  };
  return kPaulis[letter];
}

inline char letter_char(int letter) { return "IXYZ"[letter]; }

/// Single-qubit density matrix (I + alpha . sigma)/2.
inline Mat2c bloch_density(const Vec3& alpha) {
  return 0.5 * (pauli(0) + alpha.x() * pauli(1) + alpha.y() * pauli(2) +
                alpha.z() * pauli(3));
}

}  // namespace bpl
