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

// Helpers for rank-n tensors of side `Side` stored flat with site 0 as the most
// significant digit: index = sum_i digit_i * Side^(n-1-i).

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace bpl::detail {

inline std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// t <- (I x ... x A x ... x I) t with A (Side x Side) acting on digit `site`.
// A is indexed a(out, in).
template <std::size_t Side, class T, class Map>
void apply_site_map(std::vector<T>& t, int n, int site, const Map& a) {
  const std::size_t stride = ipow(Side, n - 1 - site);
  const std::size_t outer = ipow(Side, site);
  std::array<T, Side> in{};
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t base = o * Side * stride;
    for (std::size_t j = 0; j < stride; ++j) {
      for (std::size_t q = 0; q < Side; ++q) in[q] = t[base + q * stride + j];
      for (std::size_t p = 0; p < Side; ++p) {
        T acc{};
        for (std::size_t q = 0; q < Side; ++q) acc += a(p, q) * in[q];
        t[base + p * stride + j] = acc;
      }
    }
  }
}

// Contracts the leading digit with v: out[rest] = sum_l v[l] t[l * stride + rest].
template <std::size_t Side, class T, class V>
void contract_leading(std::span<const T> t, const V& v, std::vector<T>& out) {
  const std::size_t stride = t.size() / Side;
  out.assign(stride, T{});
  for (std::size_t l = 0; l < Side; ++l) {
    const T vl = v[l];
    if (vl == T{}) continue;
    const T* src = t.data() + l * stride;
    for (std::size_t r = 0; r < stride; ++r) out[r] += vl * src[r];
  }
}

// Full contraction of t with one vector per site, site 0 first.
template <std::size_t Side, class T, class V>
T contract_all(const std::vector<T>& t, std::span<const V> site_vectors) {
  std::vector<T> cur = t;
  std::vector<T> next;
  for (const auto& v : site_vectors) {
    contract_leading<Side, T>(std::span<const T>(cur), v, next);
    cur.swap(next);
  }
  return cur.empty() ? T{} : cur[0];
}

}  // namespace bpl::detail
