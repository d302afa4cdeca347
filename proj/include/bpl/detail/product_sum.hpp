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

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "bpl/common.hpp"
#include "bpl/detail/parallel.hpp"
#include "bpl/detail/site_tensor.hpp"

namespace bpl::detail {

// A product distribution seen through a multilinear feature map: site i has
// atoms with weights and a Side-vector of basis values per atom.
template <std::size_t Side>
struct SiteTable {
  std::vector<std::array<double, Side>> values;
  std::vector<double> weights;
};

template <std::size_t Side>
double support_size(std::span<const SiteTable<Side>> sites) {
  double total = 1.0;
  for (const auto& s : sites) total *= static_cast<double>(s.weights.size());
  return total;
}

template <std::size_t Side>
void enumerate_squares(std::span<const SiteTable<Side>> sites, std::size_t depth,
                       const std::vector<double>& stage, double weight,
                       std::vector<std::vector<double>>& buffers, double& acc) {
  if (depth == sites.size()) {
    acc += weight * stage[0] * stage[0];
    return;
  }
  const auto& site = sites[depth];
  for (std::size_t a = 0; a < site.weights.size(); ++a) {
    if (site.weights[a] == 0.0) continue;
    contract_leading<Side, double>(std::span<const double>(stage), site.values[a], buffers[depth]);
    enumerate_squares<Side>(sites, depth + 1, buffers[depth], weight * site.weights[a], buffers, acc);
  }
}

// Exact E[(sum_w coeffs_w prod_i values_i(w_i))^2] over the product of the
// site distributions, by enumeration of all atom tuples.
template <std::size_t Side>
double expected_square_by_enumeration(const std::vector<double>& coeffs,
                                      std::span<const SiteTable<Side>> sites) {
  const auto& first = sites[0];
  std::vector<double> partial(first.weights.size(), 0.0);
  parallel_chunks(first.weights.size(), [&](std::size_t a) {
    if (first.weights[a] == 0.0) return;
    std::vector<std::vector<double>> buffers(sites.size());
    contract_leading<Side, double>(std::span<const double>(coeffs), first.values[a], buffers[0]);
    std::vector<double> stage = buffers[0];
    double acc = 0.0;
    enumerate_squares<Side>(sites, 1, stage, first.weights[a], buffers, acc);
    partial[a] = acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

struct MonteCarloResult {
  double mean = 0.0;
  double std_error = 0.0;
};

template <std::size_t Side>
MonteCarloResult expected_square_by_sampling(const std::vector<double>& coeffs,
                                             std::span<const SiteTable<Side>> sites,
                                             std::size_t samples, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0x5eed);
  std::vector<std::discrete_distribution<std::size_t>> pickers;
  for (const auto& s : sites) pickers.emplace_back(s.weights.begin(), s.weights.end());
  double sum = 0.0;
  double sum_sq = 0.0;
  std::vector<std::array<double, Side>> chosen(sites.size());
  for (std::size_t k = 0; k < samples; ++k) {
    for (std::size_t i = 0; i < sites.size(); ++i) chosen[i] = sites[i].values[pickers[i](rng)];
    const double v = contract_all<Side, double, std::array<double, Side>>(
        coeffs, std::span<const std::array<double, Side>>(chosen));
    const double sq = v * v;
    sum += sq;
    sum_sq += sq * sq;
  }
  MonteCarloResult out;
  const double n = static_cast<double>(samples);
  out.mean = sum / n;
  const double var = samples > 1 ? std::max(0.0, (sum_sq - n * out.mean * out.mean) / (n - 1)) : 0.0;
  out.std_error = std::sqrt(var / n);
  return out;
}

}  // namespace bpl::detail
