// Copyright 2026 The TBRM Simulator Authors
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

#include "tbrm/num_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "tbrm/direct_search.hpp"

namespace tbrm {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

void check_utilities(const RateRegion& region,
                     std::span<const UtilityEntry> utilities) {
  if (utilities.size() != region.num_users()) {
    throw std::invalid_argument(
        "expected " + std::to_string(region.num_users()) +
        " utility entries, got " + std::to_string(utilities.size()));
  }
  for (const UtilityEntry& u : utilities) {
    if (!std::isfinite(u.weight)) {
      throw std::invalid_argument("utility weights must be finite");
    }
  }
}

Allocation allocation_at(const RateRegion& region,
                         std::span<const UtilityEntry> utilities,
                         std::vector<double> angles) {
  Allocation a;
  a.rates.resize(region.num_users());
  region.map_angles(angles, a.rates);
  a.angles = std::move(angles);
  a.objective =
      num_objective(a.rates, utilities, reciprocal_rate_floor(region));
  return a;
}

}  // namespace

Allocation solve_num(const RateRegion& region,
                     std::span<const UtilityEntry> utilities) {
  check_utilities(region, utilities);
  const std::size_t dims = region.num_angles();

  const bool all_zero =
      std::all_of(utilities.begin(), utilities.end(),
                  [](const UtilityEntry& u) { return u.weight == 0.0; });
  if (all_zero || dims == 0) {
    Allocation a = allocation_at(region, utilities,
                                 std::vector<double>(dims, 0.0));
    a.degenerate = all_zero;
    a.evaluations = 1;
    return a;
  }

  const double floor = reciprocal_rate_floor(region);
  std::vector<double> rates(region.num_users());
  const BoxObjective objective = [&](std::span<const double> angles) {
    region.map_angles(angles, rates);
    return num_objective(rates, utilities, floor);
  };

  const std::vector<double> lower(dims, 0.0);
  const std::vector<double> upper(dims, kHalfPi);
  DirectSearchOptions options;
  options.global_evaluations = 500 * dims;
  BoxSearchResult found = maximize_in_box(objective, lower, upper, options);

  Allocation a = allocation_at(region, utilities, std::move(found.x));
  a.evaluations = found.evaluations;
  return a;
}

Allocation grid_oracle_solve(const RateRegion& region,
                             std::span<const UtilityEntry> utilities,
                             std::size_t steps) {
  check_utilities(region, utilities);
  if (region.num_users() > 4) {
    throw UnsupportedDimension("grid oracle supports at most 4 users, got " +
                               std::to_string(region.num_users()));
  }
  if (steps < 100) {
    throw std::invalid_argument("grid oracle needs at least 100 steps");
  }
  const std::size_t dims = region.num_angles();
  const double floor = reciprocal_rate_floor(region);
  const double h = kHalfPi / static_cast<double>(steps - 1);

  std::vector<std::size_t> index(dims, 0);
  std::vector<double> angles(dims, 0.0);
  std::vector<double> rates(region.num_users());
  std::vector<double> best_angles = angles;
  double best = -std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  while (true) {
    for (std::size_t i = 0; i < dims; ++i) {
      angles[i] = std::min(kHalfPi, h * static_cast<double>(index[i]));
    }
    region.map_angles(angles, rates);
    const double v = num_objective(rates, utilities, floor);
    ++evaluations;
    if (v > best) {
      best = v;
      best_angles = angles;
    }
    // Odometer increment; the last digit varies fastest.
    std::size_t d = dims;
    while (d > 0) {
      if (++index[d - 1] < steps) break;
      index[d - 1] = 0;
      --d;
    }
    if (d == 0) break;
  }
  Allocation a = allocation_at(region, utilities, std::move(best_angles));
  a.evaluations = evaluations;
  return a;
}

}  // namespace tbrm
