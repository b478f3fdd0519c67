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

#ifndef TBRM_NUM_SOLVER_HPP_
#define TBRM_NUM_SOLVER_HPP_

#include <cstddef>
#include <span>
#include <stdexcept>

#include "tbrm/rate_region.hpp"

namespace tbrm {

class UnsupportedDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Maximizes the weighted utility sum over the region: a DIRECT-L sweep of
// the angle box with 500 * (N - 1) evaluations, then compass refinement
// (at most 200 polls, stopping once a poll gains less than 1e-6 relative).
//
// When every weight is zero the all-zero angle vector is returned with
// objective 0 and `degenerate` set.
Allocation solve_num(const RateRegion& region,
                     std::span<const UtilityEntry> utilities);

// Exhaustive search over `steps` equally spaced angles per dimension
// (endpoints included). For validating solve_num; supports N <= 4.
Allocation grid_oracle_solve(const RateRegion& region,
                             std::span<const UtilityEntry> utilities,
                             std::size_t steps);

}  // namespace tbrm

#endif  // TBRM_NUM_SOLVER_HPP_
