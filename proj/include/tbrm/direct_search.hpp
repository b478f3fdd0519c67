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

// Derivative-free maximization over a box.
//
// The global phase is the locally biased DIviding RECTangles scheme
// (Gablonsky and Kelley): the box is rescaled to the unit cube, rectangles
// are grouped by their longest side, and in every iteration at most one
// rectangle per group (the best one) is trisected if it lies on the lower
// convex hull of (size, value). The local phase is a compass search that
// polls +/- step along each coordinate, keeps the step on success and
// halves it on failure.
//
// Both phases are deterministic: ties go to the earliest evaluated point.

#ifndef TBRM_DIRECT_SEARCH_HPP_
#define TBRM_DIRECT_SEARCH_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tbrm {

using BoxObjective = std::function<double(std::span<const double>)>;

struct DirectSearchOptions {
  // Hard cap on objective evaluations in the global phase.
  std::size_t global_evaluations = 500;
  // Jones' epsilon in the potential-optimality test.
  double hull_epsilon = 1e-4;
  std::size_t local_iterations = 200;
  // The local phase stops after an improving poll whose relative gain is
  // below this.
  double local_relative_tolerance = 1e-6;
  // ... or when the compass step (in unit-cube coordinates) drops below.
  double local_min_step = 1e-9;
};

struct BoxSearchResult {
  std::vector<double> x;  // in the caller's coordinates
  double value = 0.0;
  std::size_t evaluations = 0;
  std::size_t local_iterations = 0;
  // Longest side, in unit-cube coordinates, of the rectangle around `x`
  // when it came from the global phase.
  double cell_size = 1.0;
};

// Global phase only.
BoxSearchResult direct_l_maximize(const BoxObjective& f,
                                  std::span<const double> lower,
                                  std::span<const double> upper,
                                  const DirectSearchOptions& options);

// Local phase only, starting at `start` with an initial step expressed as a
// fraction of each box side.
BoxSearchResult compass_maximize(const BoxObjective& f,
                                 std::span<const double> lower,
                                 std::span<const double> upper,
                                 std::span<const double> start,
                                 double initial_step,
                                 const DirectSearchOptions& options);

// Global phase followed by local refinement from the best global point.
BoxSearchResult maximize_in_box(const BoxObjective& f,
                                std::span<const double> lower,
                                std::span<const double> upper,
                                const DirectSearchOptions& options);

}  // namespace tbrm

#endif  // TBRM_DIRECT_SEARCH_HPP_
