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

// Conformance of a recorded rate trace to [rho_g, rho_M].
//
//   m1  fraction of slots a token bucket with burst rho*tau*x would mark
//       non-conforming. The excess bucket e <- max(0, e + (C - rho_M) tau)
//       flags a slot when e > rho_M tau x; the deficit bucket mirrors it.
//   m2  mean excess (bits) per window of G slots beyond rho*G*tau.
//   m3  mean length, in windows, of runs of windows with m2 excess > 0.
//
// A disabled bound reports 0 with its flag set.

#ifndef TBRM_METRICS_HPP_
#define TBRM_METRICS_HPP_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "tbrm/rate_modifier.hpp"

namespace tbrm {

class EmptyReport : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CapacityTrace {
  std::vector<double> rates;  // bit/s
  double tau = 0.05;
  RateConstraint constraint;
};

struct BoundPair {
  double max = 0.0;  // maximal-rate bound
  double min = 0.0;  // guaranteed-rate bound
  bool max_disabled = false;
  bool min_disabled = false;
};

// Throws std::invalid_argument for x <= 0.
BoundPair m1(const CapacityTrace& trace, double x);
// Throw EmptyReport if the trace holds fewer than G slots.
BoundPair m2(const CapacityTrace& trace, std::size_t window);
BoundPair m3(const CapacityTrace& trace, std::size_t window);

// Mean length of maximal runs of true values; 0 without any.
double mean_run_length(const std::vector<bool>& flags);

struct MetricGrids {
  std::vector<double> x_max;        // 1 .. 10 step 0.5
  std::vector<double> x_min;        // 0.05 .. 1 step 0.05
  std::vector<std::size_t> windows;  // 1 .. 40

  static MetricGrids defaults();
};

// All metrics for one user over its grids.
struct MetricsReport {
  bool max_disabled = false;
  bool min_disabled = false;
  std::vector<double> m1_max, m1_min;  // per x
  std::vector<double> m2_max, m2_min;  // per window size
  std::vector<double> m3_max, m3_min;
};

// Drops the first `warmup` slots, then evaluates every grid point. Window
// sizes longer than the remaining trace are reported as 0.
MetricsReport compute_report(const CapacityTrace& trace,
                             const MetricGrids& grids, std::size_t warmup);

}  // namespace tbrm

#endif  // TBRM_METRICS_HPP_
