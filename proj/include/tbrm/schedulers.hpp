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

// Base weights of the utility-based cross-layer schedulers.
//
//   MW      w = Q                                       linear
//   M-LWDF  w = alpha * HOL / Rbar                      linear
//   EXP/PF  w = exp((alpha*HOL - chi) / (1 + sqrt(chi))) / Rbar
//           chi = mean over users of alpha * HOL         linear
//   MDU     w = |u'(Ubar)| / lambdabar                  linear
//   MD      w = Q                                       reciprocal
//   MDV     w = Q / max(T - HOL, 1 ms)                  reciprocal
//
// with alpha = -ln(eps) / T for delay bound T and violation probability eps.

#ifndef TBRM_SCHEDULERS_HPP_
#define TBRM_SCHEDULERS_HPP_

#include <array>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "tbrm/rate_region.hpp"

namespace tbrm {

// Snapshot of what a scheduler may look at for one flow.
struct FlowObservables {
  double queue_bits = 0.0;        // Q (bits)
  double hol_delay = 0.0;         // head-of-line delay (s)
  double avg_rate = 1.0;          // smoothed assigned rate (bit/s)
  double avg_waiting = 0.0;       // smoothed waiting time (s)
  double avg_arrival_rate = 1.0;  // smoothed arrival rate (bit/s)
  double delay_bound = 0.5;       // T (s)
  double violation_prob = 0.05;   // eps in (0, 1)
};

enum class SchedulerKind { kMW, kMLWDF, kEXPPF, kMDU, kMD, kMDV };

inline constexpr std::array<SchedulerKind, 6> kAllSchedulers = {
    SchedulerKind::kMW,  SchedulerKind::kMLWDF, SchedulerKind::kEXPPF,
    SchedulerKind::kMDU, SchedulerKind::kMD,    SchedulerKind::kMDV};

std::string_view to_string(SchedulerKind kind);
// Accepts the names printed by to_string, case-insensitively, plus
// "M-LWDF" and "EXP/PF". Throws std::invalid_argument otherwise.
SchedulerKind parse_scheduler(std::string_view name);

UtilityForm utility_form(SchedulerKind kind);

// -ln(eps) / T.
double delay_priority(const FlowObservables& obs);

double mw_weight(const FlowObservables& obs);
double mlwdf_weight(const FlowObservables& obs);
std::vector<double> exppf_weights(std::span<const FlowObservables> all_obs);
double md_weight(const FlowObservables& obs);

// Slack below which MDV stops growing: 1 ms.
inline constexpr double kMdvMinSlack = 1e-3;
double mdv_weight(const FlowObservables& obs);

// Delay utility of a traffic class, u(U) = 1 / (1 + exp(a (U - T))): close
// to 1 while the average wait U is well below the bound T and falling to 0
// past it.
struct SigmoidDelayUtility {
  double steepness;
  double delay_bound;

  // a = 10 / T.
  static SigmoidDelayUtility for_bound(double delay_bound) {
    return {10.0 / delay_bound, delay_bound};
  }
  double value(double waiting) const;
  double derivative(double waiting) const;
};

double mdu_weight(const FlowObservables& obs,
                  const std::function<double(double)>& utility_derivative);
// Uses SigmoidDelayUtility::for_bound(obs.delay_bound).
double mdu_weight(const FlowObservables& obs);

// Weights of all users for one slot.
std::vector<double> base_weights(SchedulerKind kind,
                                 std::span<const FlowObservables> all_obs);

}  // namespace tbrm

#endif  // TBRM_SCHEDULERS_HPP_
