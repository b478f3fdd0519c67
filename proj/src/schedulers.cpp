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

#include "tbrm/schedulers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tbrm {

std::string_view to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::kMW:
      return "MW";
    case SchedulerKind::kMLWDF:
      return "MLWDF";
    case SchedulerKind::kEXPPF:
      return "EXPPF";
    case SchedulerKind::kMDU:
      return "MDU";
    case SchedulerKind::kMD:
      return "MD";
    case SchedulerKind::kMDV:
      return "MDV";
  }
  return "?";
}

SchedulerKind parse_scheduler(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c == '-' || c == '/') continue;
    key.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  for (SchedulerKind kind : kAllSchedulers) {
    if (key == to_string(kind)) return kind;
  }
  throw std::invalid_argument("unknown scheduler '" + std::string(name) + "'");
}

UtilityForm utility_form(SchedulerKind kind) {
  return (kind == SchedulerKind::kMD || kind == SchedulerKind::kMDV)
             ? UtilityForm::kReciprocal
             : UtilityForm::kLinear;
}

double delay_priority(const FlowObservables& obs) {
  return -std::log(obs.violation_prob) / obs.delay_bound;
}

double mw_weight(const FlowObservables& obs) { return obs.queue_bits; }

double mlwdf_weight(const FlowObservables& obs) {
  return delay_priority(obs) * obs.hol_delay / obs.avg_rate;
}

std::vector<double> exppf_weights(std::span<const FlowObservables> all_obs) {
  std::vector<double> weights(all_obs.size());
  if (all_obs.empty()) return weights;
  double chi = 0.0;
  for (const FlowObservables& obs : all_obs) {
    chi += delay_priority(obs) * obs.hol_delay;
  }
  chi /= static_cast<double>(all_obs.size());
  const double scale = 1.0 + std::sqrt(chi);
  for (std::size_t n = 0; n < all_obs.size(); ++n) {
    const FlowObservables& obs = all_obs[n];
    weights[n] =
        std::exp((delay_priority(obs) * obs.hol_delay - chi) / scale) /
        obs.avg_rate;
  }
  return weights;
}

double md_weight(const FlowObservables& obs) { return obs.queue_bits; }

double mdv_weight(const FlowObservables& obs) {
  return obs.queue_bits /
         std::max(obs.delay_bound - obs.hol_delay, kMdvMinSlack);
}

double SigmoidDelayUtility::value(double waiting) const {
  return 1.0 / (1.0 + std::exp(steepness * (waiting - delay_bound)));
}

double SigmoidDelayUtility::derivative(double waiting) const {
  // -a s (1 - s) written with exp(-|z|) so it cannot overflow.
  const double e = std::exp(-std::abs(steepness * (waiting - delay_bound)));
  return -steepness * e / ((1.0 + e) * (1.0 + e));
}

double mdu_weight(const FlowObservables& obs,
                  const std::function<double(double)>& utility_derivative) {
  return std::abs(utility_derivative(obs.avg_waiting)) / obs.avg_arrival_rate;
}

double mdu_weight(const FlowObservables& obs) {
  const SigmoidDelayUtility u = SigmoidDelayUtility::for_bound(obs.delay_bound);
  return std::abs(u.derivative(obs.avg_waiting)) / obs.avg_arrival_rate;
}

std::vector<double> base_weights(SchedulerKind kind,
                                 std::span<const FlowObservables> all_obs) {
  if (kind == SchedulerKind::kEXPPF) return exppf_weights(all_obs);
  std::vector<double> weights(all_obs.size());
  for (std::size_t n = 0; n < all_obs.size(); ++n) {
    const FlowObservables& obs = all_obs[n];
    switch (kind) {
      case SchedulerKind::kMW:
        weights[n] = mw_weight(obs);
        break;
      case SchedulerKind::kMLWDF:
        weights[n] = mlwdf_weight(obs);
        break;
      case SchedulerKind::kMDU:
        weights[n] = mdu_weight(obs);
        break;
      case SchedulerKind::kMD:
        weights[n] = md_weight(obs);
        break;
      case SchedulerKind::kMDV:
        weights[n] = mdv_weight(obs);
        break;
      case SchedulerKind::kEXPPF:
        break;
    }
  }
  return weights;
}

}  // namespace tbrm
