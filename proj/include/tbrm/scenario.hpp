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

// Scenario files.
//
// Flat "key = value" lines with '#' comments. Keys before the first
// "[user]" header apply to the whole run; each "[user]" section describes
// one flow. Rates are in Mbit/s.
//
//   name, tau, horizon, seed, warmup, scheduler, tbrm (on|off),
//   tbrm_mode (multiplicative|additive), additive_shape (linear|cubic),
//   gamma, cmax (default for users)
//
//   [user]
//   traffic          SAT | Sine2VS | Sine2F | SelfSimilar | Trace
//   rho_g, rho_M     required; [0, 0] means unconstrained
//   cmax, mean_rate, delay_bound, violation_prob, sigma_g_mult,
//   sigma_M_mult, trace (file, relative to the scenario), sources, shape,
//   mean_on, mean_off, period1, period2, amp1, amp2 (fractions of the mean)
//
// A JSON document with the same keys, users given as a "users" array, is
// accepted as well.

#ifndef TBRM_SCENARIO_HPP_
#define TBRM_SCENARIO_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

#include "tbrm/engine.hpp"

namespace tbrm {

class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

SimConfig parse_scenario(std::string_view text,
                         const std::string& source_name = "<scenario>",
                         const std::string& base_dir = ".");
SimConfig load_scenario(const std::string& path);

inline constexpr int kNumPresets = 5;
// Text of bundled scenario 1..5.
std::string_view preset_text(int index);
SimConfig load_preset(int index);

// A file path, or "scenario1" .. "scenario5" / "1" .. "5" for a preset.
SimConfig resolve_scenario(const std::string& name_or_path);

}  // namespace tbrm

#endif  // TBRM_SCENARIO_HPP_
