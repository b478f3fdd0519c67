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

// Slotted simulation loop. Each slot t:
//
//   1. apply the rates requested at the end of slot t-1 and serve the
//      queues FIFO (floor(C tau) bits at most);
//   2. enqueue the slot's arrivals (servable from t+1);
//   3. update the smoothed observables and the token counters with C(t);
//   4. compute base weights, then effective weights;
//   5. solve the NUM for the rates of slot t+1.
//
// No request precedes slot 0, so C(0) = 0.

#ifndef TBRM_ENGINE_HPP_
#define TBRM_ENGINE_HPP_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tbrm/rate_modifier.hpp"
#include "tbrm/rate_region.hpp"
#include "tbrm/schedulers.hpp"
#include "tbrm/traffic.hpp"

namespace tbrm {

inline constexpr double kSmoothing = 0.05;

struct UserConfig {
  TrafficSpec traffic;
  double rho_g = 0.0;  // bit/s, 0 disables
  double rho_M = 0.0;  // bit/s, >= cmax disables
  double delay_bound = 0.5;
  double violation_prob = 0.05;
  double sigma_g_mult = 5.0;  // sigma_g = mult * tau * rho_g
  double sigma_M_mult = 5.0;
};

struct SimConfig {
  std::string name;
  double tau = 0.05;
  std::size_t horizon = 12000;
  SchedulerKind scheduler = SchedulerKind::kMW;
  bool tbrm_enabled = true;
  ModifierMode tbrm_mode = ModifierMode::kMultiplicative;
  AdditiveShape additive_shape = AdditiveShape::kLinear;
  RateRegion region{{1.0}, 0.0};
  std::vector<UserConfig> users;
  std::uint64_t seed = 1;
  std::size_t warmup = 20;
  // Non-fatal notes collected while loading.
  std::vector<std::string> warnings;

  std::size_t num_users() const { return users.size(); }
  RateConstraint constraint(std::size_t user) const;
};

// Throws std::invalid_argument naming the offending field.
void validate(const SimConfig& config);

struct SlotRecord {
  std::int64_t slot = 0;
  std::vector<double> rate;         // C(t), bit/s
  std::vector<std::int64_t> served;       // D(t), bits
  std::vector<std::int64_t> arrivals;     // A(t), bits
  std::vector<std::int64_t> queue_start;  // Q(t)
  std::vector<std::int64_t> queue;        // Q(t+1)
  std::vector<double> hol;          // s, after arrivals
  std::vector<double> base_weight;
  std::vector<double> eff_weight;
  std::vector<double> k_g;
  std::vector<double> k_M;
  bool degenerate = false;
};

struct Packet {
  std::int64_t arrival_slot;
  std::int64_t bits;
};

struct FlowState {
  std::deque<Packet> fifo;
  std::int64_t queue_bits = 0;
  double arrival_carry = 0.0;  // fractional bits not yet admitted
  FlowObservables obs;
  std::int64_t total_arrivals = 0;
  std::int64_t total_departures = 0;
};

class Simulation {
 public:
  explicit Simulation(const SimConfig& config);
  ~Simulation();
  Simulation(Simulation&&) noexcept;
  Simulation& operator=(Simulation&&) noexcept;

  // Advances one slot. `extra_arrivals` (bits per user, may be empty) is
  // added to the generated arrivals of this slot.
  SlotRecord step(std::span<const double> extra_arrivals = {});

  std::int64_t slot() const { return slot_; }
  const SimConfig& config() const { return config_; }
  const FlowState& flow(std::size_t user) const { return flows_[user]; }
  // Rates to be applied in the next slot.
  std::span<const double> pending_rates() const { return pending_; }

 private:
  SimConfig config_;
  std::vector<FlowState> flows_;
  std::vector<ArrivalProcess> sources_;
  std::unique_ptr<RateModifier> modifier_;
  std::vector<double> pending_;
  std::vector<UtilityEntry> utilities_;
  std::vector<FlowObservables> obs_scratch_;
  std::vector<double> eff_scratch_;
  std::int64_t slot_ = 0;
};

// config.horizon slots.
std::vector<SlotRecord> run(const SimConfig& config);

}  // namespace tbrm

#endif  // TBRM_ENGINE_HPP_
