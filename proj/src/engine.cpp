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

#include "tbrm/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tbrm/num_solver.hpp"

namespace tbrm {
namespace {

constexpr double kMinSmoothed = 1.0;    // bit/s floor for Rbar, lambdabar
constexpr double kInitialRateFraction = 0.01;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Scales weights into [-1, 1] for the solver; the argmax does not depend
// on a positive factor and this keeps exp() blow-ups finite.
void normalize_for_solver(std::span<const double> eff,
                          std::vector<UtilityEntry>& out) {
  constexpr double kMax = std::numeric_limits<double>::max();
  double largest = 0.0;
  for (double w : eff) {
    largest = std::max(largest, std::min(std::abs(w), kMax));
  }
  for (std::size_t n = 0; n < eff.size(); ++n) {
    const double w = std::clamp(eff[n], -kMax, kMax);
    out[n].weight = largest > 0.0 ? w / largest : 0.0;
  }
}

}  // namespace

RateConstraint SimConfig::constraint(std::size_t user) const {
  return {users[user].rho_g, users[user].rho_M, region.cmax(user)};
}

void validate(const SimConfig& config) {
  require(config.tau > 0.0 && std::isfinite(config.tau), "tau must be > 0");
  require(!config.users.empty(), "at least one user is required");
  require(config.users.size() == config.region.num_users(),
          "region has " + std::to_string(config.region.num_users()) +
              " capacities for " + std::to_string(config.users.size()) +
              " users");
  for (std::size_t n = 0; n < config.users.size(); ++n) {
    const UserConfig& u = config.users[n];
    const std::string who = "user " + std::to_string(n + 1) + ": ";
    try {
      validate(config.constraint(n));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(who + e.what());
    }
    require(u.delay_bound > 0.0 && std::isfinite(u.delay_bound),
            who + "delay_bound must be > 0");
    require(u.violation_prob > 0.0 && u.violation_prob < 1.0,
            who + "violation_prob must be in (0, 1)");
    require(u.sigma_g_mult > 0.0 && u.sigma_M_mult > 0.0,
            who + "sigma multipliers must be > 0");
  }
}

Simulation::Simulation(const SimConfig& config) : config_(config) {
  validate(config_);
  const std::size_t n_users = config_.num_users();
  const RateRegion& region = config_.region;
  std::vector<RateConstraint> constraints;
  std::vector<TokenState> tokens;
  flows_.resize(n_users);
  sources_.reserve(n_users);
  for (std::size_t n = 0; n < n_users; ++n) {
    const UserConfig& u = config_.users[n];
    TrafficSpec spec = u.traffic;
    spec.seed = mix_seed(config_.seed ^ mix_seed(n + 1));
    sources_.emplace_back(spec, region.cmax(n), config_.tau, config_.horizon);

    FlowObservables& obs = flows_[n].obs;
    obs.avg_rate = kInitialRateFraction * region.cmax(n);
    obs.avg_arrival_rate = kInitialRateFraction * region.cmax(n);
    obs.delay_bound = u.delay_bound;
    obs.violation_prob = u.violation_prob;

    constraints.push_back(config_.constraint(n));
    tokens.push_back(TokenState::for_constraint(
        constraints.back(), config_.tau, u.sigma_g_mult, u.sigma_M_mult));
  }
  modifier_ = std::make_unique<RateModifier>(
      std::move(constraints), std::move(tokens), config_.tau,
      config_.tbrm_mode, config_.additive_shape);
  pending_.assign(n_users, 0.0);
  utilities_.assign(n_users, {utility_form(config_.scheduler), 0.0});
  obs_scratch_.resize(n_users);
  eff_scratch_.resize(n_users);
}

Simulation::~Simulation() = default;
Simulation::Simulation(Simulation&&) noexcept = default;
Simulation& Simulation::operator=(Simulation&&) noexcept = default;

SlotRecord Simulation::step(std::span<const double> extra_arrivals) {
  const std::size_t n_users = flows_.size();
  if (!extra_arrivals.empty() && extra_arrivals.size() != n_users) {
    throw std::invalid_argument("extra arrivals: one entry per user");
  }
  const double tau = config_.tau;
  const std::int64_t t = slot_;

  SlotRecord rec;
  rec.slot = t;
  rec.rate = pending_;
  rec.served.resize(n_users);
  rec.arrivals.resize(n_users);
  rec.queue_start.resize(n_users);
  rec.queue.resize(n_users);
  rec.hol.resize(n_users);
  rec.k_g.assign(n_users, 0.0);
  rec.k_M.assign(n_users, 0.0);

  for (std::size_t n = 0; n < n_users; ++n) {
    FlowState& f = flows_[n];
    rec.queue_start[n] = f.queue_bits;

    // Service.
    const auto budget =
        static_cast<std::int64_t>(std::floor(rec.rate[n] * tau));
    std::int64_t left = std::min(budget, f.queue_bits);
    const std::int64_t served = left;
    double waiting_sample = -1.0;
    while (left > 0) {
      Packet& head = f.fifo.front();
      if (head.bits <= left) {
        left -= head.bits;
        waiting_sample = static_cast<double>(t - head.arrival_slot) * tau;
        f.fifo.pop_front();
      } else {
        head.bits -= left;
        left = 0;
      }
    }
    f.queue_bits -= served;
    f.total_departures += served;
    rec.served[n] = served;

    // Arrivals, admitted as whole bits.
    double offered = sources_[n].arrivals(t, static_cast<double>(f.queue_bits));
    if (!extra_arrivals.empty()) offered += extra_arrivals[n];
    const double with_carry = std::max(0.0, offered) + f.arrival_carry;
    const double whole = std::floor(with_carry);
    f.arrival_carry = with_carry - whole;
    const auto admitted = static_cast<std::int64_t>(whole);
    if (admitted > 0) {
      f.fifo.push_back({t, admitted});
      f.queue_bits += admitted;
      f.total_arrivals += admitted;
    }
    rec.arrivals[n] = admitted;
    rec.queue[n] = f.queue_bits;

    // Observables as seen at the end of the slot.
    FlowObservables& obs = f.obs;
    const double hol =
        f.fifo.empty()
            ? 0.0
            : static_cast<double>(t - f.fifo.front().arrival_slot) * tau;
    if (waiting_sample < 0.0) waiting_sample = obs.hol_delay;
    obs.queue_bits = static_cast<double>(f.queue_bits);
    obs.hol_delay = hol;
    obs.avg_rate = std::max(
        kMinSmoothed, (1.0 - kSmoothing) * obs.avg_rate + kSmoothing * rec.rate[n]);
    obs.avg_arrival_rate =
        std::max(kMinSmoothed, (1.0 - kSmoothing) * obs.avg_arrival_rate +
                                   kSmoothing * static_cast<double>(admitted) / tau);
    obs.avg_waiting =
        (1.0 - kSmoothing) * obs.avg_waiting + kSmoothing * waiting_sample;
    rec.hol[n] = hol;
    obs_scratch_[n] = obs;
  }

  rec.base_weight = base_weights(config_.scheduler, obs_scratch_);
  if (config_.tbrm_enabled) {
    modifier_->step(rec.rate, rec.base_weight, eff_scratch_);
    rec.eff_weight = eff_scratch_;
    for (std::size_t n = 0; n < n_users; ++n) {
      rec.k_g[n] = modifier_->tokens(n).k_g;
      rec.k_M[n] = modifier_->tokens(n).k_M;
    }
  } else {
    rec.eff_weight = rec.base_weight;
  }

  normalize_for_solver(rec.eff_weight, utilities_);
  const Allocation next = solve_num(config_.region, utilities_);
  rec.degenerate = next.degenerate;
  for (std::size_t n = 0; n < n_users; ++n) {
    pending_[n] = std::clamp(next.rates[n], 0.0, config_.region.cmax(n));
  }
  ++slot_;
  return rec;
}

std::vector<SlotRecord> run(const SimConfig& config) {
  Simulation sim(config);
  std::vector<SlotRecord> records;
  records.reserve(config.horizon);
  for (std::size_t t = 0; t < config.horizon; ++t) records.push_back(sim.step());
  return records;
}

}  // namespace tbrm
