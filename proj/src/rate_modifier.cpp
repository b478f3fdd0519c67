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

#include "tbrm/rate_modifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tbrm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double ratio(double tokens, double sigma) {
  return std::isinf(sigma) ? 0.0 : tokens / sigma;
}

}  // namespace

void validate(const RateConstraint& c) {
  if (!std::isfinite(c.cmax) || c.cmax <= 0.0) {
    throw std::invalid_argument("constraint cmax must be finite and > 0");
  }
  if (!std::isfinite(c.rho_g) || c.rho_g < 0.0) {
    throw std::invalid_argument("rho_g must be finite and >= 0");
  }
  if (std::isnan(c.rho_M) || c.rho_M < 0.0) {
    throw std::invalid_argument("rho_M must be >= 0");
  }
  if (c.lower_enabled() && c.upper_enabled() && c.rho_g > c.rho_M) {
    throw std::invalid_argument("rho_g exceeds rho_M");
  }
  if (c.lower_enabled() && c.rho_g > c.cmax) {
    throw std::invalid_argument("rho_g exceeds the user capacity");
  }
}

TokenState TokenState::for_constraint(const RateConstraint& c, double tau,
                                      double sigma_g_mult,
                                      double sigma_M_mult) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (!(sigma_g_mult > 0.0) || !(sigma_M_mult > 0.0)) {
    throw std::invalid_argument("sigma multipliers must be positive");
  }
  TokenState s;
  s.sigma_g = c.lower_enabled() ? sigma_g_mult * tau * c.rho_g : kInf;
  s.sigma_M = c.upper_enabled() ? sigma_M_mult * tau * c.rho_M : kInf;
  return s;
}

double TokenState::exponent() const {
  return ratio(k_g, sigma_g) + ratio(k_M, sigma_M);
}

TokenState update_tokens(TokenState state, const RateConstraint& c,
                         double assigned_rate, double tau) {
  if (c.lower_enabled()) {
    state.k_g = std::max(0.0, state.k_g + (c.rho_g - assigned_rate) * tau);
  }
  if (c.upper_enabled()) {
    state.k_M = std::min(0.0, state.k_M + (c.rho_M - assigned_rate) * tau);
  }
  return state;
}

WeightReference update_omega_bar(WeightReference ref,
                                 std::span<const double> base_weights,
                                 double smoothing) {
  double positive_sum = 0.0;
  double max_weight = -kInf;
  for (double w : base_weights) {
    if (w > 0.0) positive_sum += w;
    max_weight = std::max(max_weight, w);
  }
  ref.omega_bar = (1.0 - smoothing) * ref.omega_bar + smoothing * positive_sum;
  ref.epsilon = base_weights.empty() ? 0.0 : max_weight * kEpsilonFraction;
  return ref;
}

double effective_weight(const TokenState& state, const WeightReference& ref,
                        double base_weight) {
  const double e = state.exponent();
  const double phi =
      (base_weight <= ref.epsilon && e != 0.0) ? ref.omega_bar : base_weight;
  return phi * std::exp(e);
}

AdditiveWeight additive_effective_weight(const TokenState& state,
                                         double base_weight,
                                         const TokenShaping& alpha,
                                         double beta) {
  AdditiveWeight w;
  w.base = base_weight;
  w.offset = (alpha(ratio(state.k_g, state.sigma_g)) +
              alpha(ratio(state.k_M, state.sigma_M))) *
             beta;
  return w;
}

RateModifier::RateModifier(std::vector<RateConstraint> constraints,
                           std::vector<TokenState> tokens, double tau,
                           ModifierMode mode, AdditiveShape shape)
    : constraints_(std::move(constraints)),
      tokens_(std::move(tokens)),
      tau_(tau),
      mode_(mode),
      shape_(shape) {
  if (constraints_.size() != tokens_.size()) {
    throw std::invalid_argument("one token state per constraint required");
  }
  if (!(tau_ > 0.0)) throw std::invalid_argument("tau must be positive");
}

void RateModifier::step(std::span<const double> assigned_rates,
                        std::span<const double> base_weights,
                        std::span<double> effective_weights) {
  const std::size_t n_users = tokens_.size();
  if (assigned_rates.size() != n_users || base_weights.size() != n_users ||
      effective_weights.size() != n_users) {
    throw std::invalid_argument("rate modifier step: size mismatch");
  }
  reference_ = update_omega_bar(reference_, base_weights);
  const TokenShaping alpha =
      shape_ == AdditiveShape::kCubic ? shaping_cubic : shaping_linear;
  for (std::size_t n = 0; n < n_users; ++n) {
    tokens_[n] =
        update_tokens(tokens_[n], constraints_[n], assigned_rates[n], tau_);
    if (mode_ == ModifierMode::kMultiplicative) {
      effective_weights[n] =
          effective_weight(tokens_[n], reference_, base_weights[n]);
    } else {
      effective_weights[n] =
          additive_effective_weight(tokens_[n], base_weights[n], alpha,
                                    reference_.omega_bar)
              .combined();
    }
  }
}

}  // namespace tbrm
