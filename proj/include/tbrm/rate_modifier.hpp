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

// Token bucket rate modifier.
//
// Two unbounded virtual token counters per user track service deficit
// below the guaranteed rate (k_g >= 0) and service excess above the maximal
// rate (k_M <= 0):
//
//   k_g <- max(0, k_g + (rho_g - C) tau)
//   k_M <- min(0, k_M + (rho_M - C) tau)
//
// and the user's NUM weight w is replaced by phi * exp(k_g/sigma_g +
// k_M/sigma_M). phi is w itself unless w <= eps while a counter is
// non-zero, in which case the smoothed sum of positive weights stands in
// so a starved user with a zero weight can still be pulled up.
//
// rho_g = 0 disables the lower bound and rho_M >= cmax the upper one; a
// disabled bound contributes exactly 0 to the exponent.

#ifndef TBRM_RATE_MODIFIER_HPP_
#define TBRM_RATE_MODIFIER_HPP_

#include <functional>
#include <span>
#include <vector>

namespace tbrm {

struct RateConstraint {
  double rho_g = 0.0;  // guaranteed rate (bit/s)
  double rho_M = 0.0;  // maximal rate (bit/s)
  double cmax = 0.0;   // user capacity (bit/s)

  bool lower_enabled() const { return rho_g > 0.0; }
  bool upper_enabled() const { return rho_M < cmax; }
  // Both bounds off.
  static RateConstraint unconstrained(double cmax) { return {0.0, cmax, cmax}; }
};

// Throws std::invalid_argument on rho_g < 0, non-finite values, or
// rho_g > rho_M with both bounds enabled.
void validate(const RateConstraint& c);

struct TokenState {
  double k_g = 0.0;  // bits, >= 0
  double k_M = 0.0;  // bits, <= 0
  // Burst parameters (bits); +inf for a disabled bound.
  double sigma_g = 0.0;
  double sigma_M = 0.0;

  // Zero tokens, sigma_g = sigma_g_mult * tau * rho_g and likewise for
  // sigma_M.
  static TokenState for_constraint(const RateConstraint& c, double tau,
                                   double sigma_g_mult = 5.0,
                                   double sigma_M_mult = 5.0);

  // k_g / sigma_g + k_M / sigma_M, with disabled terms exactly 0.
  double exponent() const;
};

// Weight smoothing shared by all users of one scheduler instance.
struct WeightReference {
  double omega_bar = 0.0;  // smoothed sum of positive base weights
  double epsilon = 0.0;    // max base weight * 1e-5
};

inline constexpr double kOmegaSmoothing = 0.05;
inline constexpr double kEpsilonFraction = 1e-5;

TokenState update_tokens(TokenState state, const RateConstraint& c,
                         double assigned_rate, double tau);

WeightReference update_omega_bar(WeightReference ref,
                                 std::span<const double> base_weights,
                                 double smoothing = kOmegaSmoothing);

// phi * exp(exponent).
double effective_weight(const TokenState& state, const WeightReference& ref,
                        double base_weight);

struct AdditiveWeight {
  double base = 0.0;
  double offset = 0.0;  // (alpha(k_g/sigma_g) + alpha(k_M/sigma_M)) * beta
  double combined() const { return base + offset; }
};

using TokenShaping = std::function<double(double)>;
inline double shaping_linear(double x) { return x; }
inline double shaping_cubic(double x) { return x * x * x; }

// Additive variant: the offset is added to the weight instead of scaling
// it. `alpha` must be increasing with alpha(0) = 0; beta > 0 converts the
// dimensionless token ratio into weight units.
AdditiveWeight additive_effective_weight(const TokenState& state,
                                         double base_weight,
                                         const TokenShaping& alpha,
                                         double beta);

enum class ModifierMode { kMultiplicative, kAdditive };
enum class AdditiveShape { kLinear, kCubic };

// Token state for a whole user population, advanced once per slot.
class RateModifier {
 public:
  RateModifier(std::vector<RateConstraint> constraints,
               std::vector<TokenState> tokens, double tau,
               ModifierMode mode = ModifierMode::kMultiplicative,
               AdditiveShape shape = AdditiveShape::kLinear);

  std::size_t num_users() const { return tokens_.size(); }
  const TokenState& tokens(std::size_t user) const { return tokens_[user]; }
  const WeightReference& reference() const { return reference_; }

  // One slot: charge every user's counters with the rate it received,
  // refresh omega_bar / eps from this slot's base weights, then write the
  // effective weights.
  void step(std::span<const double> assigned_rates,
            std::span<const double> base_weights,
            std::span<double> effective_weights);

 private:
  std::vector<RateConstraint> constraints_;
  std::vector<TokenState> tokens_;
  double tau_;
  ModifierMode mode_;
  AdditiveShape shape_;
  WeightReference reference_;
};

}  // namespace tbrm

#endif  // TBRM_RATE_MODIFIER_HPP_
