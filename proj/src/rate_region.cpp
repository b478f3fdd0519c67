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

#include "tbrm/rate_region.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tbrm {
namespace {

// x^e for x in [0, 1], with the common exponents spelled out.
inline double unit_power(double x, double e) {
  if (e == 1.0) return x;
  if (e == 2.0) return x * x;
  if (e == 0.5) return std::sqrt(x);
  if (e == 0.0) return 1.0;
  return std::pow(x, e);
}

}  // namespace

RateRegion::RateRegion(std::vector<double> cmax, double gamma)
    : cmax_(std::move(cmax)), gamma_(gamma), exponent_(1.0 - gamma) {
  if (cmax_.empty()) {
    throw std::invalid_argument("rate region needs at least one user");
  }
  if (!(gamma_ >= -1.0 && gamma_ <= 1.0)) {
    throw std::invalid_argument("gamma must lie in [-1, 1], got " +
                                std::to_string(gamma_));
  }
  for (std::size_t n = 0; n < cmax_.size(); ++n) {
    if (!std::isfinite(cmax_[n]) || cmax_[n] <= 0.0) {
      throw std::invalid_argument("cmax of user " + std::to_string(n + 1) +
                                  " must be finite and positive");
    }
  }
  min_cmax_ = *std::min_element(cmax_.begin(), cmax_.end());
}

std::vector<double> RateRegion::point_from_angles(
    std::span<const double> angles) const {
  if (angles.size() != num_angles()) {
    throw std::invalid_argument(
        "expected " + std::to_string(num_angles()) + " angles, got " +
        std::to_string(angles.size()));
  }
  for (double a : angles) {
    if (!(a >= 0.0 && a <= std::numbers::pi / 2)) {
      throw std::invalid_argument("angle " + std::to_string(a) +
                                  " outside [0, pi/2]");
    }
  }
  std::vector<double> rates(num_users());
  map_angles(angles, rates);
  return rates;
}

void RateRegion::map_angles(std::span<const double> angles,
                            std::span<double> rates) const {
  const std::size_t n_users = cmax_.size();
  double sine_product = 1.0;
  for (std::size_t n = 0; n + 1 < n_users; ++n) {
    const double a = angles[n];
    rates[n] = cmax_[n] * unit_power(sine_product * std::cos(a), exponent_);
    sine_product *= std::sin(a);
  }
  rates[n_users - 1] = cmax_[n_users - 1] * unit_power(sine_product, exponent_);
}

double num_objective(std::span<const double> rates,
                     std::span<const UtilityEntry> utilities,
                     double rate_floor) {
  double total = 0.0;
  for (std::size_t n = 0; n < rates.size(); ++n) {
    const UtilityEntry& u = utilities[n];
    if (u.form == UtilityForm::kLinear) {
      total += u.weight * rates[n];
    } else {
      total -= u.weight / std::max(rates[n], rate_floor);
    }
  }
  return total;
}

}  // namespace tbrm
