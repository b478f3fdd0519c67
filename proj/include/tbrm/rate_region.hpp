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

// Parametric convex rate region and the utility terms evaluated over it.
//
// The region is the image of the angle box [0, pi/2]^(N-1) under an
// n-sphere style map. With equal per-user caps M, gamma = -1 yields the
// simplex sum(r) = M, gamma = 0 the sphere sum(r^2) = M^2 and gamma = 1 the
// hypercube corner.

#ifndef TBRM_RATE_REGION_HPP_
#define TBRM_RATE_REGION_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace tbrm {

class RateRegion {
 public:
  // Throws std::invalid_argument unless every cap is finite and > 0 and
  // gamma lies in [-1, 1].
  RateRegion(std::vector<double> cmax, double gamma);

  std::size_t num_users() const { return cmax_.size(); }
  std::size_t num_angles() const { return cmax_.size() - 1; }
  const std::vector<double>& cmax() const { return cmax_; }
  double cmax(std::size_t user) const { return cmax_[user]; }
  double gamma() const { return gamma_; }
  double min_cmax() const { return min_cmax_; }

  // Maps an angle vector onto the region boundary. Validates the input.
  std::vector<double> point_from_angles(std::span<const double> angles) const;

  // Unchecked variant for the solver hot loop; `rates` must hold N values
  // and every angle must already lie in [0, pi/2].
  void map_angles(std::span<const double> angles,
                  std::span<double> rates) const;

 private:
  std::vector<double> cmax_;
  double gamma_;
  double exponent_;  // 1 - gamma
  double min_cmax_;
};

enum class UtilityForm { kLinear, kReciprocal };

// One user's term in the NUM objective: weight * r for the linear form and
// -weight / r for the reciprocal form.
struct UtilityEntry {
  UtilityForm form = UtilityForm::kLinear;
  double weight = 0.0;
};

// Sum of utility terms at `rates`. Reciprocal terms clamp r at `rate_floor`.
double num_objective(std::span<const double> rates,
                     std::span<const UtilityEntry> utilities,
                     double rate_floor);

// The clamp used for reciprocal terms on a given region.
inline double reciprocal_rate_floor(const RateRegion& region) {
  return 1e-6 * region.min_cmax();
}

struct Allocation {
  std::vector<double> rates;
  std::vector<double> angles;
  double objective = 0.0;
  // Set when every weight is zero; the returned point is then arbitrary.
  bool degenerate = false;
  std::size_t evaluations = 0;
};

}  // namespace tbrm

#endif  // TBRM_RATE_REGION_HPP_
