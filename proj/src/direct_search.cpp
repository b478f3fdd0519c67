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

#include "tbrm/direct_search.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <functional>
#include <stdexcept>
#include <utility>

namespace tbrm {
namespace {

constexpr int kMaxLevel = 32;  // 3^-32 is below double resolution on [0,1]

// Side length 3^-level, tabulated.
const std::array<double, kMaxLevel + 2>& third_powers() {
  static const auto table = [] {
    std::array<double, kMaxLevel + 2> t{};
    t[0] = 1.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] / 3.0;
    return t;
  }();
  return table;
}

void check_box(std::span<const double> lower, std::span<const double> upper) {
  if (lower.size() != upper.size()) {
    throw std::invalid_argument("box bounds differ in dimension");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i])) {
      throw std::invalid_argument("box must have lower < upper in every dim");
    }
  }
}

// Evaluates the caller's objective at unit-cube points and tracks the
// count. Values are negated so both phases minimize.
class ScaledObjective {
 public:
  ScaledObjective(const BoxObjective& f, std::span<const double> lower,
                  std::span<const double> upper)
      : f_(f), lower_(lower), upper_(upper), point_(lower.size()) {}

  double operator()(std::span<const double> unit) {
    for (std::size_t i = 0; i < point_.size(); ++i) {
      point_[i] = lower_[i] + unit[i] * (upper_[i] - lower_[i]);
    }
    ++evaluations_;
    const double v = f_(point_);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : -v;
  }

  std::vector<double> to_box(std::span<const double> unit) const {
    std::vector<double> x(unit.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = lower_[i] + unit[i] * (upper_[i] - lower_[i]);
    }
    return x;
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  const BoxObjective& f_;
  std::span<const double> lower_;
  std::span<const double> upper_;
  std::vector<double> point_;
  std::size_t evaluations_ = 0;
};

// Rectangles of one size class, as a binary min-heap on (value, id). Only
// the class minimum is ever divided, so pop-top is the only removal.
class SizeClass {
 public:
  bool empty() const { return heap_.empty(); }
  const std::pair<double, std::size_t>& top() const { return heap_.front(); }
  void push(double value, std::size_t id) {
    heap_.emplace_back(value, id);
    std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
  }
  void pop() {
    std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
    heap_.pop_back();
  }

 private:
  std::vector<std::pair<double, std::size_t>> heap_;
};

class DirectL {
 public:
  DirectL(ScaledObjective& objective, std::size_t dims,
          const DirectSearchOptions& options)
      : objective_(objective), dims_(dims), options_(options),
        classes_(kMaxLevel + 1) {
    const std::size_t expected = options.global_evaluations + 1;
    centers_.reserve(expected * dims);
    levels_.reserve(expected * dims);
    values_.reserve(expected);
    min_level_.reserve(expected);
  }

  void run() {
    std::vector<double> center(dims_, 0.5);
    add_rect(center, std::vector<std::uint8_t>(dims_, 0),
             objective_(center));
    if (dims_ == 0) return;

    std::vector<std::size_t> selected;
    while (objective_.evaluations() < options_.global_evaluations) {
      select_potentially_optimal(selected);
      if (selected.empty()) return;
      // Children of one division may land in another selected class, so
      // detach every selected rectangle before dividing any of them.
      for (std::size_t id : selected) classes_[min_level_[id]].pop();
      for (std::size_t id : selected) {
        if (!divide(id)) return;
      }
    }
  }

  std::vector<double> best_center() const {
    return {centers_.begin() + best_ * dims_,
            centers_.begin() + (best_ + 1) * dims_};
  }
  double best_value() const { return values_[best_]; }
  double best_cell_size() const {
    return dims_ == 0 ? 0.0 : third_powers()[min_level_[best_]];
  }

 private:
  struct Candidate {
    double size;
    double value;
    std::size_t id;
  };
  struct Probe {
    std::size_t dim;
    double plus;
    double minus;
    double best() const { return std::min(plus, minus); }
  };

  void add_rect(std::span<const double> center,
                std::span<const std::uint8_t> levels, double value) {
    const std::size_t id = values_.size();
    centers_.insert(centers_.end(), center.begin(), center.end());
    levels_.insert(levels_.end(), levels.begin(), levels.end());
    values_.push_back(value);
    const int min_level =
        dims_ == 0 ? 0 : *std::min_element(levels.begin(), levels.end());
    min_level_.push_back(min_level);
    if (min_level < kMaxLevel) classes_[min_level].push(value, id);
    if (value < values_[best_]) best_ = id;
  }

  // One rectangle per size class (its best), kept if it can be the lowest
  // under some Lipschitz slope K > 0 and improves on the incumbent by at
  // least epsilon * |fmin|.
  void select_potentially_optimal(std::vector<std::size_t>& out) {
    out.clear();
    candidates_.clear();
    for (int level = 0; level <= kMaxLevel; ++level) {
      if (classes_[level].empty()) continue;
      const auto& [value, id] = classes_[level].top();
      candidates_.push_back({0.5 * third_powers()[level], value, id});
    }
    const double fmin = values_[best_];
    const double target = fmin - options_.hull_epsilon * std::abs(fmin);
    for (std::size_t j = 0; j < candidates_.size(); ++j) {
      const Candidate& cj = candidates_[j];
      double k_low = 0.0;
      double k_high = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < candidates_.size(); ++i) {
        if (i == j) continue;
        const double dd = cj.size - candidates_[i].size;
        const double slope = (cj.value - candidates_[i].value) / dd;
        if (dd > 0) {
          k_low = std::max(k_low, slope);
        } else {
          k_high = std::min(k_high, slope);
        }
      }
      if (k_low > k_high) continue;
      if (std::isfinite(k_high) && cj.value - k_high * cj.size > target) {
        continue;
      }
      out.push_back(cj.id);
    }
  }

  // Trisects `id`, already detached from its size class, along all of its
  // longest sides. Returns false when the evaluation budget does not allow
  // the division.
  bool divide(std::size_t id) {
    const int level = min_level_[id];
    long_dims_.clear();
    for (std::size_t i = 0; i < dims_; ++i) {
      if (levels_[id * dims_ + i] == level) long_dims_.push_back(i);
    }
    if (objective_.evaluations() + 2 * long_dims_.size() >
        options_.global_evaluations) {
      return false;
    }

    const double delta = third_powers()[level + 1];
    center_.assign(centers_.begin() + id * dims_,
                   centers_.begin() + (id + 1) * dims_);
    point_ = center_;
    probes_.clear();
    for (std::size_t i : long_dims_) {
      point_[i] = center_[i] + delta;
      const double plus = objective_(point_);
      point_[i] = center_[i] - delta;
      const double minus = objective_(point_);
      point_[i] = center_[i];
      probes_.push_back({i, plus, minus});
    }
    std::stable_sort(probes_.begin(), probes_.end(),
                     [](const Probe& a, const Probe& b) {
                       return a.best() < b.best();
                     });

    // The best direction is split first so its children keep the largest
    // sides.
    child_levels_.assign(levels_.begin() + id * dims_,
                         levels_.begin() + (id + 1) * dims_);
    for (const Probe& p : probes_) {
      ++child_levels_[p.dim];
      levels_[id * dims_ + p.dim] = child_levels_[p.dim];
      point_[p.dim] = center_[p.dim] + delta;
      add_rect(point_, child_levels_, p.plus);
      point_[p.dim] = center_[p.dim] - delta;
      add_rect(point_, child_levels_, p.minus);
      point_[p.dim] = center_[p.dim];
    }
    const int new_level =
        *std::min_element(child_levels_.begin(), child_levels_.end());
    min_level_[id] = new_level;
    if (new_level < kMaxLevel) classes_[new_level].push(values_[id], id);
    return true;
  }

  ScaledObjective& objective_;
  std::size_t dims_;
  const DirectSearchOptions& options_;
  std::vector<double> centers_;
  std::vector<std::uint8_t> levels_;
  std::vector<double> values_;
  std::vector<int> min_level_;
  std::vector<SizeClass> classes_;
  std::size_t best_ = 0;

  // Scratch reused across iterations.
  std::vector<Candidate> candidates_;
  std::vector<std::size_t> long_dims_;
  std::vector<Probe> probes_;
  std::vector<double> center_;
  std::vector<double> point_;
  std::vector<std::uint8_t> child_levels_;
};

struct LocalOutcome {
  std::vector<double> unit;
  double value;
  std::size_t iterations;
};

LocalOutcome compass_minimize(ScaledObjective& objective,
                              std::vector<double> unit, double step,
                              const DirectSearchOptions& options) {
  double value = objective(unit);
  std::vector<double> trial = unit;
  std::vector<double> best_trial;
  std::size_t it = 0;
  while (it < options.local_iterations && step >= options.local_min_step) {
    ++it;
    double best_value = value;
    bool improved = false;
    for (std::size_t i = 0; i < unit.size(); ++i) {
      for (double sign : {1.0, -1.0}) {
        const double v = std::clamp(unit[i] + sign * step, 0.0, 1.0);
        if (v == unit[i]) continue;
        trial[i] = v;
        const double g = objective(trial);
        if (g < best_value) {
          best_value = g;
          best_trial = trial;
          improved = true;
        }
        trial[i] = unit[i];
      }
    }
    if (!improved) {
      step *= 0.5;
      continue;
    }
    const double gain =
        (value - best_value) /
        std::max(std::abs(value), std::numeric_limits<double>::min());
    unit = best_trial;
    trial = unit;
    value = best_value;
    if (gain < options.local_relative_tolerance) break;
  }
  return {std::move(unit), value, it};
}

}  // namespace

BoxSearchResult direct_l_maximize(const BoxObjective& f,
                                  std::span<const double> lower,
                                  std::span<const double> upper,
                                  const DirectSearchOptions& options) {
  check_box(lower, upper);
  ScaledObjective objective(f, lower, upper);
  DirectL search(objective, lower.size(), options);
  search.run();
  BoxSearchResult result;
  result.x = objective.to_box(search.best_center());
  result.value = -search.best_value();
  result.evaluations = objective.evaluations();
  result.cell_size = search.best_cell_size();
  return result;
}

BoxSearchResult compass_maximize(const BoxObjective& f,
                                 std::span<const double> lower,
                                 std::span<const double> upper,
                                 std::span<const double> start,
                                 double initial_step,
                                 const DirectSearchOptions& options) {
  check_box(lower, upper);
  if (start.size() != lower.size()) {
    throw std::invalid_argument("start point has the wrong dimension");
  }
  ScaledObjective objective(f, lower, upper);
  std::vector<double> unit(start.size());
  for (std::size_t i = 0; i < unit.size(); ++i) {
    unit[i] = std::clamp((start[i] - lower[i]) / (upper[i] - lower[i]), 0.0,
                         1.0);
  }
  LocalOutcome local =
      compass_minimize(objective, std::move(unit), initial_step, options);
  BoxSearchResult result;
  result.x = objective.to_box(local.unit);
  result.value = -local.value;
  result.evaluations = objective.evaluations();
  result.local_iterations = local.iterations;
  result.cell_size = 0.0;
  return result;
}

BoxSearchResult maximize_in_box(const BoxObjective& f,
                                std::span<const double> lower,
                                std::span<const double> upper,
                                const DirectSearchOptions& options) {
  BoxSearchResult global = direct_l_maximize(f, lower, upper, options);
  if (lower.empty()) return global;
  BoxSearchResult local = compass_maximize(f, lower, upper, global.x,
                                           0.5 * global.cell_size, options);
  if (local.value < global.value) {
    // The compass search starts from the global best, so this only happens
    // if the objective is not deterministic.
    local.x = global.x;
    local.value = global.value;
  }
  local.evaluations += global.evaluations;
  local.cell_size = global.cell_size;
  return local;
}

}  // namespace tbrm
