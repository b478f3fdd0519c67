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

#include "tbrm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tbrm {
namespace {

struct WindowExcess {
  std::vector<double> over;   // max(C^G - rho_M G tau, 0)
  std::vector<double> under;  // max(rho_g G tau - C^G, 0)
};

WindowExcess window_excess(const CapacityTrace& trace, std::size_t window) {
  if (window == 0) throw std::invalid_argument("window size must be >= 1");
  if (trace.rates.size() < window) {
    throw EmptyReport("trace of " + std::to_string(trace.rates.size()) +
                      " slots is shorter than a window of " +
                      std::to_string(window));
  }
  const std::size_t count = trace.rates.size() / window;
  const double span = static_cast<double>(window) * trace.tau;
  const double cap = trace.constraint.rho_M * span;
  const double floor = trace.constraint.rho_g * span;
  WindowExcess ex;
  ex.over.resize(count);
  ex.under.resize(count);
  for (std::size_t w = 0; w < count; ++w) {
    double reserved = 0.0;
    for (std::size_t t = w * window; t < (w + 1) * window; ++t) {
      reserved += trace.rates[t] * trace.tau;
    }
    ex.over[w] = std::max(reserved - cap, 0.0);
    ex.under[w] = std::max(floor - reserved, 0.0);
  }
  return ex;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

std::vector<bool> positive(const std::vector<double>& v) {
  std::vector<bool> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] > 0.0;
  return out;
}

BoundPair flagged(const RateConstraint& c) {
  BoundPair p;
  p.max_disabled = !c.upper_enabled();
  p.min_disabled = !c.lower_enabled();
  return p;
}

std::vector<double> range(double first, double last, double step) {
  std::vector<double> v;
  const auto n = static_cast<std::size_t>(std::llround((last - first) / step));
  for (std::size_t i = 0; i <= n; ++i) {
    v.push_back(first + static_cast<double>(i) * step);
  }
  return v;
}

}  // namespace

BoundPair m1(const CapacityTrace& trace, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("burst multiplier x must be > 0");
  const RateConstraint& c = trace.constraint;
  BoundPair p = flagged(c);
  if (trace.rates.empty()) return p;
  const double tau = trace.tau;
  const double max_burst = c.rho_M * tau * x;
  const double min_burst = c.rho_g * tau * x;
  double excess = 0.0;
  double deficit = 0.0;
  std::size_t over = 0;
  std::size_t under = 0;
  for (double r : trace.rates) {
    excess = std::max(0.0, excess + (r - c.rho_M) * tau);
    deficit = std::max(0.0, deficit + (c.rho_g - r) * tau);
    over += excess > max_burst ? 1 : 0;
    under += deficit > min_burst ? 1 : 0;
  }
  const auto slots = static_cast<double>(trace.rates.size());
  if (!p.max_disabled) p.max = static_cast<double>(over) / slots;
  if (!p.min_disabled) p.min = static_cast<double>(under) / slots;
  return p;
}

BoundPair m2(const CapacityTrace& trace, std::size_t window) {
  BoundPair p = flagged(trace.constraint);
  const WindowExcess ex = window_excess(trace, window);
  if (!p.max_disabled) p.max = mean(ex.over);
  if (!p.min_disabled) p.min = mean(ex.under);
  return p;
}

BoundPair m3(const CapacityTrace& trace, std::size_t window) {
  BoundPair p = flagged(trace.constraint);
  const WindowExcess ex = window_excess(trace, window);
  if (!p.max_disabled) p.max = mean_run_length(positive(ex.over));
  if (!p.min_disabled) p.min = mean_run_length(positive(ex.under));
  return p;
}

double mean_run_length(const std::vector<bool>& flags) {
  std::size_t runs = 0;
  std::size_t total = 0;
  bool in_run = false;
  for (bool f : flags) {
    if (f) {
      ++total;
      if (!in_run) ++runs;
    }
    in_run = f;
  }
  return runs == 0 ? 0.0
                   : static_cast<double>(total) / static_cast<double>(runs);
}

MetricGrids MetricGrids::defaults() {
  MetricGrids g;
  g.x_max = range(1.0, 10.0, 0.5);
  g.x_min = range(0.05, 1.0, 0.05);
  for (std::size_t G = 1; G <= 40; ++G) g.windows.push_back(G);
  return g;
}

MetricsReport compute_report(const CapacityTrace& trace,
                             const MetricGrids& grids, std::size_t warmup) {
  CapacityTrace cut = trace;
  cut.rates.erase(cut.rates.begin(),
                  cut.rates.begin() +
                      static_cast<std::ptrdiff_t>(
                          std::min(warmup, cut.rates.size())));
  MetricsReport r;
  r.max_disabled = !trace.constraint.upper_enabled();
  r.min_disabled = !trace.constraint.lower_enabled();
  for (double x : grids.x_max) r.m1_max.push_back(m1(cut, x).max);
  for (double x : grids.x_min) r.m1_min.push_back(m1(cut, x).min);
  for (std::size_t G : grids.windows) {
    if (cut.rates.size() < G) {
      r.m2_max.push_back(0.0);
      r.m2_min.push_back(0.0);
      r.m3_max.push_back(0.0);
      r.m3_min.push_back(0.0);
      continue;
    }
    const BoundPair a = m2(cut, G);
    const BoundPair b = m3(cut, G);
    r.m2_max.push_back(a.max);
    r.m2_min.push_back(a.min);
    r.m3_max.push_back(b.max);
    r.m3_min.push_back(b.min);
  }
  return r;
}

}  // namespace tbrm
