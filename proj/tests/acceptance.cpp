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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "metric_properties.hpp"
#include "tbrm/experiments.hpp"
#include "tbrm/num_solver.hpp"
#include "tbrm/rate_modifier.hpp"
#include "tbrm/scenario.hpp"

namespace {

using namespace tbrm;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const Outcome& o) {
  std::printf("criterion %d %s: %s (%s)\n", id, o.pass ? "PASS" : "FAIL",
              title, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// One finished run plus its metric reports.
struct Run {
  SimConfig config;
  std::vector<SlotRecord> records;
  std::vector<MetricsReport> reports;
};

using RunKey = std::tuple<int, SchedulerKind, bool>;  // scenario, kind, tbrm

struct InvariantTally {
  std::size_t token_violations = 0;
  std::size_t identity_checks = 0;     // slots with both counters at zero
  std::size_t identity_violations = 0;
  std::size_t conforming_users = 0;    // C(t) within bounds for every t
  std::size_t conservation_violations = 0;
  std::size_t service_violations = 0;
};

bool within_bounds(double rate, const RateConstraint& c) {
  return (!c.lower_enabled() || rate >= c.rho_g) &&
         (!c.upper_enabled() || rate <= c.rho_M);
}

void tally(const Run& run, InvariantTally& t) {
  const SimConfig& c = run.config;
  const std::size_t n_users = c.num_users();
  std::vector<bool> conforming(n_users, true);
  for (std::size_t s = 0; s < run.records.size(); ++s) {
    const SlotRecord& r = run.records[s];
    for (std::size_t n = 0; n < n_users; ++n) {
      if (r.k_g[n] < 0.0 || r.k_M[n] > 0.0) ++t.token_violations;
      if (c.tbrm_enabled && r.k_g[n] == 0.0 && r.k_M[n] == 0.0) {
        ++t.identity_checks;
        if (r.eff_weight[n] != r.base_weight[n]) ++t.identity_violations;
      }
      conforming[n] = conforming[n] && within_bounds(r.rate[n], c.constraint(n));
      const std::int64_t prev = s == 0 ? 0 : run.records[s - 1].queue[n];
      if (r.queue_start[n] != prev ||
          r.queue[n] != r.queue_start[n] + r.arrivals[n] - r.served[n]) {
        ++t.conservation_violations;
      }
      if (r.served[n] > r.queue_start[n] ||
          static_cast<double>(r.served[n]) > r.rate[n] * c.tau ||
          r.rate[n] < 0.0 || r.rate[n] > c.region.cmax(n)) {
        ++t.service_violations;
      }
    }
  }
  for (std::size_t n = 0; n < n_users; ++n) {
    if (!conforming[n] || !c.tbrm_enabled) continue;
    ++t.conforming_users;
    for (const SlotRecord& r : run.records) {
      ++t.identity_checks;
      if (r.eff_weight[n] != r.base_weight[n]) ++t.identity_violations;
    }
  }
}

// Mean over (scheduler, scenario, user) with the bound enabled.
struct Mean {
  double sum = 0.0;
  std::size_t count = 0;
  void add(double v) {
    sum += v;
    ++count;
  }
  double value() const { return count ? sum / static_cast<double>(count) : 0.0; }
};

std::size_t index_of(const std::vector<double>& grid, double x) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(grid[i] - x) < 1e-12) return i;
  }
  throw std::logic_error("grid point missing");
}

Outcome solver_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> w(0.0, 10.0);
  std::uniform_real_distribution<double> cap(0.5, 2.0);
  std::uniform_int_distribution<int> pick(0, 4);
  const double gammas[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  int bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n_users = 2 + static_cast<std::size_t>(i % 2);
    std::vector<double> cmax(n_users);
    for (double& c : cmax) c = cap(rng);
    const RateRegion region(cmax, gammas[pick(rng)]);
    const UtilityForm form =
        rng() % 2 ? UtilityForm::kLinear : UtilityForm::kReciprocal;
    std::vector<UtilityEntry> u(n_users);
    for (auto& e : u) e = {form, w(rng)};
    const Allocation got = solve_num(region, u);
    const Allocation want = grid_oracle_solve(region, u, 200);
    const double gap = (want.objective - got.objective) /
                       std::max(std::abs(want.objective), 1e-300);
    worst = std::max(worst, gap);
    if (got.objective < want.objective - 1e-3 * std::abs(want.objective)) {
      ++bad;
    }
  }
  const double secs = seconds_since(start);
  return {bad == 0 && secs <= 120.0,
          fmt("%.0f of 200 instances outside 1e-3, worst shortfall %.2e, "
              "%.1f s",
              bad, worst, secs)};
}

Outcome metric_properties() {
  std::mt19937_64 rng(77);
  int mono = 0, merge = 0, mirror = 0, zero = 0;
  for (int i = 0; i < 100; ++i) {
    mono += testing::m1_monotone(testing::random_trace(rng)) ? 0 : 1;
    merge += testing::m2_superadditive(testing::random_trace(rng)) ? 0 : 1;
    mirror += testing::reflection_agrees(testing::random_integer_trace(rng))
                  ? 0
                  : 1;
    zero += testing::conforming_is_zero(testing::random_conforming_trace(rng))
                ? 0
                : 1;
  }
  return {mono + merge + mirror + zero == 0,
          fmt("failures: monotone %.0f, merge %.0f, reflection %.0f, "
              "conforming %.0f (100 traces each)",
              mono, merge, mirror, zero)};
}

Outcome causality() {
  // Replays with extra bits injected at slot t must not change C(t).
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> slot(0, 599);
  std::size_t checks = 0, bad = 0;
  for (int scenario : {2, 5}) {
    for (SchedulerKind k : kAllSchedulers) {
      SimConfig c = load_preset(scenario);
      c.scheduler = k;
      for (int rep = 0; rep < 2; ++rep) {
        const int target = slot(rng);
        Simulation a(c), b(c);
        std::vector<double> bump(c.num_users());
        for (std::size_t n = 0; n < bump.size(); ++n) {
          bump[n] = 1e6 * static_cast<double>(1 + (rng() % 50));
        }
        for (int t = 0; t <= target; ++t) {
          const SlotRecord ra = a.step();
          const SlotRecord rb = t == target ? b.step(bump) : b.step();
          ++checks;
          if (ra.rate != rb.rate) ++bad;
        }
      }
    }
  }
  return {bad == 0, fmt("%.0f replayed slots, %.0f with a changed C(t)",
                        static_cast<double>(checks), static_cast<double>(bad))};
}

Outcome complexity() {
  const std::size_t n_users = 100000;
  const double tau = 0.05;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<RateConstraint> cs(n_users);
  std::vector<TokenState> ts(n_users);
  std::vector<double> rates(n_users), base(n_users), eff(n_users);
  for (std::size_t n = 0; n < n_users; ++n) {
    const double cmax = 1e6 * (1 + u(rng));
    cs[n] = {0.3 * cmax * u(rng), cmax * (0.5 + 0.4 * u(rng)), cmax};
    ts[n] = TokenState::for_constraint(cs[n], tau);
    rates[n] = cmax * u(rng);
    base[n] = u(rng);
  }
  RateModifier mod(cs, ts, tau);
  std::vector<double> times;
  for (int rep = 0; rep < 11; ++rep) {
    const auto start = Clock::now();
    mod.step(rates, base, eff);
    times.push_back(seconds_since(start) * 1e3);
  }
  std::sort(times.begin(), times.end());
  const double median = times[times.size() / 2];
  return {median <= 50.0,
          fmt("median %.2f ms, worst %.2f ms per pass over 1e5 users", median,
              times.back())};
}

}  // namespace

int main() {
  const MetricGrids grids = MetricGrids::defaults();
  const std::size_t x5 = index_of(grids.x_max, 5.0);
  const std::size_t g1 = 0;  // G = 1 slot
  const std::size_t g5 = 4;  // G = 5 slots

  // Regular runs: every preset x scheduler with the modifier, and the
  // unmodified baseline for scenarios 1 and 2.
  std::map<RunKey, Run> runs;
  InvariantTally inv;
  double tbrm_seconds = 0.0;
  for (int s = 1; s <= kNumPresets; ++s) {
    for (SchedulerKind k : kAllSchedulers) {
      for (bool tbrm : {true, false}) {
        if (!tbrm && s > 2) continue;
        const auto start = Clock::now();
        Run r;
        r.config = load_preset(s);
        r.config.scheduler = k;
        r.config.tbrm_enabled = tbrm;
        r.records = run(r.config);
        r.reports = user_reports(r.config, r.records, grids);
        tally(r, inv);
        r.records.clear();
        r.records.shrink_to_fit();
        if (tbrm) tbrm_seconds += seconds_since(start);
        runs.emplace(RunKey{s, k, tbrm}, std::move(r));
      }
    }
  }

  {
    Outcome o;
    o.pass = inv.token_violations == 0 && inv.identity_violations == 0 &&
             tbrm_seconds <= 600.0;
    o.detail = fmt("%.0f sign violations, %.0f of %.0f zero-token slots "
                   "changed the weight, %.0f always-conforming users, ",
                   static_cast<double>(inv.token_violations),
                   static_cast<double>(inv.identity_violations),
                   static_cast<double>(inv.identity_checks),
                   static_cast<double>(inv.conforming_users)) +
               fmt("30 runs in %.0f s", tbrm_seconds);
    report(1, "token invariants", o);
  }

  {
    const auto start = Clock::now();
    Outcome o;
    std::size_t identical = 0;
    for (SchedulerKind k : kAllSchedulers) {
      SimConfig off = load_preset(2);
      off.scheduler = k;
      off.tbrm_enabled = false;
      SimConfig disabled = off;
      disabled.tbrm_enabled = true;
      for (std::size_t n = 0; n < disabled.num_users(); ++n) {
        disabled.users[n].rho_g = 0.0;
        disabled.users[n].rho_M = disabled.region.cmax(n);
      }
      std::ostringstream a, b;
      write_rate_csv(a, run(off));
      write_rate_csv(b, run(disabled));
      if (a.str() == b.str()) ++identical;
    }
    o.pass = identical == kAllSchedulers.size();
    o.detail = fmt("%.0f of 6 schedulers byte-identical over 12000 slots, "
                   "%.0f s",
                   static_cast<double>(identical), seconds_since(start));
    report(2, "modifier off equals all bounds disabled", o);
  }

  report(3, "solver against grid oracle", solver_oracle());

  {
    Mean on, off;
    for (SchedulerKind k : kAllSchedulers) {
      for (bool tbrm : {true, false}) {
        for (const MetricsReport& r : runs.at({1, k, tbrm}).reports) {
          if (r.max_disabled) continue;
          (tbrm ? on : off).add(r.m1_max[x5]);
        }
      }
    }
    Outcome o;
    o.pass = on.value() <= 0.01 && off.value() >= 3.0 * on.value();
    o.detail = fmt("scenario 1, x = 5: with modifier %.4f (limit 0.01), "
                   "without %.4f, ratio %.2f (limit 3)",
                   on.value(), off.value(),
                   on.value() > 0 ? off.value() / on.value() : INFINITY);
    report(4, "maximal-rate non-conformance at x = 5", o);
  }

  {
    Mean on, off;
    for (int s : {1, 2}) {
      for (SchedulerKind k : kAllSchedulers) {
        for (bool tbrm : {true, false}) {
          for (const MetricsReport& r : runs.at({s, k, tbrm}).reports) {
            if (r.max_disabled) continue;
            (tbrm ? on : off).add(r.m2_max[g1]);
          }
        }
      }
    }
    Outcome o;
    o.pass = on.value() <= 0.6 * off.value() && on.value() < off.value();
    o.detail = fmt("scenarios 1-2, G = 1 slot: with modifier %.3f Mbit, "
                   "without %.3f Mbit, ratio %.3f (limit 0.6)",
                   on.value() / 1e6, off.value() / 1e6,
                   off.value() > 0 ? on.value() / off.value() : INFINITY);
    report(5, "excess bits per window", o);
  }

  {
    Mean max1, min1, max5;
    for (int s = 1; s <= kNumPresets; ++s) {
      for (SchedulerKind k : kAllSchedulers) {
        if (k == SchedulerKind::kMDU) continue;
        for (const MetricsReport& r : runs.at({s, k, true}).reports) {
          if (!r.max_disabled) {
            max1.add(r.m3_max[g1]);
            max5.add(r.m3_max[g5]);
          }
          if (!r.min_disabled) min1.add(r.m3_min[g1]);
        }
      }
    }
    Outcome o;
    o.pass = max1.value() <= 5.0 && min1.value() <= 5.0 && max5.value() <= 2.0;
    o.detail = fmt("G = 1: max bound %.2f, min bound %.2f windows (limit 5); "
                   "G = 5 max bound %.2f (limit 2)",
                   max1.value(), min1.value(), max5.value());
    report(6, "violation streak length", o);
  }

  report(7, "metric properties", metric_properties());

  {
    Outcome c = causality();
    Outcome o;
    o.pass = c.pass && inv.conservation_violations == 0 &&
             inv.service_violations == 0;
    o.detail = fmt("%.0f conservation and %.0f service violations over 42 "
                   "full runs; ",
                   static_cast<double>(inv.conservation_violations),
                   static_cast<double>(inv.service_violations)) +
               c.detail;
    report(8, "queue conservation and causality", o);
  }

  report(9, "modifier pass over 1e5 users", complexity());

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
