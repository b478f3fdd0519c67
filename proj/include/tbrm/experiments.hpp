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

// Experiment drivers: regular runs with and without the rate modifier,
// burst-parameter sweeps and slot-length sweeps, plus their CSV output.

#ifndef TBRM_EXPERIMENTS_HPP_
#define TBRM_EXPERIMENTS_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "tbrm/engine.hpp"
#include "tbrm/metrics.hpp"
#include "tbrm/schedulers.hpp"

namespace tbrm {

// Shortest representation that reads back to the same double.
std::string format_number(double v);

inline constexpr const char* kRateCsvHeader =
    "slot,user,assigned_rate_bps,served_bits,queue_bits,hol_s,k_g_bits,"
    "k_M_bits,base_weight,eff_weight";

// Users are numbered from 1.
void write_rate_csv(std::ostream& out, const std::vector<SlotRecord>& records);
// Per-user assigned rates from a rate CSV. Throws InputFormatError.
std::vector<std::vector<double>> read_rate_csv(std::istream& in,
                                               const std::string& source);

std::vector<CapacityTrace> capacity_traces(
    const SimConfig& config, const std::vector<SlotRecord>& records);
std::vector<MetricsReport> user_reports(const SimConfig& config,
                                        const std::vector<SlotRecord>& records,
                                        const MetricGrids& grids);

enum class Metric { kM1, kM2, kM3 };
enum class Bound { kMax, kMin };

struct MetricRow {
  Metric metric;
  Bound bound;
  SchedulerKind scheduler;
  bool tbrm;
  std::string scenario;
  std::size_t user;  // from 1
  double axis;       // x for m1, G (slots) for m2 / m3
  double value;
};

struct AggregateRow {
  Metric metric;
  Bound bound;
  bool tbrm;
  double axis;
  double value;  // mean over (scheduler, scenario, user) with bound enabled
  std::size_t count;
};

struct RegularOptions {
  std::vector<SchedulerKind> schedulers{kAllSchedulers.begin(),
                                        kAllSchedulers.end()};
  std::vector<bool> tbrm_modes{true, false};
  MetricGrids grids = MetricGrids::defaults();
  std::string out_dir;  // empty: nothing written
};

struct RegularResult {
  std::vector<MetricRow> rows;  // disabled bounds omitted
  std::vector<AggregateRow> aggregate;
};

// For every scenario x scheduler x tbrm flag: one run, a rate CSV
// <out>/<scenario>/rates_<scheduler>_<on|off>.csv, and metric rows. Writes
// <out>/<metric>_<bound>_<scheduler>.csv and <out>/aggregate.csv.
RegularResult run_regular(const std::vector<SimConfig>& scenarios,
                          const RegularOptions& options);

std::vector<AggregateRow> aggregate(const std::vector<MetricRow>& rows);

struct SweepRow {
  SchedulerKind scheduler;
  double parameter;  // sigma multiplier or tau
  double m1_max;     // at x = 5, mean over scenarios and users
  double m1_min;     // at x = 0.5
};

std::vector<double> default_sigma_multipliers();  // 10 points, 1e-2 .. 1e4
std::vector<double> default_taus();               // 0.05 .. 1 s

// sigma_g = i tau rho_g and sigma_M = i tau rho_M for each multiplier i.
// Throws std::invalid_argument on a non-positive multiplier.
std::vector<SweepRow> sweep_sigma(const std::vector<SimConfig>& scenarios,
                                  const std::vector<double>& multipliers,
                                  const std::vector<SchedulerKind>& schedulers);

// Runs each scenario at every tau with sigma = 5 tau rho, keeping the
// simulated duration and the warm-up time of the scenario. Throws
// std::invalid_argument on an empty list or tau <= 0.
std::vector<SweepRow> sweep_tau(const std::vector<SimConfig>& scenarios,
                                const std::vector<double>& taus,
                                const std::vector<SchedulerKind>& schedulers);

void write_metric_csv(std::ostream& out, const std::vector<MetricRow>& rows);
void write_aggregate_csv(std::ostream& out,
                         const std::vector<AggregateRow>& rows);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::string& parameter_name);
// One row per user and grid point for a single run.
void write_report_csv(std::ostream& out, const MetricGrids& grids,
                      const std::vector<MetricsReport>& reports);

std::string to_string(Metric m);
std::string to_string(Bound b);

}  // namespace tbrm

#endif  // TBRM_EXPERIMENTS_HPP_
