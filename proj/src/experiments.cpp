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

#include "tbrm/experiments.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace tbrm {
namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string axis_name(Metric m) { return m == Metric::kM1 ? "x" : "G"; }

void add_rows(std::vector<MetricRow>& rows, const SimConfig& config,
              bool tbrm, const MetricGrids& grids,
              const std::vector<MetricsReport>& reports) {
  for (std::size_t n = 0; n < reports.size(); ++n) {
    const MetricsReport& r = reports[n];
    auto emit = [&](Metric m, Bound b, const auto& axis,
                    const std::vector<double>& values) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        rows.push_back({m, b, config.scheduler, tbrm, config.name, n + 1,
                        static_cast<double>(axis[i]), values[i]});
      }
    };
    if (!r.max_disabled) {
      emit(Metric::kM1, Bound::kMax, grids.x_max, r.m1_max);
      emit(Metric::kM2, Bound::kMax, grids.windows, r.m2_max);
      emit(Metric::kM3, Bound::kMax, grids.windows, r.m3_max);
    }
    if (!r.min_disabled) {
      emit(Metric::kM1, Bound::kMin, grids.x_min, r.m1_min);
      emit(Metric::kM2, Bound::kMin, grids.windows, r.m2_min);
      emit(Metric::kM3, Bound::kMin, grids.windows, r.m3_min);
    }
  }
}

SweepRow sweep_point(const std::vector<SimConfig>& configs,
                     SchedulerKind scheduler, double parameter) {
  double max_sum = 0.0;
  double min_sum = 0.0;
  std::size_t max_count = 0;
  std::size_t min_count = 0;
  for (const SimConfig& c : configs) {
    const auto records = run(c);
    const auto traces = capacity_traces(c, records);
    for (CapacityTrace trace : traces) {
      trace.rates.erase(trace.rates.begin(),
                        trace.rates.begin() +
                            static_cast<std::ptrdiff_t>(
                                std::min(c.warmup, trace.rates.size())));
      const BoundPair hi = m1(trace, 5.0);
      const BoundPair lo = m1(trace, 0.5);
      if (!hi.max_disabled) {
        max_sum += hi.max;
        ++max_count;
      }
      if (!lo.min_disabled) {
        min_sum += lo.min;
        ++min_count;
      }
    }
  }
  return {scheduler, parameter,
          max_count ? max_sum / static_cast<double>(max_count) : 0.0,
          min_count ? min_sum / static_cast<double>(min_count) : 0.0};
}

}  // namespace

std::string format_number(double v) {
  std::array<char, 64> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string to_string(Metric m) {
  switch (m) {
    case Metric::kM1:
      return "m1";
    case Metric::kM2:
      return "m2";
    case Metric::kM3:
      return "m3";
  }
  return "?";
}

std::string to_string(Bound b) { return b == Bound::kMax ? "max" : "min"; }

void write_rate_csv(std::ostream& out, const std::vector<SlotRecord>& records) {
  out << kRateCsvHeader << '\n';
  for (const SlotRecord& r : records) {
    for (std::size_t n = 0; n < r.rate.size(); ++n) {
      out << r.slot << ',' << n + 1 << ',' << format_number(r.rate[n]) << ','
          << r.served[n] << ',' << r.queue[n] << ','
          << format_number(r.hol[n]) << ',' << format_number(r.k_g[n]) << ','
          << format_number(r.k_M[n]) << ','
          << format_number(r.base_weight[n]) << ','
          << format_number(r.eff_weight[n]) << '\n';
    }
  }
}

std::vector<std::vector<double>> read_rate_csv(std::istream& in,
                                               const std::string& source) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != kRateCsvHeader) {
    throw InputFormatError(source, line_no, "expected rate CSV header");
  }
  std::vector<std::vector<double>> rates;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::array<std::string_view, 3> fields;
    std::string_view rest = line;
    for (auto& f : fields) {
      const auto comma = rest.find(',');
      if (comma == std::string_view::npos) {
        throw InputFormatError(source, line_no, "too few columns");
      }
      f = rest.substr(0, comma);
      rest.remove_prefix(comma + 1);
    }
    std::int64_t slot = 0;
    std::size_t user = 0;
    double rate = 0.0;
    const auto bad = [&](std::string_view f, auto& v) {
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      return ec != std::errc() || p != f.data() + f.size();
    };
    if (bad(fields[0], slot) || bad(fields[1], user) || bad(fields[2], rate)) {
      throw InputFormatError(source, line_no, "malformed number");
    }
    if (slot == 0 && user == rates.size() + 1) rates.emplace_back();
    const std::size_t n_users = rates.size();
    if (n_users == 0 || user != row % n_users + 1 ||
        slot != static_cast<std::int64_t>(row / n_users)) {
      throw InputFormatError(source, line_no,
                             "rows must be ordered by slot, then user");
    }
    rates[user - 1].push_back(rate);
    ++row;
  }
  if (rates.empty()) throw InputFormatError(source, line_no, "no rows");
  return rates;
}

std::vector<CapacityTrace> capacity_traces(
    const SimConfig& config, const std::vector<SlotRecord>& records) {
  std::vector<CapacityTrace> traces(config.num_users());
  for (std::size_t n = 0; n < traces.size(); ++n) {
    traces[n].tau = config.tau;
    traces[n].constraint = config.constraint(n);
    traces[n].rates.reserve(records.size());
    for (const SlotRecord& r : records) traces[n].rates.push_back(r.rate[n]);
  }
  return traces;
}

std::vector<MetricsReport> user_reports(const SimConfig& config,
                                        const std::vector<SlotRecord>& records,
                                        const MetricGrids& grids) {
  std::vector<MetricsReport> reports;
  for (const CapacityTrace& t : capacity_traces(config, records)) {
    reports.push_back(compute_report(t, grids, config.warmup));
  }
  return reports;
}

std::vector<AggregateRow> aggregate(const std::vector<MetricRow>& rows) {
  using Key = std::tuple<Metric, Bound, bool, double>;
  std::map<Key, std::size_t> index;
  std::vector<AggregateRow> out;
  std::vector<double> sums;
  for (const MetricRow& r : rows) {
    const Key key{r.metric, r.bound, r.tbrm, r.axis};
    auto [it, inserted] = index.try_emplace(key, out.size());
    if (inserted) {
      out.push_back({r.metric, r.bound, r.tbrm, r.axis, 0.0, 0});
      sums.push_back(0.0);
    }
    sums[it->second] += r.value;
    ++out[it->second].count;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].value = sums[i] / static_cast<double>(out[i].count);
  }
  return out;
}

RegularResult run_regular(const std::vector<SimConfig>& scenarios,
                          const RegularOptions& options) {
  RegularResult result;
  const fs::path out_dir = options.out_dir;
  for (const SimConfig& base : scenarios) {
    for (SchedulerKind s : options.schedulers) {
      for (bool tbrm : options.tbrm_modes) {
        SimConfig c = base;
        c.scheduler = s;
        c.tbrm_enabled = tbrm;
        const auto records = run(c);
        if (!options.out_dir.empty()) {
          auto out = open_output(out_dir / c.name /
                                 ("rates_" + std::string(to_string(s)) +
                                  (tbrm ? "_on.csv" : "_off.csv")));
          write_rate_csv(out, records);
        }
        add_rows(result.rows, c, tbrm, options.grids,
                 user_reports(c, records, options.grids));
      }
    }
  }
  result.aggregate = aggregate(result.rows);
  if (!options.out_dir.empty()) {
    for (Metric m : {Metric::kM1, Metric::kM2, Metric::kM3}) {
      for (Bound b : {Bound::kMax, Bound::kMin}) {
        for (SchedulerKind s : options.schedulers) {
          std::vector<MetricRow> subset;
          for (const MetricRow& r : result.rows) {
            if (r.metric == m && r.bound == b && r.scheduler == s) {
              subset.push_back(r);
            }
          }
          auto out = open_output(out_dir / (to_string(m) + "_" + to_string(b) +
                                            "_" + std::string(to_string(s)) +
                                            ".csv"));
          write_metric_csv(out, subset);
        }
      }
    }
    auto out = open_output(out_dir / "aggregate.csv");
    write_aggregate_csv(out, result.aggregate);
  }
  return result;
}

std::vector<double> default_sigma_multipliers() {
  std::vector<double> v;
  for (int i = 0; i < 10; ++i) v.push_back(std::pow(10.0, -2.0 + 6.0 * i / 9.0));
  return v;
}

std::vector<double> default_taus() { return {0.05, 0.1, 0.2, 0.5, 1.0}; }

std::vector<SweepRow> sweep_sigma(const std::vector<SimConfig>& scenarios,
                                  const std::vector<double>& multipliers,
                                  const std::vector<SchedulerKind>& schedulers) {
  if (multipliers.empty()) throw std::invalid_argument("no sigma multipliers");
  for (double i : multipliers) {
    if (!(i > 0.0) || !std::isfinite(i)) {
      throw std::invalid_argument("sigma multiplier must be > 0, got " +
                                  format_number(i));
    }
  }
  std::vector<SweepRow> rows;
  for (SchedulerKind s : schedulers) {
    for (double i : multipliers) {
      std::vector<SimConfig> configs = scenarios;
      for (SimConfig& c : configs) {
        c.scheduler = s;
        c.tbrm_enabled = true;
        for (UserConfig& u : c.users) u.sigma_g_mult = u.sigma_M_mult = i;
      }
      rows.push_back(sweep_point(configs, s, i));
    }
  }
  return rows;
}

std::vector<SweepRow> sweep_tau(const std::vector<SimConfig>& scenarios,
                                const std::vector<double>& taus,
                                const std::vector<SchedulerKind>& schedulers) {
  if (taus.empty()) throw std::invalid_argument("no tau values");
  for (double tau : taus) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
      throw std::invalid_argument("tau must be > 0, got " + format_number(tau));
    }
  }
  std::vector<SweepRow> rows;
  for (SchedulerKind s : schedulers) {
    for (double tau : taus) {
      std::vector<SimConfig> configs = scenarios;
      for (SimConfig& c : configs) {
        const double ratio = c.tau / tau;
        c.horizon = static_cast<std::size_t>(
            std::llround(static_cast<double>(c.horizon) * ratio));
        c.warmup = static_cast<std::size_t>(
            std::llround(static_cast<double>(c.warmup) * ratio));
        c.tau = tau;
        c.scheduler = s;
        c.tbrm_enabled = true;
        for (UserConfig& u : c.users) u.sigma_g_mult = u.sigma_M_mult = 5.0;
      }
      rows.push_back(sweep_point(configs, s, tau));
    }
  }
  return rows;
}

void write_metric_csv(std::ostream& out, const std::vector<MetricRow>& rows) {
  const std::string axis = rows.empty() ? "axis" : axis_name(rows[0].metric);
  out << "scenario,user,tbrm," << axis << ",value\n";
  for (const MetricRow& r : rows) {
    out << r.scenario << ',' << r.user << ',' << (r.tbrm ? "on" : "off") << ','
        << format_number(r.axis) << ',' << format_number(r.value) << '\n';
  }
}

void write_aggregate_csv(std::ostream& out,
                         const std::vector<AggregateRow>& rows) {
  out << "# mean over (scheduler, scenario, user) tuples with the bound "
         "enabled, users weighted equally\n";
  out << "metric,bound,tbrm,axis,value,count\n";
  for (const AggregateRow& r : rows) {
    out << to_string(r.metric) << ',' << to_string(r.bound) << ','
        << (r.tbrm ? "on" : "off") << ',' << format_number(r.axis) << ','
        << format_number(r.value) << ',' << r.count << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::string& parameter_name) {
  out << "scheduler," << parameter_name << ",m1_max_x5,m1_min_x0.5\n";
  for (const SweepRow& r : rows) {
    out << to_string(r.scheduler) << ',' << format_number(r.parameter) << ','
        << format_number(r.m1_max) << ',' << format_number(r.m1_min) << '\n';
  }
}

void write_report_csv(std::ostream& out, const MetricGrids& grids,
                      const std::vector<MetricsReport>& reports) {
  out << "user,metric,bound,axis,value\n";
  for (std::size_t n = 0; n < reports.size(); ++n) {
    const MetricsReport& r = reports[n];
    auto emit = [&](const char* metric, const char* bound, const auto& axis,
                    const std::vector<double>& values) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        out << n + 1 << ',' << metric << ',' << bound << ','
            << format_number(static_cast<double>(axis[i])) << ','
            << format_number(values[i]) << '\n';
      }
    };
    if (!r.max_disabled) {
      emit("m1", "max", grids.x_max, r.m1_max);
      emit("m2", "max", grids.windows, r.m2_max);
      emit("m3", "max", grids.windows, r.m3_max);
    }
    if (!r.min_disabled) {
      emit("m1", "min", grids.x_min, r.m1_min);
      emit("m2", "min", grids.windows, r.m2_min);
      emit("m3", "min", grids.windows, r.m3_min);
    }
  }
}

}  // namespace tbrm
