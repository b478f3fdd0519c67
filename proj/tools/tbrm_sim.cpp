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

// Command line front end.
//
//   tbrm_sim run          --scenario 1 --scenario my.ini --out results/
//   tbrm_sim sweep-sigma  --scenario 1 --out sigma.csv
//   tbrm_sim sweep-tau    --scenario 1 --taus 0.05,0.2,1 --out tau.csv
//   tbrm_sim metrics      --scenario 1 --rates rates_MW_on.csv

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tbrm/experiments.hpp"
#include "tbrm/scenario.hpp"

namespace {

using namespace tbrm;

struct Common {
  std::vector<std::string> scenarios;
  std::vector<std::string> schedulers;
  std::string mode = "multiplicative";
  std::string shape = "linear";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> warmup;
  std::optional<std::size_t> horizon;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool out_required) {
  cmd->add_option("-s,--scenario", c.scenarios,
                  "scenario file, or 1-5 for a bundled one (repeatable; "
                  "default: all bundled)");
  cmd->add_option("--schedulers", c.schedulers,
                  "comma separated: MW,MLWDF,EXPPF,MDU,MD,MDV (default all)")
      ->delimiter(',');
  cmd->add_option("--tbrm-mode", c.mode, "multiplicative or additive")
      ->check(CLI::IsMember({"multiplicative", "additive"}));
  cmd->add_option("--additive-shape", c.shape, "linear or cubic")
      ->check(CLI::IsMember({"linear", "cubic"}));
  cmd->add_option("--seed", c.seed, "override the scenario seed");
  cmd->add_option("--warmup", c.warmup, "slots excluded from metrics");
  cmd->add_option("--horizon", c.horizon, "override the number of slots");
  auto* out = cmd->add_option("-o,--out", c.out, "output path");
  if (out_required) out->required();
}

std::vector<SimConfig> load_all(const Common& c) {
  std::vector<std::string> names = c.scenarios;
  if (names.empty()) {
    for (int i = 1; i <= kNumPresets; ++i) names.push_back(std::to_string(i));
  }
  std::vector<SimConfig> configs;
  for (const std::string& name : names) {
    SimConfig cfg = resolve_scenario(name);
    for (const std::string& w : cfg.warnings) {
      std::cerr << "warning: " << w << '\n';
    }
    if (c.seed) cfg.seed = *c.seed;
    if (c.warmup) cfg.warmup = *c.warmup;
    if (c.horizon) cfg.horizon = *c.horizon;
    cfg.tbrm_mode = c.mode == "additive" ? ModifierMode::kAdditive
                                         : ModifierMode::kMultiplicative;
    cfg.additive_shape =
        c.shape == "cubic" ? AdditiveShape::kCubic : AdditiveShape::kLinear;
    configs.push_back(std::move(cfg));
  }
  return configs;
}

std::vector<SchedulerKind> schedulers_of(const Common& c) {
  if (c.schedulers.empty()) {
    return {kAllSchedulers.begin(), kAllSchedulers.end()};
  }
  std::vector<SchedulerKind> out;
  for (const std::string& s : c.schedulers) out.push_back(parse_scheduler(s));
  return out;
}

std::ofstream open_file(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slotted scheduling simulator with token bucket rate bounds"};
  app.require_subcommand(1);

  Common run_opts;
  std::string tbrm_flag = "both";
  auto* run_cmd = app.add_subcommand("run", "regular runs and metric CSVs");
  add_common(run_cmd, run_opts, true);
  run_cmd->add_option("--tbrm", tbrm_flag, "on, off or both")
      ->check(CLI::IsMember({"on", "off", "both"}));

  Common sigma_opts;
  std::vector<double> multipliers;
  auto* sigma_cmd =
      app.add_subcommand("sweep-sigma", "m1 versus the burst multiplier");
  add_common(sigma_cmd, sigma_opts, true);
  sigma_cmd->add_option("--multipliers", multipliers,
                        "sigma = i tau rho for each i (default 10 points "
                        "from 1e-2 to 1e4)")
      ->delimiter(',');

  Common tau_opts;
  std::vector<double> taus;
  auto* tau_cmd = app.add_subcommand("sweep-tau", "m1 versus the slot length");
  add_common(tau_cmd, tau_opts, true);
  tau_cmd->add_option("--taus", taus, "slot lengths in seconds")
      ->delimiter(',');

  Common metrics_opts;
  std::string rates_path;
  auto* metrics_cmd =
      app.add_subcommand("metrics", "recompute metrics from a rate CSV");
  add_common(metrics_cmd, metrics_opts, false);
  metrics_cmd->add_option("--rates", rates_path, "rate CSV from 'run'")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      RegularOptions opts;
      opts.schedulers = schedulers_of(run_opts);
      if (tbrm_flag == "on") opts.tbrm_modes = {true};
      if (tbrm_flag == "off") opts.tbrm_modes = {false};
      opts.out_dir = run_opts.out;
      run_regular(load_all(run_opts), opts);
    } else if (*sigma_cmd) {
      if (sigma_cmd->count("--multipliers") == 0) {
        multipliers = default_sigma_multipliers();
      }
      const auto rows = sweep_sigma(load_all(sigma_opts), multipliers,
                                    schedulers_of(sigma_opts));
      auto out = open_file(sigma_opts.out);
      write_sweep_csv(out, rows, "sigma_multiplier");
    } else if (*tau_cmd) {
      if (tau_cmd->count("--taus") == 0) taus = default_taus();
      const auto rows =
          sweep_tau(load_all(tau_opts), taus, schedulers_of(tau_opts));
      auto out = open_file(tau_opts.out);
      write_sweep_csv(out, rows, "tau_s");
    } else if (*metrics_cmd) {
      if (metrics_opts.scenarios.size() != 1) {
        throw std::invalid_argument("metrics needs exactly one --scenario");
      }
      const SimConfig cfg = load_all(metrics_opts).front();
      std::ifstream in(rates_path, std::ios::binary);
      if (!in) throw std::runtime_error("cannot open " + rates_path);
      const auto rates = read_rate_csv(in, rates_path);
      if (rates.size() != cfg.num_users()) {
        throw std::invalid_argument(
            rates_path + " has " + std::to_string(rates.size()) +
            " users, scenario has " + std::to_string(cfg.num_users()));
      }
      const MetricGrids grids = MetricGrids::defaults();
      std::vector<MetricsReport> reports;
      for (std::size_t n = 0; n < rates.size(); ++n) {
        reports.push_back(compute_report({rates[n], cfg.tau, cfg.constraint(n)},
                                         grids, cfg.warmup));
      }
      if (metrics_opts.out.empty()) {
        write_report_csv(std::cout, grids, reports);
      } else {
        auto out = open_file(metrics_opts.out);
        write_report_csv(out, grids, reports);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
