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

#include "tbrm/scenario.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace tbrm {
namespace {

constexpr double kMbps = 1e6;

struct Entry {
  std::string value;
  std::size_t line = 0;
};

struct Section {
  std::map<std::string, Entry> values;
  std::size_t line = 0;
};

struct Document {
  std::string source;
  Section global;
  std::vector<Section> users;
};

const std::set<std::string>& global_keys() {
  static const std::set<std::string> keys = {
      "name",  "tau",  "horizon",   "seed",           "warmup",
      "scheduler", "tbrm", "tbrm_mode", "additive_shape", "gamma",
      "cmax"};
  return keys;
}

const std::set<std::string>& user_keys() {
  static const std::set<std::string> keys = {
      "traffic",      "rho_g",        "rho_M",      "cmax",
      "mean_rate",    "delay_bound",  "violation_prob",
      "sigma_g_mult", "sigma_M_mult", "trace",      "sources",
      "shape",        "mean_on",      "mean_off",   "period1",
      "period2",      "amp1",         "amp2"};
  return keys;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string where(const std::string& source, std::size_t line) {
  return line > 0 ? source + ":" + std::to_string(line) : source;
}

[[noreturn]] void fail(const std::string& source, std::size_t line,
                       const std::string& msg) {
  throw ScenarioError(where(source, line) + ": " + msg);
}

void put(Document& doc, Section& sec, bool is_user, const std::string& key,
         std::string value, std::size_t line) {
  const auto& allowed = is_user ? user_keys() : global_keys();
  if (!allowed.count(key)) {
    fail(doc.source, line,
         "unknown field '" + key + "'" + (is_user ? " in [user]" : ""));
  }
  if (sec.values.count(key)) {
    fail(doc.source, line, "field '" + key + "' given twice");
  }
  sec.values[key] = {std::move(value), line};
}

Document parse_key_values(std::string_view text, const std::string& source) {
  Document doc;
  doc.source = source;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  Section* current = &doc.global;
  bool in_user = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos
                                      ? std::string_view(raw)
                                      : std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line != "[user]") fail(source, line_no, "unknown section " + line);
      doc.users.emplace_back();
      doc.users.back().line = line_no;
      current = &doc.users.back();
      in_user = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(source, line_no, "expected 'key = value'");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) fail(source, line_no, "missing field name");
    if (value.empty()) fail(source, line_no, "field '" + key + "' is empty");
    put(doc, *current, in_user, key, value, line_no);
  }
  return doc;
}

std::string json_scalar(const nlohmann::json& v, const std::string& source,
                        const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "on" : "off";
  if (v.is_number()) return v.dump();
  fail(source, 0, "field '" + key + "' must be a string or number");
}

Document parse_json(std::string_view text, const std::string& source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(source, 0, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(source, 0, "top level must be an object");
  Document doc;
  doc.source = source;
  for (const auto& [key, value] : j.items()) {
    if (key == "users") continue;
    put(doc, doc.global, false, key, json_scalar(value, source, key), 0);
  }
  if (j.contains("users")) {
    if (!j["users"].is_array()) fail(source, 0, "'users' must be an array");
    for (const auto& u : j["users"]) {
      if (!u.is_object()) fail(source, 0, "each user must be an object");
      doc.users.emplace_back();
      for (const auto& [key, value] : u.items()) {
        put(doc, doc.users.back(), true, key, json_scalar(value, source, key),
            0);
      }
    }
  }
  return doc;
}

class Reader {
 public:
  Reader(const Document& doc, const Section& sec, std::string context)
      : doc_(doc), sec_(sec), context_(std::move(context)) {}

  bool has(const std::string& key) const { return sec_.values.count(key) > 0; }

  std::size_t line_of(const std::string& key) const {
    auto it = sec_.values.find(key);
    return it == sec_.values.end() ? sec_.line : it->second.line;
  }

  [[noreturn]] void error(const std::string& key,
                          const std::string& msg) const {
    fail(doc_.source, line_of(key), context_ + "field '" + key + "': " + msg);
  }

  std::string text(const std::string& key) const {
    auto it = sec_.values.find(key);
    if (it == sec_.values.end()) error(key, "missing");
    return it->second.value;
  }

  std::optional<double> number_opt(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    const std::string s = text(key);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      error(key, "expected a number, got '" + s + "'");
    }
    return v;
  }

  double number(const std::string& key) const {
    auto v = number_opt(key);
    if (!v) error(key, "missing");
    return *v;
  }

  double number(const std::string& key, double fallback) const {
    return number_opt(key).value_or(fallback);
  }

  double positive(const std::string& key, double fallback) const {
    const double v = number(key, fallback);
    if (!(v > 0.0)) error(key, "must be > 0");
    return v;
  }

  std::uint64_t count(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string s = text(key);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      error(key, "expected a non-negative integer, got '" + s + "'");
    }
    return v;
  }

  template <typename F>
  auto parsed(const std::string& key, F&& parse) const {
    try {
      return parse(text(key));
    } catch (const std::invalid_argument& e) {
      error(key, e.what());
    }
  }

 private:
  const Document& doc_;
  const Section& sec_;
  std::string context_;
};

bool parse_switch(const std::string& s) {
  if (s == "on" || s == "true" || s == "1") return true;
  if (s == "off" || s == "false" || s == "0") return false;
  throw std::invalid_argument("expected on or off");
}

ModifierMode parse_mode(const std::string& s) {
  if (s == "multiplicative") return ModifierMode::kMultiplicative;
  if (s == "additive") return ModifierMode::kAdditive;
  throw std::invalid_argument("expected multiplicative or additive");
}

AdditiveShape parse_shape(const std::string& s) {
  if (s == "linear") return AdditiveShape::kLinear;
  if (s == "cubic") return AdditiveShape::kCubic;
  throw std::invalid_argument("expected linear or cubic");
}

UserConfig build_user(const Document& doc, const Section& sec,
                      std::size_t index, std::optional<double> default_cmax,
                      const std::string& base_dir, double& cmax_out,
                      std::vector<std::string>& warnings) {
  const std::string context = "user " + std::to_string(index + 1) + ": ";
  Reader r(doc, sec, context);
  UserConfig u;

  if (r.has("cmax")) {
    cmax_out = r.positive("cmax", 0.0) * kMbps;
  } else if (default_cmax) {
    cmax_out = *default_cmax;
  } else {
    r.error("cmax", "missing (and no default cmax)");
  }

  const TrafficKind kind = r.parsed("traffic", parse_traffic_kind);
  double rho_g = r.number("rho_g") * kMbps;
  double rho_M = r.number("rho_M") * kMbps;
  if (rho_g < 0.0) r.error("rho_g", "must be >= 0");
  if (rho_M < 0.0) r.error("rho_M", "must be >= 0");
  if (rho_g == 0.0 && rho_M == 0.0) {
    rho_M = cmax_out;
    warnings.push_back(where(doc.source, sec.line) + ": " + context +
                       "bounds [0, 0] treated as unconstrained");
  }
  if (rho_M < cmax_out && rho_g > rho_M) {
    r.error("rho_g", "exceeds rho_M");
  }
  if (rho_g > cmax_out) r.error("rho_g", "exceeds cmax");
  u.rho_g = rho_g;
  u.rho_M = rho_M;
  u.delay_bound = r.positive("delay_bound", u.delay_bound);
  u.violation_prob = r.number("violation_prob", u.violation_prob);
  if (!(u.violation_prob > 0.0 && u.violation_prob < 1.0)) {
    r.error("violation_prob", "must be in (0, 1)");
  }
  u.sigma_g_mult = r.positive("sigma_g_mult", u.sigma_g_mult);
  u.sigma_M_mult = r.positive("sigma_M_mult", u.sigma_M_mult);

  const bool bounded = rho_g > 0.0 || rho_M < cmax_out;
  auto mean_rate = [&](double fallback) {
    if (r.has("mean_rate")) {
      const double m = r.number("mean_rate") * kMbps;
      if (m < 0.0) r.error("mean_rate", "must be >= 0");
      return m;
    }
    if (!bounded) r.error("mean_rate", "required for an unconstrained user");
    return fallback;
  };

  TrafficSpec& t = u.traffic;
  t.kind = kind;
  switch (kind) {
    case TrafficKind::kSine2VS:
    case TrafficKind::kSine2F: {
      const double base = mean_rate(0.5 * (rho_g + rho_M));
      t.sine = SineParams::profile(kind, base);
      t.sine.amp1 = r.number("amp1", 0.3) * base;
      t.sine.amp2 = r.number("amp2", 0.1) * base;
      t.sine.period1 = r.positive("period1", t.sine.period1);
      t.sine.period2 = r.positive("period2", t.sine.period2);
      break;
    }
    case TrafficKind::kSelfSimilar: {
      t.pareto = ParetoOnOffParams::with_mean_rate(mean_rate(0.7 * rho_M));
      const double target = t.pareto.mean_rate();
      t.pareto.sources = static_cast<int>(r.count("sources", 16));
      if (t.pareto.sources < 1) r.error("sources", "must be >= 1");
      t.pareto.shape = r.number("shape", t.pareto.shape);
      if (!(t.pareto.shape > 1.0)) r.error("shape", "must be > 1");
      t.pareto.mean_on = r.positive("mean_on", t.pareto.mean_on);
      t.pareto.mean_off = r.positive("mean_off", t.pareto.mean_off);
      t.pareto.on_rate = target * (t.pareto.mean_on + t.pareto.mean_off) /
                         (t.pareto.mean_on * t.pareto.sources);
      break;
    }
    case TrafficKind::kTrace:
      if (r.has("trace")) {
        std::filesystem::path p = r.text("trace");
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        t.trace_path = p.string();
      } else {
        t.trace_mean_rate = mean_rate(0.5 * (rho_g + rho_M));
      }
      break;
    case TrafficKind::kSAT:
      break;
  }
  return u;
}

SimConfig build(const Document& doc, const std::string& base_dir) {
  Reader g(doc, doc.global, "");
  SimConfig c;
  c.name = g.has("name") ? g.text("name") : doc.source;
  c.tau = g.positive("tau", c.tau);
  c.horizon = g.count("horizon", c.horizon);
  c.seed = g.count("seed", c.seed);
  c.warmup = g.count("warmup", c.warmup);
  if (g.has("scheduler")) c.scheduler = g.parsed("scheduler", parse_scheduler);
  if (g.has("tbrm")) c.tbrm_enabled = g.parsed("tbrm", parse_switch);
  if (g.has("tbrm_mode")) c.tbrm_mode = g.parsed("tbrm_mode", parse_mode);
  if (g.has("additive_shape")) {
    c.additive_shape = g.parsed("additive_shape", parse_shape);
  }
  const double gamma = g.number("gamma");
  if (gamma < -1.0 || gamma > 1.0) g.error("gamma", "must be in [-1, 1]");
  std::optional<double> default_cmax;
  if (g.has("cmax")) default_cmax = g.positive("cmax", 0.0) * kMbps;

  if (doc.users.empty()) fail(doc.source, 0, "no [user] sections");
  std::vector<double> cmax(doc.users.size());
  for (std::size_t n = 0; n < doc.users.size(); ++n) {
    c.users.push_back(build_user(doc, doc.users[n], n, default_cmax, base_dir,
                                 cmax[n], c.warnings));
  }
  c.region = RateRegion(std::move(cmax), gamma);
  try {
    validate(c);
  } catch (const std::invalid_argument& e) {
    fail(doc.source, 0, e.what());
  }
  return c;
}

// Bundled scenarios. Cmax puts the midpoints of the users' bounds on the
// region boundary: Cmax = (sum m^p)^(1/p) with p = 2 / (1 - gamma).
constexpr std::array<std::string_view, kNumPresets> kPresets = {
    "# Five saturated users.\n"
    "name = scenario1\ngamma = -0.5\ncmax = 828\n\n"
    "[user]\ntraffic = SAT\nrho_g = 150\nrho_M = 250\n\n"
    "[user]\ntraffic = SAT\nrho_g = 250\nrho_M = 350\n\n"
    "[user]\ntraffic = SAT\nrho_g = 350\nrho_M = 400\n\n"
    "[user]\ntraffic = SAT\nrho_g = 150\nrho_M = 350\n\n"
    "[user]\ntraffic = SAT\nrho_g = 50\nrho_M = 100\n",

    "# Video, self-similar, saturated and slow sine traffic.\n"
    "name = scenario2\ngamma = -0.5\ncmax = 681\n\n"
    "[user]\ntraffic = Trace   # Starwars stand-in\nrho_g = 50\nrho_M = 150\n\n"
    "[user]\ntraffic = Trace   # Alice stand-in\nrho_g = 250\nrho_M = 350\n\n"
    "[user]\ntraffic = SelfSimilar\nrho_g = 150\nrho_M = 350\n\n"
    "[user]\ntraffic = SAT\nrho_g = 150\nrho_M = 350\n\n"
    "[user]\ntraffic = Sine2VS\nrho_g = 50\nrho_M = 120\n",

    "# As scenario 2 with a fast sine in place of the second video.\n"
    "name = scenario3\ngamma = -0.5\ncmax = 681\n\n"
    "[user]\ntraffic = Trace   # Starwars stand-in\nrho_g = 50\nrho_M = 150\n\n"
    "[user]\ntraffic = Sine2F\nrho_g = 250\nrho_M = 350\n\n"
    "[user]\ntraffic = SelfSimilar\nrho_g = 150\nrho_M = 350\n\n"
    "[user]\ntraffic = SAT\nrho_g = 150\nrho_M = 350\n\n"
    "[user]\ntraffic = Sine2VS\nrho_g = 50\nrho_M = 120\n",

    "# Slow sines only.\n"
    "name = scenario4\ngamma = -0.5\ncmax = 771\n\n"
    "[user]\ntraffic = Sine2VS\nrho_g = 150\nrho_M = 250\n\n"
    "[user]\ntraffic = Sine2VS\nrho_g = 150\nrho_M = 250\n\n"
    "[user]\ntraffic = Sine2VS\nrho_g = 250\nrho_M = 300\n\n"
    "[user]\ntraffic = Sine2VS\nrho_g = 150\nrho_M = 350\n\n"
    "[user]\ntraffic = Sine2VS\nrho_g = 50\nrho_M = 400\n",

    "# Slow sines plus one unconstrained self-similar user.\n"
    "name = scenario5\ngamma = -0.5\ncmax = 771\n\n"
    "[user]\ntraffic = Sine2VS\nrho_g = 150\nrho_M = 250\n\n"
    "[user]\ntraffic = Sine2VS\nrho_g = 150\nrho_M = 250\n\n"
    "[user]\ntraffic = Sine2VS\nrho_g = 250\nrho_M = 300\n\n"
    "[user]\ntraffic = Sine2VS\nrho_g = 150\nrho_M = 350\n\n"
    "[user]\ntraffic = SelfSimilar\nrho_g = 0\nrho_M = 0\nmean_rate = 100\n",
};

}  // namespace

SimConfig parse_scenario(std::string_view text, const std::string& source_name,
                         const std::string& base_dir) {
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool is_json = first != std::string_view::npos && text[first] == '{';
  const Document doc = is_json ? parse_json(text, source_name)
                               : parse_key_values(text, source_name);
  return build(doc, base_dir);
}

SimConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path + ": cannot open scenario file");
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_scenario(ss.str(), path, dir.empty() ? "." : dir.string());
}

std::string_view preset_text(int index) {
  if (index < 1 || index > kNumPresets) {
    throw std::invalid_argument("no bundled scenario " + std::to_string(index));
  }
  return kPresets[static_cast<std::size_t>(index - 1)];
}

SimConfig load_preset(int index) {
  return parse_scenario(preset_text(index),
                        "scenario" + std::to_string(index));
}

SimConfig resolve_scenario(const std::string& name_or_path) {
  if (std::filesystem::exists(name_or_path)) return load_scenario(name_or_path);
  std::string_view key = name_or_path;
  if (key.starts_with("scenario")) key.remove_prefix(8);
  if (key.size() == 1 && key[0] >= '1' && key[0] <= '0' + kNumPresets) {
    return load_preset(key[0] - '0');
  }
  throw ScenarioError(name_or_path + ": no such scenario file or preset");
}

}  // namespace tbrm
