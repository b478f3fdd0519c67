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

#include "tbrm/traffic.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>

namespace tbrm {
namespace {

// Uniform in (0, 1], 53 bits.
double unit_open_low(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

// Box-Muller; spelled out so traces do not depend on the standard
// library's distribution implementation.
double standard_normal(std::mt19937_64& rng) {
  const double u1 = unit_open_low(rng);
  const double u2 = unit_open_low(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::int64_t slot_of_time(double seconds, double tau) {
  return static_cast<std::int64_t>(std::floor(seconds / tau + 1e-9));
}

}  // namespace

InputFormatError::InputFormatError(const std::string& source,
                                   std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
      line_(line) {}

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string_view to_string(TrafficKind kind) {
  switch (kind) {
    case TrafficKind::kSine2VS:
      return "Sine2VS";
    case TrafficKind::kSine2F:
      return "Sine2F";
    case TrafficKind::kSelfSimilar:
      return "SelfSimilar";
    case TrafficKind::kTrace:
      return "Trace";
    case TrafficKind::kSAT:
      return "SAT";
  }
  return "?";
}

TrafficKind parse_traffic_kind(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c == '-' || c == '_') continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "sine2vs") return TrafficKind::kSine2VS;
  if (key == "sine2f") return TrafficKind::kSine2F;
  if (key == "selfsimilar") return TrafficKind::kSelfSimilar;
  if (key == "trace" || key == "video") return TrafficKind::kTrace;
  if (key == "sat") return TrafficKind::kSAT;
  throw std::invalid_argument("unknown traffic kind '" + std::string(name) +
                              "'");
}

SineParams SineParams::profile(TrafficKind kind, double base_rate) {
  SineParams p;
  p.base_rate = base_rate;
  p.amp1 = 0.3 * base_rate;
  p.amp2 = 0.1 * base_rate;
  p.period1 = kind == TrafficKind::kSine2F ? 8.0 : 60.0;
  p.period2 = 4.0;
  return p;
}

double sine2_arrivals(const SineParams& p, double t_seconds, double tau) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double rate = p.base_rate +
                      p.amp1 * std::sin(kTwoPi * t_seconds / p.period1) +
                      p.amp2 * std::sin(kTwoPi * t_seconds / p.period2);
  return std::max(0.0, tau * rate);
}

ParetoOnOffParams ParetoOnOffParams::with_mean_rate(double mean_rate) {
  ParetoOnOffParams p;
  p.on_rate = mean_rate * (p.mean_on + p.mean_off) / (p.mean_on * p.sources);
  return p;
}

ParetoOnOffAggregate::ParetoOnOffAggregate(const ParetoOnOffParams& params,
                                           std::uint64_t seed)
    : params_(params), seed_(seed) {
  if (!(params_.shape > 1.0)) {
    throw std::invalid_argument(
        "Pareto shape must exceed 1 for a finite mean");
  }
  if (params_.sources < 1) {
    throw std::invalid_argument("need at least one Pareto source");
  }
  if (!(params_.mean_on > 0.0) || !(params_.mean_off > 0.0)) {
    throw std::invalid_argument("Pareto ON/OFF means must be positive");
  }
  if (!(params_.on_rate >= 0.0)) {
    throw std::invalid_argument("Pareto ON rate must be >= 0");
  }
  // mean = shape * scale / (shape - 1)
  scale_on_ = params_.mean_on * (params_.shape - 1.0) / params_.shape;
  scale_off_ = params_.mean_off * (params_.shape - 1.0) / params_.shape;
  reset();
}

void ParetoOnOffAggregate::reset() {
  sources_.clear();
  sources_.reserve(params_.sources);
  const double p_on = params_.mean_on / (params_.mean_on + params_.mean_off);
  for (int i = 0; i < params_.sources; ++i) {
    Source s;
    s.rng.seed(mix_seed(seed_ ^ mix_seed(static_cast<std::uint64_t>(i))));
    s.on = unit_open_low(s.rng) <= p_on;
    s.next_switch = draw(s, s.on);
    sources_.push_back(std::move(s));
  }
  last_time_ = -1.0;
}

double ParetoOnOffAggregate::draw(Source& s, bool on) {
  const double scale = on ? scale_on_ : scale_off_;
  return scale * std::pow(unit_open_low(s.rng), -1.0 / params_.shape);
}

int ParetoOnOffAggregate::active_sources(std::int64_t slot, double tau) {
  const double t = static_cast<double>(slot) * tau;
  if (t < last_time_) reset();
  last_time_ = t;
  int active = 0;
  for (Source& s : sources_) {
    while (s.next_switch <= t) {
      s.on = !s.on;
      s.next_switch += draw(s, s.on);
    }
    active += s.on ? 1 : 0;
  }
  return active;
}

double ParetoOnOffAggregate::bits(std::int64_t slot, double tau) {
  return tau * params_.on_rate * active_sources(slot, tau);
}

double selfsimilar_arrivals(const ParetoOnOffParams& params,
                            std::uint64_t seed, std::int64_t slot,
                            double tau) {
  ParetoOnOffAggregate aggregate(params, seed);
  return aggregate.bits(slot, tau);
}

double sat_arrivals(double queue_bits, double cmax, double tau) {
  return std::max(0.0, 2.0 * cmax * tau - queue_bits + cmax * tau);
}

Trace parse_trace(std::istream& in, const std::string& source_name) {
  Trace trace;
  std::string line;
  std::size_t line_no = 0;
  bool seen_blank = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      seen_blank = true;
      continue;
    }
    if (seen_blank) {
      throw InputFormatError(source_name, line_no - 1, "blank line in trace");
    }
    if (line[0] == '#') {
      if (line_no != 1) {
        throw InputFormatError(source_name, line_no,
                               "header is only allowed on the first line");
      }
      constexpr std::string_view kPrefix = "# tau=";
      if (line.compare(0, kPrefix.size(), kPrefix) != 0) {
        throw InputFormatError(source_name, line_no,
                               "expected header '# tau=<seconds>'");
      }
      const char* first = line.data() + kPrefix.size();
      const char* last = line.data() + line.size();
      double tau = 0.0;
      auto [ptr, ec] = std::from_chars(first, last, tau);
      if (ec != std::errc() || ptr != last || !(tau > 0.0) ||
          !std::isfinite(tau)) {
        throw InputFormatError(source_name, line_no, "invalid tau in header");
      }
      trace.tau = tau;
      continue;
    }
    std::int64_t bits = 0;
    const char* first = line.data();
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, bits);
    if (ec != std::errc() || ptr != last || bits < 0 || line[0] == '+') {
      throw InputFormatError(source_name, line_no,
                             "expected a non-negative integer, got '" + line +
                                 "'");
    }
    trace.slots.push_back(bits);
  }
  if (trace.slots.empty()) {
    throw InputFormatError(source_name, line_no, "trace has no slots");
  }
  return trace;
}

Trace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputFormatError(path, 0, "cannot open trace file");
  return parse_trace(in, path);
}

void write_trace(std::ostream& out, const Trace& trace) {
  if (trace.tau) {
    std::array<char, 64> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(),
                                   *trace.tau);
    out << "# tau=" << std::string_view(buf.data(), ptr - buf.data()) << '\n';
  }
  for (std::int64_t bits : trace.slots) out << bits << '\n';
}

double trace_arrivals(const Trace& trace, std::int64_t slot) {
  if (trace.slots.empty()) throw std::invalid_argument("empty trace");
  const auto n = static_cast<std::int64_t>(trace.slots.size());
  const std::int64_t i = ((slot % n) + n) % n;
  return static_cast<double>(trace.slots[static_cast<std::size_t>(i)]);
}

Trace generate_video_trace(double mean_rate, double tau, std::size_t slots,
                           std::uint64_t seed) {
  if (!(mean_rate >= 0.0) || !(tau > 0.0) || slots == 0) {
    throw std::invalid_argument("video trace needs rate >= 0, tau > 0, slots");
  }
  constexpr double kFps = 25.0;
  // IBBPBBPBBPBB with I:P:B = 5:2.5:1.
  constexpr std::array<double, 12> kGop = {5.0, 1.0, 1.0, 2.5, 1.0, 1.0,
                                           2.5, 1.0, 1.0, 2.5, 1.0, 1.0};
  constexpr double kSceneMemory = 0.995;
  constexpr double kSceneSpread = 0.4;
  constexpr double kFrameSpread = 0.3;

  const double duration = static_cast<double>(slots) * tau;
  const auto frames = static_cast<std::size_t>(std::floor(duration * kFps));
  std::mt19937_64 rng(mix_seed(seed));
  std::vector<double> sizes(frames);
  double scene = kSceneSpread * standard_normal(rng);
  double total = 0.0;
  for (std::size_t k = 0; k < frames; ++k) {
    scene = kSceneMemory * scene +
            std::sqrt(1.0 - kSceneMemory * kSceneMemory) * kSceneSpread *
                standard_normal(rng);
    sizes[k] = kGop[k % kGop.size()] *
               std::exp(scene + kFrameSpread * standard_normal(rng));
    total += sizes[k];
  }
  const double scale = total > 0.0 ? mean_rate * duration / total : 0.0;

  Trace trace;
  trace.tau = tau;
  std::vector<double> volume(slots, 0.0);
  for (std::size_t k = 0; k < frames; ++k) {
    const std::int64_t s =
        std::min<std::int64_t>(slot_of_time(k / kFps, tau),
                               static_cast<std::int64_t>(slots) - 1);
    volume[static_cast<std::size_t>(s)] += sizes[k] * scale;
  }
  trace.slots.reserve(slots);
  double carry = 0.0;
  for (double v : volume) {
    const double with_carry = v + carry;
    const double whole = std::floor(with_carry);
    carry = with_carry - whole;
    trace.slots.push_back(static_cast<std::int64_t>(whole));
  }
  return trace;
}

double TrafficSpec::mean_rate() const {
  switch (kind) {
    case TrafficKind::kSine2VS:
    case TrafficKind::kSine2F:
      return sine.base_rate;
    case TrafficKind::kSelfSimilar:
      return pareto.mean_rate();
    case TrafficKind::kTrace:
      return trace_mean_rate;
    case TrafficKind::kSAT:
      break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

// Re-bins a trace recorded with slot `from` into slots of `to`, which must
// be an integer multiple of it.
Trace rebin(const Trace& trace, double to, const std::string& name) {
  const double from = trace.tau.value_or(to);
  const double ratio = to / from;
  const double k = std::round(ratio);
  if (k < 1.0 || std::abs(ratio - k) > 1e-9 * k) {
    throw std::invalid_argument("trace " + name + " has slot length " +
                                std::to_string(from) +
                                " s, not a divisor of the simulation tau " +
                                std::to_string(to) + " s");
  }
  if (k == 1.0) return trace;
  const auto group = static_cast<std::size_t>(k);
  Trace out;
  out.tau = to;
  for (std::size_t i = 0; i + group <= trace.slots.size(); i += group) {
    std::int64_t sum = 0;
    for (std::size_t j = 0; j < group; ++j) sum += trace.slots[i + j];
    out.slots.push_back(sum);
  }
  if (out.slots.empty()) {
    throw std::invalid_argument("trace " + name +
                                " is shorter than one simulation slot");
  }
  return out;
}

}  // namespace

ArrivalProcess::ArrivalProcess(const TrafficSpec& spec, double cmax,
                               double tau, std::size_t horizon)
    : source_(Saturating{cmax}), tau_(tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  switch (spec.kind) {
    case TrafficKind::kSine2VS:
    case TrafficKind::kSine2F:
      if (!(spec.sine.period1 > 0.0) || !(spec.sine.period2 > 0.0)) {
        throw std::invalid_argument("sine periods must be positive");
      }
      source_ = Sine{spec.sine};
      break;
    case TrafficKind::kSelfSimilar:
      source_ = ParetoOnOffAggregate(spec.pareto, spec.seed);
      break;
    case TrafficKind::kTrace:
      if (!spec.trace_path.empty()) {
        source_ = rebin(load_trace(spec.trace_path), tau, spec.trace_path);
      } else {
        source_ = generate_video_trace(spec.trace_mean_rate, tau,
                                       std::max<std::size_t>(horizon, 1),
                                       spec.seed);
      }
      break;
    case TrafficKind::kSAT:
      source_ = Saturating{cmax};
      break;
  }
}

double ArrivalProcess::arrivals(std::int64_t slot, double queue_after_service) {
  struct Visitor {
    std::int64_t slot;
    double queue;
    double tau;
    double operator()(const Sine& s) const {
      return sine2_arrivals(s.params, static_cast<double>(slot) * tau, tau);
    }
    double operator()(ParetoOnOffAggregate& p) const {
      return p.bits(slot, tau);
    }
    double operator()(const Trace& t) const { return trace_arrivals(t, slot); }
    double operator()(const Saturating& s) const {
      return sat_arrivals(queue, s.cmax, tau);
    }
  };
  return std::visit(Visitor{slot, queue_after_service, tau_}, source_);
}

}  // namespace tbrm
