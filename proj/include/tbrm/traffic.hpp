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

// Per-slot arrival volumes (bits) for the traffic families of the
// scenarios: two superimposed sines (slow or fast), superposed Pareto
// ON/OFF sources, video frame traces and saturating sources.
//
// Every generator is a deterministic function of its parameters, seed and
// slot index.

#ifndef TBRM_TRAFFIC_HPP_
#define TBRM_TRAFFIC_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tbrm {

class InputFormatError : public std::runtime_error {
 public:
  InputFormatError(const std::string& source, std::size_t line,
                   const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class TrafficKind { kSine2VS, kSine2F, kSelfSimilar, kTrace, kSAT };

std::string_view to_string(TrafficKind kind);
TrafficKind parse_traffic_kind(std::string_view name);

struct SineParams {
  double base_rate = 0.0;  // bit/s
  double amp1 = 0.0;       // bit/s
  double period1 = 60.0;   // s
  double amp2 = 0.0;       // bit/s
  double period2 = 4.0;    // s

  // Slow (VS) or fast (F) profile around `base_rate`: amplitudes 0.3 and
  // 0.1 of the base, periods 60 s / 4 s for VS and 8 s / 4 s for F.
  static SineParams profile(TrafficKind kind, double base_rate);
};

// tau * (base + amp1 sin(2 pi t / period1) + amp2 sin(2 pi t / period2)),
// floored at 0.
double sine2_arrivals(const SineParams& p, double t_seconds, double tau);

struct ParetoOnOffParams {
  int sources = 16;
  double shape = 1.4;
  double on_rate = 0.0;   // bit/s per ON source
  double mean_on = 0.4;   // s
  double mean_off = 1.2;  // s

  // on_rate such that the long-run mean is `mean_rate`.
  static ParetoOnOffParams with_mean_rate(double mean_rate);
  double mean_rate() const {
    return sources * on_rate * mean_on / (mean_on + mean_off);
  }
};

// Superposition of Pareto ON/OFF sources. Queries must be made in
// non-decreasing slot order for O(1) amortized cost; going back replays
// from the seed.
class ParetoOnOffAggregate {
 public:
  // Throws std::invalid_argument for shape <= 1 or non-positive means.
  ParetoOnOffAggregate(const ParetoOnOffParams& params, std::uint64_t seed);

  // Number of sources ON at the start of the slot.
  int active_sources(std::int64_t slot, double tau);
  // tau * on_rate * active_sources.
  double bits(std::int64_t slot, double tau);

 private:
  struct Source {
    std::mt19937_64 rng;
    bool on = false;
    double next_switch = 0.0;
  };
  void reset();
  double draw(Source& s, bool on);

  ParetoOnOffParams params_;
  std::uint64_t seed_;
  double scale_on_;
  double scale_off_;
  double last_time_ = -1.0;
  std::vector<Source> sources_;
};

double selfsimilar_arrivals(const ParetoOnOffParams& params,
                            std::uint64_t seed, std::int64_t slot,
                            double tau);

// Keeps the queue at 3 cmax tau after arrivals so that it stays above
// 2 cmax tau after the next slot's service.
double sat_arrivals(double queue_bits, double cmax, double tau);

// Per-slot bit volumes. File form: optional "# tau=<seconds>" header line,
// then one non-negative decimal integer per line.
struct Trace {
  std::optional<double> tau;
  std::vector<std::int64_t> slots;
};

Trace parse_trace(std::istream& in, const std::string& source_name);
Trace load_trace(const std::string& path);
void write_trace(std::ostream& out, const Trace& trace);
// Cycles through the trace. Throws std::invalid_argument on an empty one.
double trace_arrivals(const Trace& trace, std::int64_t slot);

// Stand-in for an MPEG video trace: 25 frames/s in a 12-frame IBBP group
// of pictures, lognormal frame sizes with a slowly varying scene level,
// scaled to `mean_rate` on average and binned into slots of `tau`.
Trace generate_video_trace(double mean_rate, double tau, std::size_t slots,
                           std::uint64_t seed);

struct TrafficSpec {
  TrafficKind kind = TrafficKind::kSAT;
  SineParams sine;
  ParetoOnOffParams pareto;
  // Trace kind: a file, or a generated video trace with this mean rate.
  std::string trace_path;
  double trace_mean_rate = 0.0;
  std::uint64_t seed = 1;

  double mean_rate() const;  // NaN for SAT
};

// One flow's arrival source, bound to a slot length.
class ArrivalProcess {
 public:
  // `horizon` sizes generated video traces.
  ArrivalProcess(const TrafficSpec& spec, double cmax, double tau,
                 std::size_t horizon);

  // Bits arriving during `slot`, given the queue left after that slot's
  // service (only SAT looks at it).
  double arrivals(std::int64_t slot, double queue_after_service);

 private:
  struct Sine {
    SineParams params;
  };
  struct Saturating {
    double cmax;
  };
  using Source =
      std::variant<Sine, ParetoOnOffAggregate, Trace, Saturating>;

  Source source_;
  double tau_;
};

// splitmix64 step; used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace tbrm

#endif  // TBRM_TRAFFIC_HPP_
