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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "approx.hpp"
#include "doctest.h"

namespace tbrm {
namespace {

Trace parse(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in, "t.trace");
}

std::size_t error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const InputFormatError& e) {
    CHECK(std::string(e.what()).find("t.trace:") == 0);
    return e.line();
  }
  FAIL("no error for: " << text);
  return 0;
}

TEST_SUITE("traffic") {

TEST_CASE("sine examples") {
  SineParams flat{1e6, 0.0, 60.0, 0.0, 4.0};
  for (double t : {0.0, 0.35, 17.05}) {
    CHECK(sine2_arrivals(flat, t, 0.05) == testing::rel(5e4));
  }
  SineParams p{2e6, 1e6, 60.0, 0.5e6, 4.0};
  CHECK(sine2_arrivals(p, 15.0, 0.05) == testing::rel(1.25e5));
  CHECK(sine2_arrivals(p, 120.0, 0.05) == testing::rel(0.05 * 2e6));
  SineParams deep{1.0, 5.0, 4.0, 0.0, 4.0};
  CHECK(sine2_arrivals(deep, 3.0, 1.0) == 0.0);
}

TEST_CASE("sine mean over whole periods") {
  for (TrafficKind kind : {TrafficKind::kSine2VS, TrafficKind::kSine2F}) {
    const SineParams p = SineParams::profile(kind, 150e6);
    CHECK(p.amp1 == testing::rel(45e6));
    CHECK(p.amp2 == testing::rel(15e6));
    const double tau = 0.05;
    const int slots = static_cast<int>(std::lround(120.0 / tau));
    double sum = 0.0;
    for (int t = 0; t < slots; ++t) sum += sine2_arrivals(p, t * tau, tau);
    CHECK(std::abs(sum / (slots * tau) - 150e6) <= 1e-9 * 150e6);
  }
  CHECK(SineParams::profile(TrafficKind::kSine2VS, 1.0).period1 == 60.0);
  CHECK(SineParams::profile(TrafficKind::kSine2F, 1.0).period1 == 8.0);
}

TEST_CASE("saturating source") {
  CHECK(sat_arrivals(0.0, 400e6, 0.05) == testing::rel(6e7));
  CHECK(sat_arrivals(3 * 400e6 * 0.05, 400e6, 0.05) == 0.0);
  CHECK(sat_arrivals(1e12, 400e6, 0.05) == 0.0);
  // Full service every slot never drains below one slot of capacity.
  const double c = 400e6, tau = 0.05;
  double q = sat_arrivals(0.0, c, tau);
  for (int t = 0; t < 3; ++t) {
    q -= std::min(q, c * tau);
    CHECK(q >= c * tau);
    q += sat_arrivals(q, c, tau);
  }
}

TEST_CASE("trace parsing and wrap") {
  const Trace t = parse("100\n200\n300\n");
  CHECK_FALSE(t.tau.has_value());
  CHECK(trace_arrivals(t, 1) == 200.0);
  CHECK(trace_arrivals(t, 4) == 200.0);
  CHECK(trace_arrivals(t, 0) == 100.0);
  const Trace h = parse("# tau=0.025\n7\n8\n");
  REQUIRE(h.tau.has_value());
  CHECK(*h.tau == 0.025);
  CHECK(h.slots.size() == 2);
  std::ostringstream out;
  write_trace(out, h);
  CHECK(out.str() == "# tau=0.025\n7\n8\n");
  CHECK(parse("5\n\n").slots.size() == 1);
}

TEST_CASE("trace errors name the line") {
  CHECK(error_line("") == 0);
  CHECK(error_line("# tau=0.05\n") == 1);
  CHECK(error_line("1\n2\nx\n") == 3);
  CHECK(error_line("1\n-2\n") == 2);
  CHECK(error_line("1\n2.5\n") == 2);
  CHECK(error_line("1\n# tau=1\n") == 2);
  CHECK(error_line("# rate=1\n1\n") == 1);
  CHECK(error_line("# tau=0\n1\n") == 1);
  CHECK(error_line("1\n\n2\n") == 2);
  CHECK_THROWS_AS(load_trace("/nonexistent/trace.txt"), InputFormatError);
}

TEST_CASE("finer traces are summed into simulation slots") {
  const auto dir = std::filesystem::temp_directory_path() / "tbrm_traffic";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "fine.trace").string();
  {
    std::ofstream f(path);
    f << "# tau=0.025\n1\n2\n3\n4\n5\n";
  }
  TrafficSpec spec;
  spec.kind = TrafficKind::kTrace;
  spec.trace_path = path;
  ArrivalProcess p(spec, 1e6, 0.05, 10);
  CHECK(p.arrivals(0, 0.0) == 3.0);
  CHECK(p.arrivals(1, 0.0) == 7.0);
  CHECK(p.arrivals(2, 0.0) == 3.0);
  CHECK_THROWS_AS(ArrivalProcess(spec, 1e6, 0.06, 10), std::invalid_argument);
}

TEST_CASE("pareto sources are reproducible") {
  ParetoOnOffParams p;
  p.on_rate = 20e6;
  ParetoOnOffAggregate a(p, 99), b(p, 99), c(p, 100);
  bool differs = false;
  for (std::int64_t t = 0; t < 2000; ++t) {
    const double x = a.bits(t, 0.05);
    CHECK(x == b.bits(t, 0.05));
    CHECK(x >= 0.0);
    differs = differs || x != c.bits(t, 0.05);
  }
  CHECK(differs);
  CHECK(selfsimilar_arrivals(p, 99, 1234, 0.05) ==
        ParetoOnOffAggregate(p, 99).bits(1234, 0.05));
  ParetoOnOffParams silent = p;
  silent.on_rate = 0.0;
  ParetoOnOffAggregate s(silent, 1);
  for (std::int64_t t = 0; t < 100; ++t) CHECK(s.bits(t, 0.05) == 0.0);
}

TEST_CASE("pareto argument checks") {
  ParetoOnOffParams p;
  p.shape = 1.0;
  CHECK_THROWS_AS(ParetoOnOffAggregate(p, 1), std::invalid_argument);
  p.shape = 0.5;
  CHECK_THROWS_AS(ParetoOnOffAggregate(p, 1), std::invalid_argument);
  p.shape = 1.4;
  p.mean_on = 0.0;
  CHECK_THROWS_AS(ParetoOnOffAggregate(p, 1), std::invalid_argument);
}

TEST_CASE("pareto long-run mean matches renewal reward") {
  const auto p = ParetoOnOffParams::with_mean_rate(175e6);
  CHECK(p.mean_rate() == testing::rel(175e6));
  const double tau = 0.05;
  const std::int64_t slots = 200000;
  ParetoOnOffAggregate agg(p, 7);
  double sum = 0.0;
  for (std::int64_t t = 0; t < slots; ++t) sum += agg.bits(t, tau);
  const double expected = p.sources * p.on_rate * p.mean_on /
                          (p.mean_on + p.mean_off);
  CHECK(std::abs(sum / (slots * tau) - expected) <= 0.05 * expected);
}

TEST_CASE("generated video trace") {
  const Trace a = generate_video_trace(100e6, 0.05, 4000, 3);
  const Trace b = generate_video_trace(100e6, 0.05, 4000, 3);
  CHECK(a.slots == b.slots);
  REQUIRE(a.slots.size() == 4000);
  double sum = 0.0;
  for (auto v : a.slots) {
    CHECK(v >= 0);
    sum += static_cast<double>(v);
  }
  CHECK(std::abs(sum - 100e6 * 200.0) <= 1.0);
  CHECK(generate_video_trace(100e6, 0.05, 4000, 4).slots != a.slots);
}

TEST_CASE("traffic kind names") {
  CHECK(parse_traffic_kind("Sine2VS") == TrafficKind::kSine2VS);
  CHECK(parse_traffic_kind("sine2-f") == TrafficKind::kSine2F);
  CHECK(parse_traffic_kind("self_similar") == TrafficKind::kSelfSimilar);
  CHECK(parse_traffic_kind("video") == TrafficKind::kTrace);
  CHECK(parse_traffic_kind("SAT") == TrafficKind::kSAT);
  CHECK_THROWS_AS(parse_traffic_kind("poisson"), std::invalid_argument);
}

}  // TEST_SUITE

}  // namespace
}  // namespace tbrm
