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


#include "tbrm/num_solver.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "approx.hpp"
#include "doctest.h"
#include "oracles.hpp"

namespace tbrm {
namespace {

std::vector<UtilityEntry> linear(std::initializer_list<double> w) {
  std::vector<UtilityEntry> out;
  for (double x : w) out.push_back({UtilityForm::kLinear, x});
  return out;
}

std::vector<UtilityEntry> reciprocal(std::initializer_list<double> w) {
  std::vector<UtilityEntry> out;
  for (double x : w) out.push_back({UtilityForm::kReciprocal, x});
  return out;
}

std::vector<double> weights_of(const std::vector<UtilityEntry>& u) {
  std::vector<double> w;
  for (const auto& e : u) w.push_back(e.weight);
  return w;
}

TEST_SUITE("num_solver") {

TEST_CASE("single weighted user takes everything") {
  RateRegion region({1.0, 1.0}, 0.0);
  const auto a = solve_num(region, linear({1.0, 0.0}));
  CHECK(a.rates[0] == testing::rel(1.0).epsilon(1e-6));
  CHECK(std::abs(a.rates[1]) <= 1e-6);
  CHECK_FALSE(a.degenerate);
}

TEST_CASE("equal weights meet at the circle tangent") {
  RateRegion region({1.0, 1.0}, 0.0);
  const auto a = solve_num(region, linear({1.0, 1.0}));
  CHECK(a.rates[0] == testing::rel(std::sqrt(0.5)).epsilon(1e-4));
  CHECK(a.rates[1] == testing::rel(std::sqrt(0.5)).epsilon(1e-4));
}

TEST_CASE("simplex optimum is a vertex") {
  RateRegion region({1.0, 1.0}, -1.0);
  const auto a = solve_num(region, linear({2.0, 1.0}));
  CHECK(a.rates[0] == testing::rel(1.0).epsilon(1e-6));
  CHECK(std::abs(a.rates[1]) < 1e-6);
}

TEST_CASE("grid oracle examples") {
  RateRegion circle({1.0, 1.0}, 0.0);
  const double step = std::numbers::pi / 2 / 999;
  auto a = grid_oracle_solve(circle, linear({1.0, 0.0}), 1000);
  CHECK(a.rates[0] == testing::rel(1.0));
  CHECK(a.rates[1] == 0.0);
  a = grid_oracle_solve(circle, linear({1.0, 1.0}), 1000);
  CHECK(std::abs(a.rates[0] - std::sqrt(0.5)) <= step);
  CHECK(std::abs(a.rates[1] - std::sqrt(0.5)) <= step);
  a = grid_oracle_solve(circle, reciprocal({1.0, 1.0}), 1000);
  CHECK(std::abs(a.rates[0] - std::sqrt(0.5)) <= step);
  CHECK(std::abs(a.rates[1] - std::sqrt(0.5)) <= step);
}

TEST_CASE("grid oracle argument checks") {
  RateRegion five(std::vector<double>(5, 1.0), 0.0);
  CHECK_THROWS_AS(
      grid_oracle_solve(five, linear({1, 1, 1, 1, 1}), 100),
      UnsupportedDimension);
  RateRegion two({1.0, 1.0}, 0.0);
  CHECK_THROWS_AS(grid_oracle_solve(two, linear({1, 1}), 99),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_num(two, linear({1.0})), std::invalid_argument);
}

TEST_CASE("all-zero weights are flagged") {
  RateRegion region({1.0, 2.0, 3.0}, 0.5);
  const auto a = solve_num(region, linear({0.0, 0.0, 0.0}));
  CHECK(a.degenerate);
  CHECK(a.objective == 0.0);
  REQUIRE(a.rates.size() == 3);
  for (std::size_t n = 0; n < 3; ++n) {
    CHECK(a.rates[n] >= 0.0);
    CHECK(a.rates[n] <= region.cmax(n));
  }
}

TEST_CASE("solver result is a mapped point") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> w(0.0, 10.0);
  for (int trial = 0; trial < 30; ++trial) {
    RateRegion region({1.0 + trial % 3, 2.0, 0.5, 4.0}, -0.5);
    auto u = linear({w(rng), w(rng), w(rng), w(rng)});
    const auto a = solve_num(region, u);
    const auto again = region.point_from_angles(a.angles);
    for (std::size_t n = 0; n < 4; ++n) {
      CHECK(std::abs(a.rates[n] - again[n]) <= 1e-6 * region.cmax(n));
    }
    CHECK(a.objective ==
          testing::rel(testing::reference_objective(
                              a.rates, weights_of(u), false, 0.0))
              .epsilon(1e-12));
  }
}

TEST_CASE("matches the grid oracle on small instances") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> w(0.0, 10.0);
  std::uniform_real_distribution<double> cap(0.5, 2.0);
  const double gammas[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n_users = 2 + trial % 2;
    std::vector<double> cmax(n_users);
    for (double& c : cmax) c = cap(rng);
    RateRegion region(cmax, gammas[trial % 5]);
    const auto form =
        trial % 4 == 3 ? UtilityForm::kReciprocal : UtilityForm::kLinear;
    std::vector<UtilityEntry> u(n_users);
    for (auto& e : u) e = {form, w(rng)};
    const auto got = solve_num(region, u);
    const auto want = grid_oracle_solve(region, u, 200);
    CHECK(got.objective >=
          want.objective - 1e-3 * std::abs(want.objective));
  }
}

TEST_CASE("scaling the weights keeps the argmax") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> w(0.1, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    RateRegion region({1.0, 1.5, 0.7}, trial % 2 ? 0.0 : -0.5);
    std::vector<UtilityEntry> u = linear({w(rng), w(rng), w(rng)});
    const auto a = solve_num(region, u);
    for (double scale : {0.25, 8.0, 1024.0}) {
      auto scaled = u;
      for (auto& e : scaled) e.weight *= scale;
      const auto b = solve_num(region, scaled);
      for (std::size_t n = 0; n < 3; ++n) {
        CHECK(std::abs(a.rates[n] - b.rates[n]) <=
              1e-6 * std::max(std::abs(a.rates[n]), region.cmax(n) * 1e-3));
      }
    }
  }
}

TEST_CASE("raising one linear weight never lowers the objective") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> w(0.0, 5.0);
  for (int trial = 0; trial < 30; ++trial) {
    RateRegion region({1.0, 2.0, 1.5}, 0.5);
    auto u = linear({w(rng), w(rng), w(rng)});
    const auto before = solve_num(region, u);
    u[trial % 3].weight += 1.0 + w(rng);
    const auto after = solve_num(region, u);
    CHECK(after.objective >= before.objective * (1 - 1e-9));
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace tbrm
