// Copyright 2026 The safestop Authors
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

#include "geometry/errors.hpp"
#include "monitor/collision_monitor.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace
{

using safestop::MonitorConfig;
using safestop::ObstacleMap;
using safestop::Vec3;
using safestop::VehicleState;

VehicleState moving(const Vec3 & position, const Vec3 & velocity)
{
  VehicleState s;
  s.position = position;
  s.velocity = velocity;
  return s;
}

TEST(Projection, Examples)
{
  const auto s = moving(Vec3::Zero(), Vec3(1, 0, 0));
  EXPECT_DOUBLE_EQ(safestop::projection(s, Vec3(5, 0, 0)), 1.0);
  EXPECT_DOUBLE_EQ(safestop::projection(s, Vec3(-5, 0, 0)), -1.0);
  EXPECT_NEAR(safestop::projection(s, Vec3(1, 1, 0)), std::sqrt(0.5), 1e-9);
}

TEST(Projection, Degenerate)
{
  EXPECT_THROW(safestop::projection(moving(Vec3::Zero(), Vec3::Zero()), Vec3(1, 0, 0)),
               safestop::DegenerateInput);
  EXPECT_THROW(safestop::projection(moving(Vec3(1, 1, 1), Vec3(1, 0, 0)), Vec3(1, 1, 1)),
               safestop::DegenerateInput);
}

TEST(StopCost, DirectSubstitution)
{
  MonitorConfig cfg;
  EXPECT_NEAR(safestop::stop_cost(moving(Vec3::Zero(), Vec3(1.5, 0, 0)), Vec3(1, 0, 0), cfg),
              0.0, 1e-12);
  const double expected = 0.6 * 2.0 - 0.4 * 0.5 + 1.2 * std::numbers::pi / 2;
  EXPECT_NEAR(safestop::stop_cost(moving(Vec3::Zero(), Vec3(0.5, 0, 0)), Vec3(0, 2, 0), cfg),
              expected, 1e-12);
  EXPECT_NEAR(expected, 2.885, 1e-3);
}

TEST(StopCost, HeadOnCheaperThanOffset)
{
  MonitorConfig cfg;
  const auto s = moving(Vec3::Zero(), Vec3(1, 0, 0));
  const double r = 2.0;
  const double head_on = safestop::stop_cost(s, Vec3(r, 0, 0), cfg);
  const double offset =
    safestop::stop_cost(s, Vec3(r * std::cos(std::numbers::pi / 4), r * std::sin(std::numbers::pi / 4), 0), cfg);
  EXPECT_LT(head_on, offset);
}

TEST(StopCost, BehindIsAContractViolation)
{
  EXPECT_THROW(
    safestop::stop_cost(moving(Vec3::Zero(), Vec3(1, 0, 0)), Vec3(-1, 0.1, 0), MonitorConfig{}),
    safestop::ContractError);
}

TEST(StopCost, Monotonicity)
{
  MonitorConfig cfg;
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> mag(0.1, 3.0);
  std::uniform_real_distribution<double> ang(0.0, std::numbers::pi / 2 - 0.01);
  for (int i = 0; i < 500; ++i) {
    const Vec3 dir = Vec3(u(rng), u(rng), u(rng)).normalized();
    const double speed = mag(rng);
    const double r = mag(rng);
    const double angle = ang(rng);
    // Obstacle at the given distance and angle from the velocity direction.
    Vec3 perp = dir.unitOrthogonal();
    auto at = [&](double dist, double a) {
      return Vec3(dir * std::cos(a) * dist + perp * std::sin(a) * dist);
    };
    const auto s = moving(Vec3(u(rng), u(rng), u(rng)), dir * speed);
    const double base = safestop::stop_cost(s, s.position + at(r, angle), cfg);
    EXPECT_LT(base, safestop::stop_cost(s, s.position + at(r + 0.1, angle), cfg));
    EXPECT_LT(base, safestop::stop_cost(s, s.position + at(r, angle + 0.01), cfg));
    const auto faster = moving(s.position, dir * (speed + 0.1));
    EXPECT_GT(base, safestop::stop_cost(faster, s.position + at(r, angle), cfg));
  }
}

TEST(CheckImminent, StationaryNearWallDoesNotTrigger)
{
  std::vector<Vec3> wall;
  for (int y = -10; y <= 10; ++y) {
    for (int z = -10; z <= 10; ++z) {
      wall.emplace_back(0.3, y * 0.1, z * 0.1);
    }
  }
  ObstacleMap map(wall);
  const auto verdict = safestop::check_imminent(moving(Vec3::Zero(), Vec3::Zero()), map, {});
  EXPECT_FALSE(verdict.triggered);
  EXPECT_EQ(verdict.evaluated_count, 0u);
  const auto slow =
    safestop::check_imminent(moving(Vec3::Zero(), Vec3(0.049, 0, 0)), map, MonitorConfig{});
  EXPECT_FALSE(slow.triggered);
}

TEST(CheckImminent, HeadOnTriggers)
{
  ObstacleMap map({Vec3(1, 0, 0)});
  const auto verdict =
    safestop::check_imminent(moving(Vec3::Zero(), Vec3(1.5, 0, 0)), map, MonitorConfig{});
  EXPECT_TRUE(verdict.triggered);
  ASSERT_TRUE(verdict.worst_cost);
  EXPECT_NEAR(*verdict.worst_cost, 0.0, 1e-12);
  EXPECT_NEAR(*verdict.worst_distance, 1.0, 1e-12);
  EXPECT_NEAR(*verdict.worst_angle, 0.0, 1e-12);
}

TEST(CheckImminent, OnlyPointsBehind)
{
  ObstacleMap map({Vec3(-1, 0, 0), Vec3(-0.5, 0.2, 0)});
  const auto verdict =
    safestop::check_imminent(moving(Vec3::Zero(), Vec3(2, 0, 0)), map, MonitorConfig{});
  EXPECT_FALSE(verdict.triggered);
  EXPECT_FALSE(verdict.worst_cost);
  EXPECT_EQ(verdict.evaluated_count, 0u);
}

struct Oracle
{
  bool triggered{false};
  bool any{false};
  double cost{0.0};
  Vec3 point{Vec3::Zero()};
  std::size_t evaluated{0};
};

// Criterion evaluated over the full point list, candidates restricted to the k closest
// in-radius points (ranked by distance, then index).
Oracle brute_force(const VehicleState & s, const std::vector<Vec3> & pts, const MonitorConfig & cfg)
{
  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = (pts[i] - s.position).norm();
    if (d <= cfg.query_radius) {
      ranked.emplace_back(d, i);
    }
  }
  std::sort(ranked.begin(), ranked.end());
  if (ranked.size() > cfg.k_nearest) {
    ranked.resize(cfg.k_nearest);
  }
  Oracle o;
  const double speed = s.velocity.norm();
  for (const auto & [d, i] : ranked) {
    const Vec3 r = pts[i] - s.position;
    if (d == 0.0) {
      continue;
    }
    const double c = std::clamp(s.velocity.dot(r) / (speed * d), -1.0, 1.0);
    if (c < 0.0) {
      continue;
    }
    const double cost = cfg.w1 * d - cfg.w2 * speed + cfg.w3 * std::acos(c);
    ++o.evaluated;
    if (!o.any || cost < o.cost) {
      o.any = true;
      o.cost = cost;
      o.point = pts[i];
    }
  }
  o.triggered = o.any && o.cost < cfg.beta;
  return o;
}

void compare_with_oracle(const MonitorConfig & cfg, std::uint32_t seed)
{
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::uniform_real_distribution<double> v(-2.5, 2.5);
  int triggered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vec3> pts;
    for (int i = 0; i < 200; ++i) {
      pts.emplace_back(u(rng), u(rng), u(rng) * 0.5);
    }
    ObstacleMap map(pts);
    const auto s = moving(Vec3(u(rng), u(rng), 0) * 0.25, Vec3(v(rng), v(rng), v(rng) * 0.3));
    const auto verdict = safestop::check_imminent(s, map, cfg);
    const auto oracle = brute_force(s, pts, cfg);
    ASSERT_EQ(verdict.triggered, oracle.triggered);
    ASSERT_EQ(verdict.evaluated_count, oracle.evaluated);
    ASSERT_EQ(verdict.worst_cost.has_value(), oracle.any);
    if (oracle.any) {
      EXPECT_NEAR(*verdict.worst_cost, oracle.cost, 1e-12);
      EXPECT_EQ(*verdict.worst_point, oracle.point);
    }
    triggered += verdict.triggered;
  }
  EXPECT_GT(triggered, 0);
}

TEST(CheckImminent, MatchesBruteForceOverAllInRadiusPoints)
{
  MonitorConfig cfg;
  cfg.k_nearest = 1000;
  compare_with_oracle(cfg, 1);
}

TEST(CheckImminent, MatchesBruteForceWithDefaultK)
{
  compare_with_oracle(MonitorConfig{}, 2);
}

TEST(MonitorConfig, Validation)
{
  MonitorConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.k_nearest = 0;
  EXPECT_THROW(cfg.validate(), safestop::ConfigError);
  cfg = {};
  cfg.min_speed = 0.0;
  EXPECT_THROW(cfg.validate(), safestop::ConfigError);
  cfg = {};
  cfg.w2 = -1.0;
  EXPECT_THROW(cfg.validate(), safestop::ConfigError);
}

}  // namespace
