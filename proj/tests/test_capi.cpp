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

// The public C interface, linked against the shared library only.

#include <safestop/safestop.h>

#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "temp_dir.hpp"

namespace
{

using safestop::testing::TempDir;
using safestop::testing::write_file;

struct MapDeleter
{
  void operator()(safestop_map * m) const { safestop_map_destroy(m); }
};
using MapPtr = std::unique_ptr<safestop_map, MapDeleter>;

struct TrajectoryDeleter
{
  void operator()(safestop_trajectory * t) const { safestop_trajectory_destroy(t); }
};
using TrajectoryPtr = std::unique_ptr<safestop_trajectory, TrajectoryDeleter>;

MapPtr make_map(const std::vector<double> & xyz)
{
  safestop_map * raw = nullptr;
  EXPECT_EQ(safestop_map_create(xyz.data(), xyz.size() / 3, &raw), SAFESTOP_OK);
  return MapPtr(raw);
}

safestop_state moving(double vx, double vy = 0.0)
{
  safestop_state s{};
  s.position[2] = 1.0;
  s.velocity[0] = vx;
  s.velocity[1] = vy;
  return s;
}

TEST(CApi, VersionAndStatusStrings)
{
  EXPECT_STREQ(safestop_version(), "1.0.0");
  for (int s = SAFESTOP_OK; s <= SAFESTOP_ERR_INTERNAL; ++s) {
    const char * text = safestop_status_string(static_cast<safestop_status>(s));
    ASSERT_NE(text, nullptr);
    EXPECT_GT(std::strlen(text), 0u);
  }
  EXPECT_STRNE(safestop_status_string(SAFESTOP_OK),
               safestop_status_string(SAFESTOP_ERR_INVALID_ARGUMENT));
}

TEST(CApi, DefaultsMatchTheDocumentedValues)
{
  safestop_monitor_config m;
  safestop_monitor_config_default(&m);
  EXPECT_DOUBLE_EQ(m.w1, 0.6);
  EXPECT_DOUBLE_EQ(m.w2, 0.4);
  EXPECT_DOUBLE_EQ(m.w3, 1.2);
  EXPECT_DOUBLE_EQ(m.beta, 0.3);
  EXPECT_DOUBLE_EQ(m.monitor_rate, 20.0);
  EXPECT_EQ(m.k_nearest, 50u);
  EXPECT_DOUBLE_EQ(m.query_radius, 5.0);
  EXPECT_DOUBLE_EQ(m.min_speed, 0.05);

  safestop_escape_config e;
  safestop_escape_config_default(&e);
  EXPECT_DOUBLE_EQ(e.we1, 1.0);
  EXPECT_DOUBLE_EQ(e.we2, 2.0);
  EXPECT_DOUBLE_EQ(e.grid_spacing, 0.15);
  ASSERT_EQ(e.strata_len, 4u);
  const size_t counts[] = {10, 40, 30, 20};
  const double fractions[] = {0.01, 0.09, 0.40, 0.50};
  for (size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(e.strata_count[i], counts[i]);
    EXPECT_DOUBLE_EQ(e.strata_fraction[i], fractions[i]);
  }

  safestop_feasibility_config f;
  safestop_feasibility_config_default(&f);
  EXPECT_DOUBLE_EQ(f.accel_bound, 10.0);
  EXPECT_DOUBLE_EQ(f.clearance_radius, 0.3);
}

TEST(CApi, MapQueriesAgreeWithBruteForce)
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<double> xyz(600 * 3);
  for (auto & c : xyz) {
    c = u(rng);
  }
  auto map = make_map(xyz);
  size_t count = 0;
  ASSERT_EQ(safestop_map_point_count(map.get(), &count), SAFESTOP_OK);
  EXPECT_EQ(count, 600u);

  for (int q = 0; q < 50; ++q) {
    const double query[3] = {u(rng), u(rng), u(rng)};
    std::vector<double> brute;
    for (size_t i = 0; i < 600; ++i) {
      brute.push_back(std::hypot(xyz[3 * i] - query[0], xyz[3 * i + 1] - query[1],
                                 xyz[3 * i + 2] - query[2]));
    }
    std::sort(brute.begin(), brute.end());

    double nearest = 0.0;
    ASSERT_EQ(safestop_map_nearest_distance(map.get(), query, &nearest), SAFESTOP_OK);
    EXPECT_NEAR(nearest, brute[0], 1e-12);

    const size_t k = 7;
    const double radius = 6.0;
    std::vector<double> points(k * 3), dists(k);
    size_t got = 0;
    ASSERT_EQ(safestop_map_k_nearest(map.get(), query, k, radius, points.data(), dists.data(), &got),
              SAFESTOP_OK);
    const size_t expected = std::min<size_t>(
      k, std::count_if(brute.begin(), brute.end(), [&](double d) { return d <= radius; }));
    ASSERT_EQ(got, expected);
    for (size_t i = 0; i < got; ++i) {
      EXPECT_NEAR(dists[i], brute[i], 1e-12);
      EXPECT_NEAR(std::hypot(points[3 * i] - query[0], points[3 * i + 1] - query[1],
                             points[3 * i + 2] - query[2]),
                  dists[i], 1e-12);
    }
  }

  auto empty = make_map({});
  double d = 0.0;
  const double origin[3] = {0, 0, 0};
  ASSERT_EQ(safestop_map_nearest_distance(empty.get(), origin, &d), SAFESTOP_OK);
  EXPECT_TRUE(std::isinf(d));
}

TEST(CApi, MapRejectsBadInput)
{
  safestop_map * out = nullptr;
  const double bad[] = {0.0, 1.0, std::numeric_limits<double>::quiet_NaN()};
  EXPECT_EQ(safestop_map_create(bad, 1, &out), SAFESTOP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(out, nullptr);
  EXPECT_GT(std::strlen(safestop_last_error()), 0u);
  const double inf[] = {std::numeric_limits<double>::infinity(), 0.0, 0.0};
  EXPECT_EQ(safestop_map_create(inf, 1, &out), SAFESTOP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(safestop_map_create(nullptr, 3, &out), SAFESTOP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(safestop_map_create(bad, 0, nullptr), SAFESTOP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(safestop_map_load("/nonexistent/cloud.xyz", &out), SAFESTOP_ERR_IO);
}

TEST(CApi, MapLoadsPointCloudFiles)
{
  TempDir dir;
  write_file(dir / "cloud.xyz", "# two points\n1 2 3\n4 5 6\n");
  safestop_map * raw = nullptr;
  ASSERT_EQ(safestop_map_load((dir / "cloud.xyz").c_str(), &raw), SAFESTOP_OK);
  MapPtr map(raw);
  size_t count = 0;
  safestop_map_point_count(map.get(), &count);
  EXPECT_EQ(count, 2u);

  write_file(dir / "broken.xyz", "1 2\n");
  EXPECT_EQ(safestop_map_load((dir / "broken.xyz").c_str(), &raw), SAFESTOP_ERR_INVALID_ARGUMENT);
}

TEST(CApi, CheckImminentScoresPointsAhead)
{
  // A point 1 m straight ahead at 2 m/s: 0.6 * 1 - 0.4 * 2 + 0 = -0.2 < 0.3.
  auto ahead = make_map({1.0, 0.0, 1.0});
  safestop_state s = moving(2.0);
  safestop_verdict v{};
  ASSERT_EQ(safestop_check_imminent(&s, ahead.get(), nullptr, &v), SAFESTOP_OK);
  EXPECT_EQ(v.triggered, 1);
  EXPECT_EQ(v.evaluated, 1);
  EXPECT_NEAR(v.worst_cost, -0.2, 1e-12);
  EXPECT_NEAR(v.worst_distance, 1.0, 1e-12);
  EXPECT_NEAR(v.worst_angle, 0.0, 1e-9);
  EXPECT_EQ(v.evaluated_count, 1u);

  // 2 m ahead: 1.2 - 0.8 = 0.4, not below the threshold.
  auto farther = make_map({2.0, 0.0, 1.0});
  ASSERT_EQ(safestop_check_imminent(&s, farther.get(), nullptr, &v), SAFESTOP_OK);
  EXPECT_EQ(v.triggered, 0);
  EXPECT_NEAR(v.worst_cost, 0.4, 1e-12);

  // Directly behind the vehicle: nothing ahead to score.
  auto behind = make_map({-1.0, 0.0, 1.0});
  ASSERT_EQ(safestop_check_imminent(&s, behind.get(), nullptr, &v), SAFESTOP_OK);
  EXPECT_EQ(v.triggered, 0);

  // Below min_speed the monitor never fires.
  safestop_state slow = moving(0.04);
  ASSERT_EQ(safestop_check_imminent(&slow, ahead.get(), nullptr, &v), SAFESTOP_OK);
  EXPECT_EQ(v.triggered, 0);
  EXPECT_EQ(v.evaluated, 0);

  // A raised threshold makes the 2 m point trigger.
  safestop_monitor_config config;
  safestop_monitor_config_default(&config);
  config.beta = 0.5;
  ASSERT_EQ(safestop_check_imminent(&s, farther.get(), &config, &v), SAFESTOP_OK);
  EXPECT_EQ(v.triggered, 1);

  config.k_nearest = 0;
  EXPECT_EQ(safestop_check_imminent(&s, farther.get(), &config, &v), SAFESTOP_ERR_CONFIG);
  EXPECT_EQ(safestop_check_imminent(nullptr, farther.get(), nullptr, &v),
            SAFESTOP_ERR_INVALID_ARGUMENT);
  safestop_state nan_state = moving(std::nan(""));
  EXPECT_EQ(safestop_check_imminent(&nan_state, farther.get(), nullptr, &v),
            SAFESTOP_ERR_INVALID_ARGUMENT);
}

TEST(CApi, StopTrajectoryEndsAtRest)
{
  auto map = make_map({3.0, 0.0, 1.0});
  safestop_state s = moving(2.0);
  safestop_trajectory * raw = nullptr;
  ASSERT_EQ(safestop_generate_stop_trajectory(&s, map.get(), nullptr, nullptr, &raw), SAFESTOP_OK);
  TrajectoryPtr traj(raw);

  safestop_trajectory_kind kind;
  ASSERT_EQ(safestop_trajectory_kind_of(traj.get(), &kind), SAFESTOP_OK);
  EXPECT_EQ(kind, SAFESTOP_TRAJECTORY_POLYNOMIAL);
  double escape[3];
  int has_escape = 0;
  ASSERT_EQ(safestop_trajectory_escape_point(traj.get(), escape, &has_escape), SAFESTOP_OK);
  EXPECT_EQ(has_escape, 1);

  double duration = 0.0;
  ASSERT_EQ(safestop_trajectory_duration(traj.get(), &duration), SAFESTOP_OK);
  EXPECT_GE(duration, 0.5);

  double p0[3], v0[3], pend[3], vend[3], aend[3], yaw = 0.0;
  ASSERT_EQ(safestop_trajectory_evaluate(traj.get(), 0.0, 0, p0, &yaw), SAFESTOP_OK);
  ASSERT_EQ(safestop_trajectory_evaluate(traj.get(), 0.0, 1, v0, nullptr), SAFESTOP_OK);
  ASSERT_EQ(safestop_trajectory_evaluate(traj.get(), duration, 0, pend, nullptr), SAFESTOP_OK);
  ASSERT_EQ(safestop_trajectory_evaluate(traj.get(), duration, 1, vend, nullptr), SAFESTOP_OK);
  ASSERT_EQ(safestop_trajectory_evaluate(traj.get(), duration, 2, aend, nullptr), SAFESTOP_OK);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(p0[i], s.position[i], 1e-9);
    EXPECT_NEAR(v0[i], s.velocity[i], 1e-9);
    EXPECT_NEAR(pend[i], escape[i], 1e-9);
    EXPECT_NEAR(vend[i], 0.0, 1e-9);
    EXPECT_NEAR(aend[i], 0.0, 1e-9);
  }

  double out[3];
  EXPECT_EQ(safestop_trajectory_evaluate(traj.get(), duration + 1.0, 0, out, nullptr),
            SAFESTOP_ERR_DOMAIN);
  EXPECT_EQ(safestop_trajectory_evaluate(traj.get(), -0.1, 0, out, nullptr), SAFESTOP_ERR_DOMAIN);
  EXPECT_EQ(safestop_trajectory_evaluate(traj.get(), 0.0, 5, out, nullptr), SAFESTOP_ERR_DOMAIN);
}

TEST(CApi, BoxedInVehicleGetsTheFallbackBrake)
{
  std::vector<double> xyz;
  for (double x = -4.0; x <= 4.0; x += 0.5) {
    for (double y = -4.0; y <= 4.0; y += 0.5) {
      for (double z = -3.0; z <= 5.0; z += 0.5) {
        xyz.insert(xyz.end(), {x, y, z});
      }
    }
  }
  auto map = make_map(xyz);
  safestop_state s = moving(2.0);
  s.position[0] = 0.25;
  s.position[1] = 0.25;
  s.position[2] = 1.25;
  safestop_trajectory * raw = nullptr;
  ASSERT_EQ(safestop_generate_stop_trajectory(&s, map.get(), nullptr, nullptr, &raw), SAFESTOP_OK);
  TrajectoryPtr traj(raw);
  safestop_trajectory_kind kind;
  safestop_trajectory_kind_of(traj.get(), &kind);
  EXPECT_EQ(kind, SAFESTOP_TRAJECTORY_FALLBACK_BRAKE);
  double escape[3];
  int has_escape = 1;
  safestop_trajectory_escape_point(traj.get(), escape, &has_escape);
  EXPECT_EQ(has_escape, 0);
  double duration = 0.0, vend[3];
  safestop_trajectory_duration(traj.get(), &duration);
  EXPECT_NEAR(duration, 0.4, 1e-12);  // 2 m/s at half of 10 m/s^2
  safestop_trajectory_evaluate(traj.get(), duration, 1, vend, nullptr);
  EXPECT_NEAR(std::hypot(vend[0], vend[1], vend[2]), 0.0, 1e-12);
}

TEST(CApi, InvalidTrajectoryConfigsAreRejected)
{
  auto map = make_map({3.0, 0.0, 1.0});
  safestop_state s = moving(2.0);
  safestop_trajectory * raw = nullptr;

  safestop_escape_config escape;
  safestop_escape_config_default(&escape);
  escape.strata_len = SAFESTOP_MAX_STRATA + 1;
  EXPECT_EQ(safestop_generate_stop_trajectory(&s, map.get(), &escape, nullptr, &raw),
            SAFESTOP_ERR_CONFIG);

  safestop_escape_config_default(&escape);
  escape.grid_spacing = 0.0;
  EXPECT_EQ(safestop_generate_stop_trajectory(&s, map.get(), &escape, nullptr, &raw),
            SAFESTOP_ERR_CONFIG);

  safestop_feasibility_config feasibility;
  safestop_feasibility_config_default(&feasibility);
  feasibility.accel_bound = -1.0;
  EXPECT_EQ(safestop_generate_stop_trajectory(&s, map.get(), nullptr, &feasibility, &raw),
            SAFESTOP_ERR_CONFIG);
  EXPECT_EQ(raw, nullptr);
}

TEST(CApi, NullArgumentsAreReportedNotDereferenced)
{
  const double q[3] = {0, 0, 0};
  double d;
  size_t n;
  EXPECT_EQ(safestop_map_point_count(nullptr, &n), SAFESTOP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(safestop_map_nearest_distance(nullptr, q, &d), SAFESTOP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(safestop_map_k_nearest(nullptr, q, 1, 1.0, nullptr, nullptr, &n),
            SAFESTOP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(safestop_trajectory_duration(nullptr, &d), SAFESTOP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(safestop_run_batch(nullptr, nullptr, nullptr), SAFESTOP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(safestop_report(nullptr, nullptr, nullptr), SAFESTOP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(safestop_server_create(nullptr, 0, nullptr), SAFESTOP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(safestop_server_stop(nullptr), SAFESTOP_ERR_INVALID_ARGUMENT);
  safestop_map_destroy(nullptr);
  safestop_trajectory_destroy(nullptr);
  safestop_server_destroy(nullptr);
}

TEST(CApi, BatchAndReportRoundTrip)
{
  TempDir dir;
  const auto config = dir / "arena.json";
  write_file(config, R"({"schema": 1, "scenario": {"generator": "two_pillar_arena"},
                        "monitoring": "enabled", "trials": 1, "out": "unused"})");
  safestop_run_overrides overrides;
  safestop_run_overrides_default(&overrides);
  EXPECT_EQ(overrides.monitoring, SAFESTOP_MONITORING_FROM_CONFIG);
  overrides.monitoring = SAFESTOP_MONITORING_BOTH;
  overrides.trials = 4;  // split evenly between the two modes
  overrides.has_seed = 1;
  overrides.seed = 11;
  const auto runs = dir / "runs";
  overrides.out_dir = runs.c_str();

  safestop_batch_info info{};
  ASSERT_EQ(safestop_run_batch(config.c_str(), &overrides, &info), SAFESTOP_OK)
    << safestop_last_error();
  EXPECT_EQ(info.trials, 4u);
  EXPECT_EQ(info.enabled_trials, 2u);
  EXPECT_EQ(info.disabled_trials, 2u);
  EXPECT_EQ(std::filesystem::path(info.output_dir), runs);
  EXPECT_TRUE(std::filesystem::exists(runs / "summary.csv"));

  safestop_report_info report{};
  const auto out = dir / "report";
  ASSERT_EQ(safestop_report(runs.c_str(), out.c_str(), &report), SAFESTOP_OK)
    << safestop_last_error();
  EXPECT_EQ(report.traces, 4u);
  EXPECT_GT(report.monitor_ticks, 0u);
  EXPECT_EQ(report.triggers_below_min_speed, 0u);
  if (report.separability_defined) {
    EXPECT_GE(report.accuracy, 0.0);
    EXPECT_LE(report.accuracy, 1.0);
  }

  const auto empty = dir / "empty";
  std::filesystem::create_directories(empty);
  EXPECT_EQ(safestop_report(empty.c_str(), out.c_str(), &report), SAFESTOP_ERR_EMPTY);

  write_file(dir / "bad.json", R"({"schema": 1, "scenario": {"generator": "two_pillar_arena"}, "trials": "many"})");
  EXPECT_EQ(safestop_run_batch((dir / "bad.json").c_str(), nullptr, nullptr), SAFESTOP_ERR_CONFIG);
  EXPECT_NE(std::string(safestop_last_error()).find("trials"), std::string::npos);
}

TEST(CApi, ServerLifecycle)
{
  TempDir dir;
  const auto config = dir / "arena.json";
  write_file(config, R"({"schema": 1, "scenario": {"generator": "two_pillar_arena"}})");
  safestop_server * server = nullptr;
  ASSERT_EQ(safestop_server_create(config.c_str(), 0, &server), SAFESTOP_OK) << safestop_last_error();
  ASSERT_EQ(safestop_server_start(server), SAFESTOP_OK);
  uint16_t port = 0;
  ASSERT_EQ(safestop_server_port(server, &port), SAFESTOP_OK);
  EXPECT_NE(port, 0);

  std::atomic<int> run_status{-1};
  std::thread runner([&] { run_status = safestop_server_run(server); });
  std::this_thread::sleep_for(std::chrono::milliseconds(100));
  EXPECT_EQ(safestop_server_stop(server), SAFESTOP_OK);
  runner.join();
  EXPECT_EQ(run_status.load(), SAFESTOP_OK);
  safestop_server_destroy(server);

  EXPECT_EQ(safestop_server_create((dir / "missing.json").c_str(), 0, &server), SAFESTOP_ERR_IO);
}

}  // namespace
