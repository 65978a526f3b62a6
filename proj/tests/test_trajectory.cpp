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

#include "oracles.hpp"

#include "escape/escape_sampler.hpp"
#include "geometry/errors.hpp"
#include "trajectory/polynomial.hpp"
#include "trajectory/stop_trajectory.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

namespace
{

using safestop::AxisBoundary;
using safestop::FeasibilityConfig;
using safestop::ObstacleMap;
using safestop::StopTrajectory;
using safestop::TrajectoryKind;
using safestop::Vec3;
using safestop::VehicleState;

void expect_boundary_residuals(const AxisBoundary & b, const safestop::PolySegment & seg, double tol)
{
  EXPECT_NEAR(seg.evaluate(0.0, 0), b.p0, tol);
  EXPECT_NEAR(seg.evaluate(0.0, 1), b.v0, tol);
  EXPECT_NEAR(seg.evaluate(0.0, 2), b.a0, tol);
  EXPECT_NEAR(seg.evaluate(0.0, 3), b.j0, tol);
  EXPECT_NEAR(seg.evaluate(b.duration, 0), b.pf, tol);
  EXPECT_NEAR(seg.evaluate(b.duration, 1), 0.0, tol);
  EXPECT_NEAR(seg.evaluate(b.duration, 2), 0.0, tol);
  EXPECT_NEAR(seg.evaluate(b.duration, 3), 0.0, tol);
}

TEST(SolveAxis, RestToRestZeroDisplacementIsConstant)
{
  const auto seg = safestop::solve_axis({1.0, 0.0, 0.0, 0.0, 1.0, 1.0});
  EXPECT_DOUBLE_EQ(seg.coefficients[0], 1.0);
  for (std::size_t i = 1; i < seg.coefficients.size(); ++i) {
    EXPECT_EQ(seg.coefficients[i], 0.0) << i;
  }
}

TEST(SolveAxis, BoundaryResiduals)
{
  const AxisBoundary b{0.0, 1.0, 0.0, 0.0, 0.5, 2.0};
  expect_boundary_residuals(b, safestop::solve_axis(b), 1e-9);
}

TEST(SolveAxis, MatchesFullPivotLu)
{
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> dur(0.2, 4.0);
  for (int i = 0; i < 300; ++i) {
    const AxisBoundary b{u(rng), u(rng), u(rng) * 3, u(rng) * 10, u(rng), dur(rng)};
    const auto seg = safestop::solve_axis(b);
    const auto ref = safestop::oracle::solve_axis_lu(b);
    for (std::size_t k = 0; k < ref.size(); ++k) {
      EXPECT_NEAR(seg.coefficients[k], ref[k], 1e-8 * (1.0 + std::abs(ref[k]))) << "coef " << k;
    }
    // The oracle's own polynomial evaluation must agree with the segment's Horner form.
    for (int order = 0; order < 4; ++order) {
      const double t = 0.37 * b.duration;
      EXPECT_NEAR(seg.evaluate(t, order),
                  safestop::oracle::poly_derivative(seg.coefficients, t, order), 1e-8);
    }
  }
}

TEST(SolveAxis, LinearInPositions)
{
  const AxisBoundary b{0.3, 0.0, 0.0, 0.0, -1.2, 1.5};
  const auto base = safestop::solve_axis(b);
  const double s = 2.5;
  const auto scaled = safestop::solve_axis({b.p0 * s, 0.0, 0.0, 0.0, b.pf * s, b.duration});
  for (std::size_t i = 0; i < base.coefficients.size(); ++i) {
    EXPECT_NEAR(scaled.coefficients[i], s * base.coefficients[i], 1e-12);
  }
}

TEST(SolveAxis, RejectsBadDuration)
{
  EXPECT_THROW(safestop::solve_axis({0, 0, 0, 0, 1, 0.0}), safestop::SolveError);
  EXPECT_THROW(safestop::solve_axis({0, 0, 0, 0, 1, -1.0}), safestop::SolveError);
  EXPECT_THROW(safestop::solve_axis({0, 0, 0, 0, 1, std::nan("")}), safestop::SolveError);
  EXPECT_THROW(safestop::solve_axis({0, std::nan(""), 0, 0, 1, 1.0}), safestop::SolveError);
}

TEST(ChooseDuration, Examples)
{
  FeasibilityConfig cfg;
  VehicleState s;
  s.velocity = Vec3(2, 0, 0);
  EXPECT_NEAR(safestop::choose_duration(s, Vec3(3, 0, 0), cfg), 2.25, 1e-12);
  s.velocity = Vec3(1e-6, 0, 0);
  EXPECT_DOUBLE_EQ(safestop::choose_duration(s, Vec3(0.1, 0, 0), cfg), cfg.min_duration);
  s.velocity = Vec3(1.3, 0.2, 0);
  double previous = 0.0;
  for (double d = 0.1; d < 10.0; d += 0.1) {
    const double T = safestop::choose_duration(s, Vec3(d, 0, 0), cfg);
    EXPECT_GE(T, previous);
    previous = T;
  }
}

StopTrajectory random_trajectory(std::mt19937 & rng)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VehicleState s;
  s.position = Vec3(u(rng), u(rng), u(rng)) * 3;
  s.velocity = Vec3(u(rng), u(rng), u(rng)) * 2;
  s.acceleration = Vec3(u(rng), u(rng), u(rng)) * 2;
  s.jerk = Vec3(u(rng), u(rng), u(rng)) * 5;
  s.yaw = u(rng) * 3;
  s.yaw_rate = u(rng);
  const Vec3 escape = s.position + s.velocity + Vec3(u(rng), u(rng), u(rng));
  return safestop::solve_stop_trajectory(s, escape, safestop::choose_duration(s, escape, {}));
}

TEST(StopTrajectory, BoundaryConditions)
{
  VehicleState s;
  s.position = Vec3(1, 2, 3);
  s.velocity = Vec3(1.5, -0.5, 0.2);
  s.acceleration = Vec3(0.3, 0.1, -0.2);
  s.yaw = 0.4;
  const auto traj = safestop::solve_stop_trajectory(s, Vec3(3, 1, 3), 2.0);
  EXPECT_NEAR((traj.evaluate(0.0, 1).value - s.velocity).norm(), 0.0, 1e-12);
  EXPECT_NEAR((traj.evaluate(0.0, 2).value - s.acceleration).norm(), 0.0, 1e-12);
  for (int order = 1; order <= 3; ++order) {
    EXPECT_LT(traj.evaluate(2.0, order).value.norm(), 1e-9) << order;
  }
  EXPECT_NEAR((traj.evaluate(2.0).value - Vec3(3, 1, 3)).norm(), 0.0, 1e-9);
  EXPECT_NEAR(traj.evaluate(2.0).yaw, 0.4, 1e-9);
}

TEST(StopTrajectory, DerivativesMatchFiniteDifferences)
{
  std::mt19937 rng(3);
  for (int n = 0; n < 20; ++n) {
    const auto traj = random_trajectory(rng);
    const double T = traj.duration();
    const double h = 1e-5;
    for (int i = 1; i <= 100; ++i) {
      const double t = T * i / 101.0;
      for (int order = 0; order < 3; ++order) {
        const Vec3 fd = (traj.evaluate(t + h, order).value - traj.evaluate(t - h, order).value) / (2 * h);
        EXPECT_LT((traj.evaluate(t, order + 1).value - fd).norm(), 1e-5);
      }
    }
  }
}

TEST(StopTrajectory, OutsideDomainThrows)
{
  std::mt19937 rng(1);
  const auto traj = random_trajectory(rng);
  EXPECT_THROW(traj.evaluate(-1e-9), safestop::DomainError);
  EXPECT_THROW(traj.evaluate(traj.duration() + 1e-9), safestop::DomainError);
  EXPECT_THROW(traj.evaluate(0.0, 5), safestop::DomainError);
}

TEST(StopTrajectory, SampleTimesIncludeEnd)
{
  std::mt19937 rng(2);
  const auto traj = random_trajectory(rng);
  const auto times = traj.sample_times(0.02);
  EXPECT_EQ(times.front(), 0.0);
  EXPECT_EQ(times.back(), traj.duration());
  for (std::size_t i = 1; i < times.size(); ++i) {
    EXPECT_GT(times[i], times[i - 1]);
    EXPECT_LE(times[i] - times[i - 1], 0.02 + 1e-12);
  }
}

TEST(CollisionCheck, EmptyMapAlwaysFree)
{
  std::mt19937 rng(5);
  ObstacleMap empty;
  for (int i = 0; i < 10; ++i) {
    EXPECT_TRUE(safestop::check_collision_free(random_trajectory(rng), empty, {}));
  }
}

TEST(CollisionCheck, PassingCloseToAPoint)
{
  VehicleState s;
  s.velocity = Vec3(1, 0, 0);
  const auto traj = safestop::solve_stop_trajectory(s, Vec3(2, 0, 0), 3.0);
  ObstacleMap map({Vec3(1.0, 0.1, 0.0)});
  EXPECT_FALSE(safestop::check_collision_free(traj, map, {}));
  ObstacleMap far({Vec3(1.0, 2.0, 0.0)});
  EXPECT_TRUE(safestop::check_collision_free(traj, far, {}));
}

TEST(CollisionCheck, AgreesWithDenseSampling)
{
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  FeasibilityConfig cfg;
  int free_count = 0;
  for (int i = 0; i < 100; ++i) {
    const auto traj = random_trajectory(rng);
    std::vector<Vec3> pts;
    for (int k = 0; k < 150; ++k) {
      pts.emplace_back(u(rng), u(rng), u(rng));
    }
    ObstacleMap map(pts);
    const bool gate = safestop::check_collision_free(traj, map, cfg);
    const auto dense = safestop::oracle::dense_recheck(traj, map, cfg);
    if (gate) {
      ++free_count;
      EXPECT_TRUE(dense.clearance_ok) << dense.min_clearance;
    } else {
      EXPECT_LT(dense.min_clearance, cfg.clearance_radius);
    }
  }
  EXPECT_GT(free_count, 5);
  EXPECT_LT(free_count, 95);
}

TEST(DynamicCheck, RestTrajectoryPasses)
{
  VehicleState s;
  s.position = Vec3(1, 1, 1);
  const auto traj = safestop::solve_stop_trajectory(s, s.position, 1.0);
  EXPECT_TRUE(safestop::check_dynamic_feasibility(traj, {}));
  EXPECT_EQ(FeasibilityConfig{}.accel_bound, 10.0);
}

TEST(DynamicCheck, RejectsTwelveMetresPerSecondSquared)
{
  // Rest-to-rest move whose dense-sampled peak acceleration is scaled to exactly 12 m/s^2.
  VehicleState s;
  const double T = 0.8;
  auto unit = safestop::solve_stop_trajectory(s, Vec3(1, 0, 0), T);
  double peak = 0.0;
  for (int k = 0; k <= 8000; ++k) {
    peak = std::max(peak, std::abs(unit.axes[0].evaluate(T * k / 8000.0, 2)));
  }
  const double distance = 12.0 / peak;
  const auto traj = safestop::solve_stop_trajectory(s, Vec3(distance, 0, 0), T);
  EXPECT_FALSE(safestop::check_dynamic_feasibility(traj, {}));
  const auto gentle = safestop::solve_stop_trajectory(s, Vec3(8.0 / peak, 0, 0), T);
  EXPECT_TRUE(safestop::check_dynamic_feasibility(gentle, {}));
}

TEST(MonotoneBraking, OvershootIsRejected)
{
  VehicleState s;
  s.velocity = Vec3(2, 0, 0);
  FeasibilityConfig cfg;
  const auto ahead = safestop::solve_stop_trajectory(s, Vec3(1.5, 0, 0), 1.125);
  EXPECT_TRUE(safestop::check_monotone_braking(ahead, cfg));
  // Too little room for the duration: the vehicle overshoots and comes back, speeding up again.
  const auto overshoot = safestop::solve_stop_trajectory(s, Vec3(0.4, 0, 0), 1.0);
  EXPECT_FALSE(safestop::check_monotone_braking(overshoot, cfg));
  EXPECT_TRUE(safestop::check_monotone_braking(safestop::fallback_brake(s, cfg), cfg));
}

TEST(FallbackBrake, Kinematics)
{
  VehicleState s;
  s.position = Vec3(1, 2, 3);
  s.velocity = Vec3(0, 2, 0);
  FeasibilityConfig cfg;
  const auto brake = safestop::fallback_brake(s, cfg);
  EXPECT_EQ(brake.kind, TrajectoryKind::fallback_brake);
  EXPECT_NEAR(brake.duration(), 0.4, 1e-12);
  const double travelled = (brake.evaluate(brake.duration()).value - s.position).norm();
  EXPECT_NEAR(travelled, 2.0 * 2.0 / (2 * 0.5 * 10.0), 1e-12);
  EXPECT_LT(brake.evaluate(brake.duration(), 1).value.norm(), 1e-9);
}

TEST(FallbackBrake, ZeroVelocityHolds)
{
  VehicleState s;
  s.position = Vec3(4, 5, 6);
  const auto brake = safestop::fallback_brake(s, {});
  EXPECT_EQ(brake.duration(), 0.0);
  EXPECT_EQ(brake.evaluate(0.0).value, s.position);
}

TEST(Search, OpenSpacePicksFirstFeasibleCandidate)
{
  VehicleState s;
  s.velocity = Vec3(2, 0, 0);
  ObstacleMap empty;
  FeasibilityConfig cfg;
  const auto search = safestop::search_stop_trajectory(s, empty, {}, cfg);
  ASSERT_TRUE(search.selected);
  EXPECT_EQ(search.trajectory.kind, TrajectoryKind::polynomial);
  // Every candidate searched before the selected one is dynamically infeasible.
  for (std::size_t i = 0; i < *search.selected; ++i) {
    const Vec3 & goal = search.sampled[i].point;
    const auto traj = safestop::solve_stop_trajectory(s, goal, safestop::choose_duration(s, goal, cfg));
    EXPECT_FALSE(safestop::check_dynamic_feasibility(traj, cfg));
  }
  EXPECT_LT(*search.selected, 10u);
  const Vec3 e = *search.trajectory.escape_point;
  EXPECT_LE(s.velocity.cross(e - s.position).norm() / s.velocity.norm(),
            safestop::EscapeConfig{}.grid_spacing);
  EXPECT_GT(e.x(), 0.0);
}

TEST(Search, BoxedInFallsBack)
{
  // Obstacles every 0.5 m through the whole grid box: each lattice point is within 0.433 m of
  // one, inside the 0.6 m escape clearance.
  std::vector<Vec3> shell;
  for (int i = -8; i <= 8; ++i) {
    for (int j = -8; j <= 8; ++j) {
      for (int k = -8; k <= 8; ++k) {
        if (i != 0 || j != 0 || k != 0) {
          shell.emplace_back(0.5 * i, 0.5 * j, 0.5 * k);
        }
      }
    }
  }
  ObstacleMap map(shell);
  VehicleState s;
  s.velocity = Vec3(1, 0.5, 0);
  const auto search = safestop::search_stop_trajectory(s, map, {}, {});
  EXPECT_EQ(search.trajectory.kind, TrajectoryKind::fallback_brake);
  EXPECT_EQ(search.non_colliding, 0u);
  EXPECT_FALSE(search.selected);
}

TEST(Search, ReturnedTrajectoryPassesBothChecks)
{
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FeasibilityConfig cfg;
  for (int n = 0; n < 30; ++n) {
    std::vector<Vec3> pts;
    for (int k = 0; k < 300; ++k) {
      pts.emplace_back(u(rng) * 5, u(rng) * 5, u(rng) * 2);
    }
    ObstacleMap map(pts);
    VehicleState s;
    s.velocity = Vec3(u(rng), u(rng), 0.2 * u(rng)).normalized() * 2.0;
    if (map.nearest_distance(s.position) < 0.4) {
      continue;
    }
    const auto traj = safestop::generate_stop_trajectory(s, map, {}, cfg);
    if (traj.kind == TrajectoryKind::fallback_brake) {
      continue;
    }
    EXPECT_TRUE(safestop::check_collision_free(traj, map, cfg));
    EXPECT_TRUE(safestop::check_dynamic_feasibility(traj, cfg));
    EXPECT_TRUE(safestop::check_monotone_braking(traj, cfg));
    const auto dense = safestop::oracle::dense_recheck(traj, map, cfg);
    EXPECT_TRUE(dense.clearance_ok);
    EXPECT_TRUE(dense.accel_ok);
  }
}

TEST(TrajectoryCsv, HeaderAndRows)
{
  std::mt19937 rng(4);
  const auto traj = random_trajectory(rng);
  std::ostringstream out;
  safestop::write_trajectory_csv(out, traj, 0.1);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,px,py,pz,vx,vy,vz,ax,ay,az,yaw");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 10);
  }
  EXPECT_EQ(rows, traj.sample_times(0.1).size());
}

}  // namespace
