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

#ifndef SAFESTOP__TRAJECTORY__STOP_TRAJECTORY_HPP_
#define SAFESTOP__TRAJECTORY__STOP_TRAJECTORY_HPP_

#include "escape/escape_sampler.hpp"
#include "geometry/obstacle_map.hpp"
#include "geometry/types.hpp"
#include "trajectory/polynomial.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

namespace safestop
{

struct FeasibilityConfig
{
  double accel_bound{10.0};  // m/s^2, strict bound on the acceleration norm
  double clearance_radius{0.3};  // m
  double sample_dt{0.02};  // s
  double min_duration{0.5};  // s
  double duration_gain{1.5};  // stretch applied to distance / speed
  double brake_fraction{0.5};  // share of accel_bound used by the fallback brake
  double duration_speed_floor{1.0};  // m/s, lower bound on the speed used in distance / speed

  void validate() const;
};

enum class TrajectoryKind { polynomial, fallback_brake };

struct TrajectoryPoint
{
  Vec3 value{Vec3::Zero()};
  double yaw{0.0};
};

/// Four axis polynomials (x, y, z, yaw) sharing one duration; every derivative vanishes at T.
struct StopTrajectory
{
  std::array<PolySegment, 4> axes{};
  std::optional<Vec3> escape_point;
  TrajectoryKind kind{TrajectoryKind::polynomial};

  double duration() const { return axes[0].duration; }

  /// Derivative of the given order (0..4) at t. Throws DomainError outside [0, T].
  TrajectoryPoint evaluate(double t, int order = 0) const;

  /// {0, dt, 2dt, ...} up to and including T.
  std::vector<double> sample_times(double dt) const;
};

/// T = max(min_duration, gain * |escape - x| / max(speed, floor), speed / (fraction * bound)).
double choose_duration(
  const VehicleState & state, const Vec3 & escape, const FeasibilityConfig & cfg);

/// Solves all four axes to escape over T; the yaw target is the initial yaw.
StopTrajectory solve_stop_trajectory(
  const VehicleState & state, const Vec3 & escape, double duration);

bool check_collision_free(
  const StopTrajectory & trajectory, const ObstacleMap & map, const FeasibilityConfig & cfg);

/// Translational acceleration norm strictly below accel_bound at every sample.
bool check_dynamic_feasibility(const StopTrajectory & trajectory, const FeasibilityConfig & cfg);

/// Speed never rises again once it has peaked, checked on a grid four times finer than
/// sample_dt. Rejects profiles that brake, then speed up toward a far or lateral escape point.
bool check_monotone_braking(const StopTrajectory & trajectory, const FeasibilityConfig & cfg);

/// Straight-line constant deceleration along -velocity; a zero-length hold at zero speed.
StopTrajectory fallback_brake(const VehicleState & state, const FeasibilityConfig & cfg);

struct StopSearch
{
  StopTrajectory trajectory;
  /// Stratified sample, in the order it was searched.
  std::vector<EscapeCandidate> sampled;
  std::size_t grid_size{0};
  std::size_t non_colliding{0};
  /// Index into sampled of the executed candidate; empty for the fallback.
  std::optional<std::size_t> selected;
};

/// Grid, cost, stratify, then return the first candidate that passes every check.
StopSearch search_stop_trajectory(
  const VehicleState & state, const ObstacleMap & map, const EscapeConfig & escape_cfg,
  const FeasibilityConfig & feasibility_cfg);

inline StopTrajectory generate_stop_trajectory(
  const VehicleState & state, const ObstacleMap & map, const EscapeConfig & escape_cfg,
  const FeasibilityConfig & feasibility_cfg)
{
  return search_stop_trajectory(state, map, escape_cfg, feasibility_cfg).trajectory;
}

/// Rows "t,px,py,pz,vx,vy,vz,ax,ay,az,yaw" at the given spacing.
void write_trajectory_csv(std::ostream & out, const StopTrajectory & trajectory, double dt);

}  // namespace safestop

#endif  // SAFESTOP__TRAJECTORY__STOP_TRAJECTORY_HPP_
