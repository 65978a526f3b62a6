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

#include "trajectory/stop_trajectory.hpp"

#include "geometry/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <string>

namespace safestop
{

void FeasibilityConfig::validate() const
{
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(accel_bound)) {
    throw ConfigError("feasibility.accel_bound must be positive");
  }
  if (!positive(clearance_radius)) {
    throw ConfigError("feasibility.clearance_radius must be positive");
  }
  if (!positive(sample_dt)) {
    throw ConfigError("feasibility.sample_dt must be positive");
  }
  if (!positive(min_duration) || !positive(duration_gain) || !positive(duration_speed_floor)) {
    throw ConfigError("feasibility duration parameters must be positive");
  }
  if (!positive(brake_fraction) || brake_fraction > 1.0) {
    throw ConfigError("feasibility.brake_fraction must be in (0, 1]");
  }
}

TrajectoryPoint StopTrajectory::evaluate(double t, int order) const
{
  if (!(t >= 0.0 && t <= duration())) {
    throw DomainError(
      "t = " + std::to_string(t) + " outside [0, " + std::to_string(duration()) + "]");
  }
  if (order < 0 || order > 4) {
    throw DomainError("derivative order must be in 0..4");
  }
  return TrajectoryPoint{
    Vec3(axes[0].evaluate(t, order), axes[1].evaluate(t, order), axes[2].evaluate(t, order)),
    axes[3].evaluate(t, order)};
}

std::vector<double> StopTrajectory::sample_times(double dt) const
{
  const double T = duration();
  std::vector<double> times;
  const auto steps = static_cast<std::size_t>(std::floor(T / dt));
  times.reserve(steps + 2);
  for (std::size_t k = 0; k <= steps; ++k) {
    times.push_back(std::min(static_cast<double>(k) * dt, T));
  }
  if (times.back() < T) {
    times.push_back(T);
  }
  return times;
}

double choose_duration(
  const VehicleState & state, const Vec3 & escape, const FeasibilityConfig & cfg)
{
  const double speed = state.velocity.norm();
  const double distance = (escape - state.position).norm();
  const double reach = cfg.duration_gain * distance / std::max(speed, cfg.duration_speed_floor);
  const double brake = speed / (cfg.brake_fraction * cfg.accel_bound);
  return std::max({cfg.min_duration, reach, brake});
}

StopTrajectory solve_stop_trajectory(
  const VehicleState & state, const Vec3 & escape, double duration)
{
  StopTrajectory trajectory;
  trajectory.kind = TrajectoryKind::polynomial;
  trajectory.escape_point = escape;
  for (int axis = 0; axis < 3; ++axis) {
    trajectory.axes[axis] = solve_axis(AxisBoundary{
      state.position[axis], state.velocity[axis], state.acceleration[axis], state.jerk[axis],
      escape[axis], duration});
  }
  trajectory.axes[3] = solve_axis(AxisBoundary{
    state.yaw, state.yaw_rate, state.yaw_accel, state.yaw_jerk, state.yaw, duration});
  return trajectory;
}

bool check_collision_free(
  const StopTrajectory & trajectory, const ObstacleMap & map, const FeasibilityConfig & cfg)
{
  if (map.empty()) {
    return true;
  }
  for (const double t : trajectory.sample_times(cfg.sample_dt)) {
    if (map.nearest_distance(trajectory.evaluate(t).value) < cfg.clearance_radius) {
      return false;
    }
  }
  return true;
}

bool check_dynamic_feasibility(const StopTrajectory & trajectory, const FeasibilityConfig & cfg)
{
  for (const double t : trajectory.sample_times(cfg.sample_dt)) {
    if (!(trajectory.evaluate(t, 2).value.norm() < cfg.accel_bound)) {
      return false;
    }
  }
  return true;
}

bool check_monotone_braking(const StopTrajectory & trajectory, const FeasibilityConfig & cfg)
{
  const auto times = trajectory.sample_times(0.25 * cfg.sample_dt);
  std::vector<double> speeds;
  speeds.reserve(times.size());
  for (const double t : times) {
    speeds.push_back(trajectory.evaluate(t, 1).value.norm());
  }
  const auto peak = std::max_element(speeds.begin(), speeds.end());
  return std::is_sorted(peak, speeds.end(), std::greater<>());
}

StopTrajectory fallback_brake(const VehicleState & state, const FeasibilityConfig & cfg)
{
  StopTrajectory trajectory;
  trajectory.kind = TrajectoryKind::fallback_brake;
  const double speed = state.velocity.norm();
  const double decel = cfg.brake_fraction * cfg.accel_bound;
  const double T = speed > 0.0 ? speed / decel : 0.0;
  const Vec3 heading = speed > 0.0 ? Vec3(state.velocity / speed) : Vec3::Zero();
  for (int axis = 0; axis < 3; ++axis) {
    PolySegment & segment = trajectory.axes[axis];
    segment.duration = T;
    segment.coefficients[0] = state.position[axis];
    if (speed > 0.0) {
      segment.coefficients[1] = state.velocity[axis];
      segment.coefficients[2] = -0.5 * decel * heading[axis];
    }
  }
  trajectory.axes[3].duration = T;
  trajectory.axes[3].coefficients[0] = state.yaw;
  return trajectory;
}

StopSearch search_stop_trajectory(
  const VehicleState & state, const ObstacleMap & map, const EscapeConfig & escape_cfg,
  const FeasibilityConfig & feasibility_cfg)
{
  StopSearch search;
  if (!(state.velocity.norm() > 0.0)) {
    search.trajectory = fallback_brake(state, feasibility_cfg);
    return search;
  }

  const auto grid = generate_grid(state, escape_cfg);
  search.grid_size = grid.size();
  std::vector<EscapeCandidate> candidates;
  candidates.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EscapeCandidate candidate = escape_cost(state, grid[i], map, escape_cfg);
    candidate.lattice_index = i;
    if (!candidate.colliding) {
      candidates.push_back(candidate);
    }
  }
  search.non_colliding = candidates.size();
  search.sampled = stratified_sample(std::move(candidates), escape_cfg);

  for (std::size_t i = 0; i < search.sampled.size(); ++i) {
    const Vec3 & goal = search.sampled[i].point;
    StopTrajectory trajectory;
    try {
      trajectory = solve_stop_trajectory(state, goal, choose_duration(state, goal, feasibility_cfg));
    } catch (const SolveError &) {
      continue;
    }
    if (
      check_dynamic_feasibility(trajectory, feasibility_cfg) &&
      check_monotone_braking(trajectory, feasibility_cfg) &&
      check_collision_free(trajectory, map, feasibility_cfg)) {
      search.trajectory = std::move(trajectory);
      search.selected = i;
      return search;
    }
  }
  search.trajectory = fallback_brake(state, feasibility_cfg);
  return search;
}

void write_trajectory_csv(std::ostream & out, const StopTrajectory & trajectory, double dt)
{
  out << "t,px,py,pz,vx,vy,vz,ax,ay,az,yaw\n";
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(10);
  for (const double t : trajectory.sample_times(dt)) {
    const auto p = trajectory.evaluate(t, 0);
    const auto v = trajectory.evaluate(t, 1);
    const auto a = trajectory.evaluate(t, 2);
    out << t << ',' << p.value.x() << ',' << p.value.y() << ',' << p.value.z() << ','
        << v.value.x() << ',' << v.value.y() << ',' << v.value.z() << ',' << a.value.x() << ','
        << a.value.y() << ',' << a.value.z() << ',' << normalize_angle(p.yaw) << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace safestop
