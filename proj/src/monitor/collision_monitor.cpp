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

#include "monitor/collision_monitor.hpp"

#include "geometry/errors.hpp"

#include <algorithm>
#include <cmath>

namespace safestop
{

void MonitorConfig::validate() const
{
  if (!(w1 >= 0.0) || !(w2 >= 0.0) || !(w3 >= 0.0)) {
    throw ConfigError("monitor weights w1, w2, w3 must be non-negative");
  }
  if (!std::isfinite(beta)) {
    throw ConfigError("monitor.beta must be finite");
  }
  if (!(monitor_rate > 0.0) || !std::isfinite(monitor_rate)) {
    throw ConfigError("monitor.monitor_rate must be positive");
  }
  if (k_nearest == 0) {
    throw ConfigError("monitor.k_nearest must be at least 1");
  }
  if (!(query_radius > 0.0)) {
    throw ConfigError("monitor.query_radius must be positive");
  }
  if (!(min_speed > 0.0) || !std::isfinite(min_speed)) {
    throw ConfigError("monitor.min_speed must be positive");
  }
}

double projection(const VehicleState & state, const Vec3 & p)
{
  const double speed = state.velocity.norm();
  const Vec3 r = p - state.position;
  const double distance = r.norm();
  if (!(speed > 0.0)) {
    throw DegenerateInput("projection undefined at zero velocity");
  }
  if (!(distance > 0.0)) {
    throw DegenerateInput("projection undefined for a point at the vehicle position");
  }
  return std::clamp(state.velocity.dot(r) / (speed * distance), -1.0, 1.0);
}

double stop_cost(const VehicleState & state, const Vec3 & p, const MonitorConfig & cfg)
{
  const double proj = projection(state, p);
  if (proj < 0.0) {
    throw ContractError("stop cost requested for a point behind the vehicle");
  }
  const double distance = (p - state.position).norm();
  return cfg.w1 * distance - cfg.w2 * state.velocity.norm() + cfg.w3 * std::acos(proj);
}

MonitorVerdict check_imminent(
  const VehicleState & state, const ObstacleMap & map, const MonitorConfig & cfg)
{
  MonitorVerdict verdict;
  if (state.velocity.norm() < cfg.min_speed) {
    return verdict;
  }
  // Neighbors arrive sorted by (distance, insertion index), so keeping the first strict
  // minimum implements the tie-breaking rule.
  for (const auto & neighbor : map.k_nearest(state.position, cfg.k_nearest, cfg.query_radius)) {
    if (!(neighbor.distance > 0.0)) {
      continue;
    }
    const double proj = projection(state, neighbor.point);
    if (proj < 0.0) {
      continue;
    }
    const double cost = stop_cost(state, neighbor.point, cfg);
    ++verdict.evaluated_count;
    if (!verdict.worst_cost || cost < *verdict.worst_cost) {
      verdict.worst_cost = cost;
      verdict.worst_point = neighbor.point;
      verdict.worst_distance = neighbor.distance;
      verdict.worst_angle = std::acos(proj);
    }
  }
  verdict.triggered = verdict.worst_cost.has_value() && *verdict.worst_cost < cfg.beta;
  return verdict;
}

}  // namespace safestop
