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

#ifndef SAFESTOP__MONITOR__COLLISION_MONITOR_HPP_
#define SAFESTOP__MONITOR__COLLISION_MONITOR_HPP_

#include "geometry/obstacle_map.hpp"
#include "geometry/types.hpp"

#include <cstddef>
#include <optional>

namespace safestop
{

struct MonitorConfig
{
  double w1{0.6};  // distance weight
  double w2{0.4};  // speed weight
  double w3{1.2};  // heading-offset weight
  double beta{0.3};
  double monitor_rate{20.0};  // Hz
  std::size_t k_nearest{50};
  double query_radius{5.0};  // m
  double min_speed{0.05};  // m/s

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

struct MonitorVerdict
{
  bool triggered{false};
  std::optional<Vec3> worst_point;
  std::optional<double> worst_cost;
  /// Distance and heading offset (rad) of worst_point; present together with it.
  std::optional<double> worst_distance;
  std::optional<double> worst_angle;
  std::size_t evaluated_count{0};
};

/// Cosine of the angle between the velocity and the vector from the vehicle to p.
/// Throws DegenerateInput for zero velocity or p at the vehicle position.
double projection(const VehicleState & state, const Vec3 & p);

/// w1*|r| - w2*|v| + w3*acos(proj). Throws ContractError when p lies behind the vehicle.
double stop_cost(const VehicleState & state, const Vec3 & p, const MonitorConfig & cfg);

/**
 * Evaluates the stop criterion over the k nearest in-radius obstacles ahead of the vehicle.
 *
 * Below min_speed nothing is evaluated. Points behind the vehicle (negative projection) and
 * points coincident with it are skipped. The worst point is the cost argmin, ties resolved by
 * distance and then insertion order.
 */
MonitorVerdict check_imminent(
  const VehicleState & state, const ObstacleMap & map, const MonitorConfig & cfg);

}  // namespace safestop

#endif  // SAFESTOP__MONITOR__COLLISION_MONITOR_HPP_
