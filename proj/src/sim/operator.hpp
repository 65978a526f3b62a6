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

#ifndef SAFESTOP__SIM__OPERATOR_HPP_
#define SAFESTOP__SIM__OPERATOR_HPP_

#include "geometry/obstacle_map.hpp"
#include "geometry/types.hpp"
#include "sim/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace safestop
{

struct OperatorCommand
{
  Vec3 commanded_velocity{Vec3::Zero()};
  double commanded_yaw_rate{0.0};
  double timestamp{0.0};
};

enum class OperatorProfile { aggressive, cautious };

std::string to_string(OperatorProfile profile);
std::optional<OperatorProfile> parse_operator_profile(const std::string & name);

struct OperatorSettings
{
  double aggressive_speed{2.0};  // m/s
  double cautious_speed{1.0};  // m/s
  double heading_noise{0.2};  // rad, standard deviation
  double noise_hold{1.0};  // s a noise draw is held before redrawing
  double repulsion_range{2.0};  // m
  double repulsion_gain{1.5};
  double yaw_gain{2.0};  // 1/s
  double max_yaw_rate{2.0};  // rad/s
};

/**
 * Simulated teleoperator steering toward the scenario goal.
 *
 * aggressive: full speed at the goal with a seeded heading offset, redrawn every noise_hold
 * seconds, and no obstacle awareness. cautious: slower, pushed away from the closest obstacle.
 * Output depends only on (state, seed, step_index).
 */
OperatorCommand scripted_operator(
  const VehicleState & state, const Scenario & scenario, const ObstacleMap & map,
  OperatorProfile profile, std::uint64_t seed, std::uint64_t step_index, double dt,
  const OperatorSettings & settings = {});

/// Yaw rate that turns the vehicle toward the horizontal direction of the given velocity.
double face_velocity_yaw_rate(
  double yaw, const Vec3 & velocity, const OperatorSettings & settings = {});

}  // namespace safestop

#endif  // SAFESTOP__SIM__OPERATOR_HPP_
