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

#include "sim/operator.hpp"

#include "sim/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace safestop
{

std::string to_string(OperatorProfile profile)
{
  return profile == OperatorProfile::aggressive ? "aggressive" : "cautious";
}

std::optional<OperatorProfile> parse_operator_profile(const std::string & name)
{
  if (name == "aggressive") return OperatorProfile::aggressive;
  if (name == "cautious") return OperatorProfile::cautious;
  return std::nullopt;
}

double face_velocity_yaw_rate(double yaw, const Vec3 & velocity, const OperatorSettings & settings)
{
  if (std::hypot(velocity.x(), velocity.y()) < 1e-6) {
    return 0.0;
  }
  const double error = normalize_angle(std::atan2(velocity.y(), velocity.x()) - yaw);
  return std::clamp(settings.yaw_gain * error, -settings.max_yaw_rate, settings.max_yaw_rate);
}

OperatorCommand scripted_operator(
  const VehicleState & state, const Scenario & scenario, const ObstacleMap & map,
  OperatorProfile profile, std::uint64_t seed, std::uint64_t step_index, double dt,
  const OperatorSettings & settings)
{
  OperatorCommand command;
  command.timestamp = static_cast<double>(step_index) * dt;
  const Vec3 to_goal = scenario.goal - state.position;
  if (to_goal.norm() <= scenario.goal_radius) {
    return command;
  }
  Vec3 direction = to_goal.normalized();

  if (profile == OperatorProfile::aggressive) {
    const auto segment =
      static_cast<std::uint64_t>(std::floor(command.timestamp / settings.noise_hold + 1e-9));
    std::mt19937_64 rng(mix_seed(seed, segment));
    std::normal_distribution<double> noise(0.0, settings.heading_noise);
    const double offset = noise(rng);
    const double c = std::cos(offset);
    const double s = std::sin(offset);
    direction = Vec3(c * direction.x() - s * direction.y(), s * direction.x() + c * direction.y(),
                     direction.z());
    command.commanded_velocity = settings.aggressive_speed * direction;
  } else {
    const auto nearest = map.k_nearest(state.position, 1, settings.repulsion_range);
    if (!nearest.empty() && nearest.front().distance > 0.0) {
      const Vec3 away = (state.position - nearest.front().point) / nearest.front().distance;
      const double weight = settings.repulsion_gain *
                            (settings.repulsion_range - nearest.front().distance) /
                            settings.repulsion_range;
      direction += weight * away;
    }
    if (direction.norm() > 1e-9) {
      direction.normalize();
    }
    command.commanded_velocity = settings.cautious_speed * direction;
  }
  command.commanded_yaw_rate =
    face_velocity_yaw_rate(state.yaw, command.commanded_velocity, settings);
  return command;
}

}  // namespace safestop
