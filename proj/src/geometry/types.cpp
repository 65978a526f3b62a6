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

#include "geometry/types.hpp"

#include "geometry/errors.hpp"

#include <cmath>
#include <numbers>

namespace safestop
{

double normalize_angle(double angle)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(angle, two_pi);
  if (wrapped <= -std::numbers::pi) {
    wrapped += two_pi;
  } else if (wrapped > std::numbers::pi) {
    wrapped -= two_pi;
  }
  return wrapped;
}

void validate_state(VehicleState & state)
{
  if (
    !is_finite(state.position) || !is_finite(state.velocity) || !is_finite(state.acceleration) ||
    !is_finite(state.jerk)) {
    throw InvalidInput("vehicle state has a non-finite translational component");
  }
  if (
    !std::isfinite(state.yaw) || !std::isfinite(state.yaw_rate) ||
    !std::isfinite(state.yaw_accel) || !std::isfinite(state.yaw_jerk)) {
    throw InvalidInput("vehicle state has a non-finite yaw component");
  }
  state.yaw = normalize_angle(state.yaw);
}

VelocityFrame make_velocity_frame(const Vec3 & velocity)
{
  const double speed = velocity.norm();
  if (!(speed > 0.0)) {
    throw DegenerateInput("velocity frame is undefined at zero velocity");
  }
  VelocityFrame frame;
  frame.forward = velocity / speed;
  // Pick the world axis least aligned with travel as the reference "up".
  Vec3 reference = Vec3::UnitZ();
  if (std::abs(frame.forward.z()) > 0.9) {
    reference = Vec3::UnitX();
  }
  frame.lateral = reference.cross(frame.forward).normalized();
  frame.up = frame.forward.cross(frame.lateral);
  return frame;
}

}  // namespace safestop
