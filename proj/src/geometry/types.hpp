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

#ifndef SAFESTOP__GEOMETRY__TYPES_HPP_
#define SAFESTOP__GEOMETRY__TYPES_HPP_

#include <Eigen/Dense>

namespace safestop
{

using Vec3 = Eigen::Vector3d;

inline bool is_finite(const Vec3 & v)
{
  return v.allFinite();
}

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

/// Translational state up to jerk, plus yaw and its first three derivatives.
struct VehicleState
{
  Vec3 position{Vec3::Zero()};
  Vec3 velocity{Vec3::Zero()};
  Vec3 acceleration{Vec3::Zero()};
  Vec3 jerk{Vec3::Zero()};
  double yaw{0.0};
  double yaw_rate{0.0};
  double yaw_accel{0.0};
  double yaw_jerk{0.0};

  double speed() const { return velocity.norm(); }
};

/// Throws InvalidInput when any field is non-finite. Yaw is normalized in place.
void validate_state(VehicleState & state);

/// Orthonormal frame whose forward axis is the direction of travel.
struct VelocityFrame
{
  Vec3 forward;
  Vec3 lateral;
  Vec3 up;

  Vec3 to_world(const Vec3 & local) const
  {
    return forward * local.x() + lateral * local.y() + up * local.z();
  }
};

/// Throws DegenerateInput for a zero vector.
VelocityFrame make_velocity_frame(const Vec3 & velocity);

}  // namespace safestop

#endif  // SAFESTOP__GEOMETRY__TYPES_HPP_
