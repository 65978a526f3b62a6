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

#ifndef SAFESTOP__SERVICE__PROTOCOL_HPP_
#define SAFESTOP__SERVICE__PROTOCOL_HPP_

#include "geometry/errors.hpp"
#include "sim/world.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace safestop
{

/*
 * Teleop wire protocol, version 1. Every message is one JSON text frame carrying "proto": 1,
 * a per-direction strictly increasing "seq" and a "type".
 *
 * client -> server
 *   command            velocity [vx, vy, vz] (m/s, world frame), yaw_rate (rad/s), timestamp (s)
 *   reset
 *   toggle_monitoring
 *
 * server -> client
 *   hello              scenario, beta, monitoring, dt, snapshot_rate
 *   snapshot           t, state, mode, stop_cost_min, beta, monitoring, nearest_obstacles,
 *                      stop_trajectory, collided, goal_reached
 *   event              event: stop | collision | goal | reset | monitoring_toggled | error
 */
inline constexpr int kProtocolVersion = 1;

class ProtocolError : public Error
{
public:
  using Error::Error;
};

enum class ClientMessageType { command, reset, toggle_monitoring };

struct ClientMessage
{
  ClientMessageType type{ClientMessageType::command};
  std::uint64_t seq{0};
  OperatorCommand command;
};

/// Throws ProtocolError describing the first problem found.
ClientMessage parse_client_message(std::string_view text);

/// Encodes a client message (the inverse of parse_client_message).
nlohmann::json encode_client_message(const ClientMessage & message);

/// Stop trajectory as [[t, x, y, z], ...] sampled every dt, end point included.
nlohmann::json trajectory_samples(const StopTrajectory & trajectory, double dt);

nlohmann::json hello_message(const World & world, double snapshot_rate);

/// Snapshot of the world; nearest_obstacles holds up to max_obstacles points within the
/// monitor's query radius. stop_trajectory is empty unless the vehicle is stopping.
nlohmann::json snapshot_message(const World & world, std::size_t max_obstacles, double sample_dt);

nlohmann::json event_message(const std::string & event, double time);

nlohmann::json stop_event_message(
  const World & world, const StopEventRecord & stop, double sample_dt);

nlohmann::json error_message(const std::string & what);

}  // namespace safestop

#endif  // SAFESTOP__SERVICE__PROTOCOL_HPP_
