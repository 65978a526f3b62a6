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

#ifndef SAFESTOP__SERVICE__TELEOP_SERVER_HPP_
#define SAFESTOP__SERVICE__TELEOP_SERVER_HPP_

#include "sim/scenario.hpp"
#include "sim/world.hpp"

#include <cstdint>
#include <memory>
#include <string>

namespace safestop
{

struct ServeOptions
{
  std::string address{"127.0.0.1"};
  std::uint16_t port{0};  // 0 picks a free port
  double snapshot_rate{20.0};  // Hz of simulated time
  double command_hold{0.5};  // s a command stays active without a refresh
  double time_scale{1.0};  // simulated seconds per wall-clock second
  double max_command_speed{5.0};  // m/s, longer commands are scaled down
  std::size_t max_obstacles{50};
  double trajectory_sample_dt{0.05};  // s
};

/**
 * Websocket teleoperation service.
 *
 * One simulation thread owns the World and steps it at wall-clock pace; one I/O thread runs the
 * sockets. Client messages reach the simulation through an inbox, and snapshots and events go
 * back as posted broadcasts. A client that violates the protocol gets an error event and is
 * disconnected; the simulation keeps running.
 */
class TeleopServer
{
public:
  TeleopServer(Scenario scenario, WorldConfig config, ServeOptions options = {});
  ~TeleopServer();

  TeleopServer(const TeleopServer &) = delete;
  TeleopServer & operator=(const TeleopServer &) = delete;

  /// Binds and starts both threads. Throws IoError when the port cannot be bound.
  void start();

  /// Port actually bound; valid after start().
  std::uint16_t port() const;

  /// start() if needed, then blocks until stop() is called and the threads have exited.
  void run();

  /// Thread-safe and idempotent; safe to call from any thread.
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace safestop

#endif  // SAFESTOP__SERVICE__TELEOP_SERVER_HPP_
