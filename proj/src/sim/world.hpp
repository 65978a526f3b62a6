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

#ifndef SAFESTOP__SIM__WORLD_HPP_
#define SAFESTOP__SIM__WORLD_HPP_

#include "escape/escape_sampler.hpp"
#include "geometry/obstacle_map.hpp"
#include "monitor/collision_monitor.hpp"
#include "sim/operator.hpp"
#include "sim/scenario.hpp"
#include "trajectory/stop_trajectory.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace safestop
{

enum class Mode { teleop, stopping, recovery };

std::string to_string(Mode mode);
std::optional<Mode> parse_mode(const std::string & name);

struct WorldConfig
{
  double dt{0.01};  // s
  double velocity_time_constant{0.3};  // s
  double recovery_duration{1.0};  // s
  double contact_radius{0.15};  // m
  bool monitoring_enabled{true};
  MonitorConfig monitor;
  EscapeConfig escape;
  FeasibilityConfig feasibility;

  void validate() const;
};

/// What the monitor saw when it fired.
struct StopEventRecord
{
  double time{0.0};
  Vec3 position{Vec3::Zero()};
  Vec3 velocity{Vec3::Zero()};
  double speed{0.0};
  double obstacle_distance{0.0};  // to the worst point
  double obstacle_angle{0.0};  // heading offset of the worst point, rad
  double stop_cost{0.0};
  TrajectoryKind kind{TrajectoryKind::polynomial};
};

/// State at the start of a tick together with the monitor evaluation made on it.
struct TickRecord
{
  double t{0.0};
  Mode mode{Mode::teleop};
  VehicleState state;
  double nearest_obstacle_distance{0.0};
  bool monitor_tick{false};
  std::optional<double> stop_cost_min;
  std::optional<double> worst_distance;
  std::optional<double> worst_angle;
  bool triggered{false};
  std::optional<StopEventRecord> stop;
};

enum class WorldEventType { stop_issued, stop_completed, recovery_completed, collision, goal_reached };

std::string to_string(WorldEventType type);

struct WorldEvent
{
  WorldEventType type;
  double time{0.0};
  std::optional<StopEventRecord> stop;
};

struct StepResult
{
  TickRecord record;
  std::vector<WorldEvent> events;
};

/**
 * Single-owner discrete-time world.
 *
 * teleop: first-order velocity lag toward the command; the monitor runs at monitor_rate and a
 * trigger switches to stopping on the same tick. stopping: the stop trajectory is followed
 * exactly and the monitor is suspended. recovery: in-place yaw toward the goal, then teleop.
 * Collision and goal are latched; once either is set, step() leaves the state unchanged.
 */
class World
{
public:
  World(Scenario scenario, std::shared_ptr<const ObstacleMap> map, WorldConfig config);

  /// Advances by dt (0 < dt <= 1 / monitor_rate).
  StepResult step(const OperatorCommand & command, double dt);
  StepResult step(const OperatorCommand & command) { return step(command, config_.dt); }

  /// Current state as a record, without running the monitor.
  TickRecord observe() const;

  void reset();
  void set_monitoring(bool enabled) { config_.monitoring_enabled = enabled; }

  const VehicleState & state() const { return state_; }
  Mode mode() const { return mode_; }
  double time() const { return time_; }
  std::uint64_t step_index() const { return step_index_; }
  bool collided() const { return collided_; }
  bool goal_reached() const { return goal_reached_; }
  bool terminal() const { return collided_ || goal_reached_; }
  bool monitoring_enabled() const { return config_.monitoring_enabled; }
  std::size_t stops_issued() const { return stops_issued_; }
  const std::optional<StopTrajectory> & active_trajectory() const { return trajectory_; }
  const std::optional<MonitorVerdict> & last_verdict() const { return last_verdict_; }
  const Scenario & scenario() const { return scenario_; }
  const ObstacleMap & map() const { return *map_; }
  const WorldConfig & config() const { return config_; }

private:
  void integrate_teleop(const OperatorCommand & command, double dt);
  void begin_recovery();

  Scenario scenario_;
  std::shared_ptr<const ObstacleMap> map_;
  WorldConfig config_;

  VehicleState state_;
  Mode mode_{Mode::teleop};
  double time_{0.0};
  std::uint64_t step_index_{0};
  double next_monitor_time_{0.0};
  bool collided_{false};
  bool goal_reached_{false};
  std::size_t stops_issued_{0};

  std::optional<StopTrajectory> trajectory_;
  double trajectory_elapsed_{0.0};
  double recovery_elapsed_{0.0};
  double recovery_yaw_start_{0.0};
  double recovery_yaw_delta_{0.0};
  std::optional<MonitorVerdict> last_verdict_;
};

}  // namespace safestop

#endif  // SAFESTOP__SIM__WORLD_HPP_
