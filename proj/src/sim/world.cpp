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

#include "sim/world.hpp"

#include "geometry/errors.hpp"
#include "sim/seeding.hpp"

#include <cmath>
#include <utility>

namespace safestop
{
namespace
{
constexpr double kTimeSlack = 1e-9;
}

std::string to_string(Mode mode)
{
  switch (mode) {
    case Mode::teleop:
      return "teleop";
    case Mode::stopping:
      return "stopping";
    case Mode::recovery:
      return "recovery";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(const std::string & name)
{
  if (name == "teleop") return Mode::teleop;
  if (name == "stopping") return Mode::stopping;
  if (name == "recovery") return Mode::recovery;
  return std::nullopt;
}

std::string to_string(WorldEventType type)
{
  switch (type) {
    case WorldEventType::stop_issued:
      return "stop";
    case WorldEventType::stop_completed:
      return "stop_completed";
    case WorldEventType::recovery_completed:
      return "recovery_completed";
    case WorldEventType::collision:
      return "collision";
    case WorldEventType::goal_reached:
      return "goal";
  }
  return "unknown";
}

void WorldConfig::validate() const
{
  monitor.validate();
  escape.validate();
  feasibility.validate();
  if (!(dt > 0.0) || dt > 1.0 / monitor.monitor_rate + kTimeSlack) {
    throw ConfigError("world.dt must be in (0, 1 / monitor_rate]");
  }
  if (!(velocity_time_constant > 0.0)) {
    throw ConfigError("world.velocity_time_constant must be positive");
  }
  if (!(recovery_duration >= 0.0)) {
    throw ConfigError("world.recovery_duration must be non-negative");
  }
  if (!(contact_radius > 0.0)) {
    throw ConfigError("world.contact_radius must be positive");
  }
}

World::World(Scenario scenario, std::shared_ptr<const ObstacleMap> map, WorldConfig config)
: scenario_(std::move(scenario)), map_(std::move(map)), config_(std::move(config))
{
  if (!map_) {
    throw InvalidInput("world requires an obstacle map");
  }
  config_.validate();
  reset();
}

void World::reset()
{
  state_ = scenario_.start;
  validate_state(state_);
  mode_ = Mode::teleop;
  time_ = 0.0;
  step_index_ = 0;
  next_monitor_time_ = 0.0;
  collided_ = false;
  goal_reached_ = false;
  stops_issued_ = 0;
  trajectory_.reset();
  trajectory_elapsed_ = 0.0;
  recovery_elapsed_ = 0.0;
  last_verdict_.reset();
}

TickRecord World::observe() const
{
  TickRecord record;
  record.t = time_;
  record.mode = mode_;
  record.state = state_;
  record.nearest_obstacle_distance = map_->nearest_distance(state_.position);
  return record;
}

void World::integrate_teleop(const OperatorCommand & command, double dt)
{
  const double tau = config_.velocity_time_constant;
  const double decay = std::exp(-dt / tau);
  const Vec3 & target = command.commanded_velocity;
  const Vec3 lag = state_.velocity - target;
  state_.position += target * dt + lag * tau * (1.0 - decay);
  state_.velocity = target + lag * decay;
  state_.acceleration = (target - state_.velocity) / tau;
  state_.jerk = -state_.acceleration / tau;
  state_.yaw = normalize_angle(state_.yaw + command.commanded_yaw_rate * dt);
  state_.yaw_rate = command.commanded_yaw_rate;
  state_.yaw_accel = 0.0;
  state_.yaw_jerk = 0.0;
}

void World::begin_recovery()
{
  mode_ = Mode::recovery;
  recovery_elapsed_ = 0.0;
  recovery_yaw_start_ = state_.yaw;
  const Vec3 to_goal = scenario_.goal - state_.position;
  const double bearing = std::hypot(to_goal.x(), to_goal.y()) > 1e-9
                           ? std::atan2(to_goal.y(), to_goal.x())
                           : state_.yaw;
  recovery_yaw_delta_ = normalize_angle(bearing - state_.yaw);
}

StepResult World::step(const OperatorCommand & command, double dt)
{
  if (!(dt > 0.0) || dt > 1.0 / config_.monitor.monitor_rate + kTimeSlack) {
    throw InvalidInput("step dt must be in (0, 1 / monitor_rate]");
  }
  StepResult result;
  result.record = observe();
  if (terminal()) {
    return result;
  }
  TickRecord & record = result.record;

  if (mode_ == Mode::teleop && config_.monitoring_enabled &&
      time_ + kTimeSlack >= next_monitor_time_) {
    const double period = 1.0 / config_.monitor.monitor_rate;
    while (next_monitor_time_ <= time_ + kTimeSlack) {
      next_monitor_time_ += period;
    }
    const MonitorVerdict verdict = check_imminent(state_, *map_, config_.monitor);
    last_verdict_ = verdict;
    record.monitor_tick = true;
    record.stop_cost_min = verdict.worst_cost;
    record.worst_distance = verdict.worst_distance;
    record.worst_angle = verdict.worst_angle;
    if (verdict.triggered) {
      EscapeConfig escape = config_.escape;
      escape.rng_seed = mix_seed(config_.escape.rng_seed, stops_issued_);
      trajectory_ = generate_stop_trajectory(state_, *map_, escape, config_.feasibility);
      trajectory_elapsed_ = 0.0;
      mode_ = Mode::stopping;
      ++stops_issued_;

      StopEventRecord stop;
      stop.time = time_;
      stop.position = state_.position;
      stop.velocity = state_.velocity;
      stop.speed = state_.velocity.norm();
      stop.obstacle_distance = *verdict.worst_distance;
      stop.obstacle_angle = *verdict.worst_angle;
      stop.stop_cost = *verdict.worst_cost;
      stop.kind = trajectory_->kind;
      record.triggered = true;
      record.stop = stop;
      result.events.push_back(WorldEvent{WorldEventType::stop_issued, time_, stop});
    }
  }

  switch (mode_) {
    case Mode::teleop:
      integrate_teleop(command, dt);
      break;
    case Mode::stopping: {
      trajectory_elapsed_ += dt;
      const double T = trajectory_->duration();
      if (trajectory_elapsed_ + kTimeSlack >= T) {
        const auto end = trajectory_->evaluate(T, 0);
        state_.position = end.value;
        state_.velocity.setZero();
        state_.acceleration.setZero();
        state_.jerk.setZero();
        state_.yaw = normalize_angle(end.yaw);
        state_.yaw_rate = state_.yaw_accel = state_.yaw_jerk = 0.0;
        trajectory_.reset();
        begin_recovery();
        result.events.push_back(WorldEvent{WorldEventType::stop_completed, time_ + dt, {}});
      } else {
        const double t = trajectory_elapsed_;
        const auto p = trajectory_->evaluate(t, 0);
        const auto v = trajectory_->evaluate(t, 1);
        const auto a = trajectory_->evaluate(t, 2);
        const auto j = trajectory_->evaluate(t, 3);
        state_.position = p.value;
        state_.velocity = v.value;
        state_.acceleration = a.value;
        state_.jerk = j.value;
        state_.yaw = normalize_angle(p.yaw);
        state_.yaw_rate = v.yaw;
        state_.yaw_accel = a.yaw;
        state_.yaw_jerk = j.yaw;
      }
      break;
    }
    case Mode::recovery: {
      recovery_elapsed_ += dt;
      const double duration = config_.recovery_duration;
      const double s = duration > 0.0 ? std::min(recovery_elapsed_ / duration, 1.0) : 1.0;
      // Smoothstep profile so the yaw rate starts and ends at zero.
      const double blend = s * s * (3.0 - 2.0 * s);
      state_.yaw = normalize_angle(recovery_yaw_start_ + recovery_yaw_delta_ * blend);
      state_.yaw_rate =
        duration > 0.0 && s < 1.0 ? recovery_yaw_delta_ * 6.0 * s * (1.0 - s) / duration : 0.0;
      if (recovery_elapsed_ + kTimeSlack >= duration) {
        state_.yaw_rate = 0.0;
        mode_ = Mode::teleop;
        result.events.push_back(WorldEvent{WorldEventType::recovery_completed, time_ + dt, {}});
      }
      break;
    }
  }

  time_ += dt;
  ++step_index_;

  if (map_->nearest_distance(state_.position) < config_.contact_radius) {
    collided_ = true;
    trajectory_.reset();
    result.events.push_back(WorldEvent{WorldEventType::collision, time_, {}});
  } else if ((state_.position - scenario_.goal).norm() < scenario_.goal_radius) {
    goal_reached_ = true;
    result.events.push_back(WorldEvent{WorldEventType::goal_reached, time_, {}});
  }
  return result;
}

}  // namespace safestop
