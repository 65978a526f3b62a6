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

#include "service/protocol.hpp"

#include <cmath>

namespace safestop
{
namespace
{
using nlohmann::json;

json vec(const Vec3 & v) { return json::array({v.x(), v.y(), v.z()}); }

json base(const char * type)
{
  return json{{"proto", kProtocolVersion}, {"type", type}};
}

double finite_number(const json & j, const char * key)
{
  auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw ProtocolError(std::string("command.") + key + ": expected a number");
  }
  const double v = it->get<double>();
  if (!std::isfinite(v)) {
    throw ProtocolError(std::string("command.") + key + ": must be finite");
  }
  return v;
}

}  // namespace

ClientMessage parse_client_message(std::string_view text)
{
  json j = json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ProtocolError("message is not a JSON object");
  }
  auto proto = j.find("proto");
  if (proto == j.end() || !proto->is_number_integer() || *proto != kProtocolVersion) {
    throw ProtocolError("proto: expected 1");
  }
  auto seq = j.find("seq");
  if (seq == j.end() || !seq->is_number_unsigned()) {
    throw ProtocolError("seq: expected a non-negative integer");
  }
  auto type = j.find("type");
  if (type == j.end() || !type->is_string()) {
    throw ProtocolError("type: expected a string");
  }

  ClientMessage m;
  m.seq = seq->get<std::uint64_t>();
  const std::string name = type->get<std::string>();
  if (name == "command") {
    m.type = ClientMessageType::command;
    auto velocity = j.find("velocity");
    if (velocity == j.end() || !velocity->is_array() || velocity->size() != 3) {
      throw ProtocolError("command.velocity: expected [vx, vy, vz]");
    }
    for (int i = 0; i < 3; ++i) {
      const auto & c = (*velocity)[i];
      if (!c.is_number() || !std::isfinite(c.get<double>())) {
        throw ProtocolError("command.velocity: expected finite numbers");
      }
      m.command.commanded_velocity[i] = c.get<double>();
    }
    m.command.commanded_yaw_rate = finite_number(j, "yaw_rate");
    m.command.timestamp = finite_number(j, "timestamp");
  } else if (name == "reset") {
    m.type = ClientMessageType::reset;
  } else if (name == "toggle_monitoring") {
    m.type = ClientMessageType::toggle_monitoring;
  } else {
    throw ProtocolError("type: unknown message type \"" + name + "\"");
  }
  return m;
}

json encode_client_message(const ClientMessage & message)
{
  json j;
  switch (message.type) {
    case ClientMessageType::command:
      j = base("command");
      j["velocity"] = vec(message.command.commanded_velocity);
      j["yaw_rate"] = message.command.commanded_yaw_rate;
      j["timestamp"] = message.command.timestamp;
      break;
    case ClientMessageType::reset:
      j = base("reset");
      break;
    case ClientMessageType::toggle_monitoring:
      j = base("toggle_monitoring");
      break;
  }
  j["seq"] = message.seq;
  return j;
}

json trajectory_samples(const StopTrajectory & trajectory, double dt)
{
  json out = json::array();
  for (const double t : trajectory.sample_times(dt)) {
    const Vec3 p = trajectory.evaluate(t).value;
    out.push_back(json::array({t, p.x(), p.y(), p.z()}));
  }
  return out;
}

json hello_message(const World & world, double snapshot_rate)
{
  json scenario = scenario_to_json(world.scenario());
  scenario.erase("extra_points");
  json j = base("hello");
  j["scenario"] = std::move(scenario);
  j["beta"] = world.config().monitor.beta;
  j["monitoring"] = world.monitoring_enabled();
  j["dt"] = world.config().dt;
  j["snapshot_rate"] = snapshot_rate;
  return j;
}

json snapshot_message(const World & world, std::size_t max_obstacles, double sample_dt)
{
  json j = base("snapshot");
  j["t"] = world.time();
  j["state"] = state_to_json(world.state());
  j["mode"] = to_string(world.mode());
  const auto & verdict = world.last_verdict();
  if (verdict && verdict->worst_cost) {
    j["stop_cost_min"] = *verdict->worst_cost;
  } else {
    j["stop_cost_min"] = nullptr;
  }
  j["beta"] = world.config().monitor.beta;
  j["monitoring"] = world.monitoring_enabled();

  json obstacles = json::array();
  if (max_obstacles > 0 && !world.map().empty()) {
    for (const auto & n : world.map().k_nearest(
           world.state().position, max_obstacles, world.config().monitor.query_radius))
    {
      obstacles.push_back(vec(n.point));
    }
  }
  j["nearest_obstacles"] = std::move(obstacles);

  const auto & trajectory = world.active_trajectory();
  j["stop_trajectory"] = world.mode() == Mode::stopping && trajectory
                           ? trajectory_samples(*trajectory, sample_dt)
                           : json::array();
  j["collided"] = world.collided();
  j["goal_reached"] = world.goal_reached();
  return j;
}

json event_message(const std::string & event, double time)
{
  json j = base("event");
  j["event"] = event;
  j["t"] = time;
  return j;
}

json stop_event_message(const World & world, const StopEventRecord & stop, double sample_dt)
{
  json j = event_message("stop", stop.time);
  j["stop"] = {
    {"position", vec(stop.position)},
    {"velocity", vec(stop.velocity)},
    {"speed", stop.speed},
    {"obstacle_distance", stop.obstacle_distance},
    {"obstacle_angle", stop.obstacle_angle},
    {"stop_cost", stop.stop_cost},
    {"kind", stop.kind == TrajectoryKind::polynomial ? "polynomial" : "fallback_brake"}};
  const auto & trajectory = world.active_trajectory();
  j["stop_trajectory"] = trajectory ? trajectory_samples(*trajectory, sample_dt) : json::array();
  return j;
}

json error_message(const std::string & what)
{
  json j = base("event");
  j["event"] = "error";
  j["message"] = what;
  return j;
}

}  // namespace safestop
