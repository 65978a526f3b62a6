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

#include "sim/trial.hpp"

#include "geometry/errors.hpp"
#include "sim/seeding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace safestop
{
namespace
{
constexpr const char * kTraceColumns =
  "t,mode,px,py,pz,vx,vy,vz,yaw,nearest_obstacle_dist,stop_cost_min,"
  "worst_obstacle_dist,worst_obstacle_angle,speed,monitor_tick,triggered";
constexpr std::size_t kTraceColumnCount = 16;

std::string format_double(double value)
{
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

std::string format_optional(const std::optional<double> & value)
{
  return value ? format_double(*value) : std::string();
}

double parse_double(const std::string & cell, std::size_t line)
{
  double value = 0.0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || end != cell.data() + cell.size()) {
    throw InvalidInput("trace line " + std::to_string(line) + ": bad number '" + cell + "'");
  }
  return value;
}

std::optional<double> parse_optional(const std::string & cell, std::size_t line)
{
  if (cell.empty()) {
    return std::nullopt;
  }
  return parse_double(cell, line);
}

void write_row(std::ostream & out, const TickRecord & r, const std::string & mode)
{
  const auto & s = r.state;
  out << format_double(r.t) << ',' << mode << ',' << format_double(s.position.x()) << ','
      << format_double(s.position.y()) << ',' << format_double(s.position.z()) << ','
      << format_double(s.velocity.x()) << ',' << format_double(s.velocity.y()) << ','
      << format_double(s.velocity.z()) << ',' << format_double(s.yaw) << ','
      << format_double(r.nearest_obstacle_distance) << ',' << format_optional(r.stop_cost_min)
      << ',' << format_optional(r.worst_distance) << ',' << format_optional(r.worst_angle) << ','
      << format_double(s.velocity.norm()) << ',' << (r.monitor_tick ? 1 : 0) << ','
      << (r.triggered ? 1 : 0) << '\n';
}
}  // namespace

std::string to_string(TrialOutcome outcome)
{
  switch (outcome) {
    case TrialOutcome::success:
      return "success";
    case TrialOutcome::collision:
      return "collision";
    case TrialOutcome::timeout:
      return "timeout";
  }
  return "unknown";
}

std::optional<TrialOutcome> parse_trial_outcome(const std::string & name)
{
  if (name == "success") return TrialOutcome::success;
  if (name == "collision") return TrialOutcome::collision;
  if (name == "timeout") return TrialOutcome::timeout;
  return std::nullopt;
}

TrialRun run_trial(const TrialSpec & spec)
{
  WorldConfig config = spec.world;
  config.monitoring_enabled = spec.monitoring_enabled;
  config.escape.rng_seed = mix_seed(spec.world.escape.rng_seed, spec.seed);
  World world(spec.scenario, spec.map, config);

  TrialRun run;
  const auto max_steps = static_cast<std::uint64_t>(std::ceil(spec.timeout / config.dt - 1e-9));
  run.trace.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(max_steps, 1U << 16U)) + 1);
  while (!world.terminal() && world.step_index() < max_steps) {
    const OperatorCommand command = scripted_operator(
      world.state(), world.scenario(), world.map(), spec.profile, spec.seed, world.step_index(),
      config.dt, spec.operator_settings);
    run.trace.push_back(world.step(command).record);
  }
  run.trace.push_back(world.observe());

  run.outcome = world.collided()       ? TrialOutcome::collision
                : world.goal_reached() ? TrialOutcome::success
                                       : TrialOutcome::timeout;
  run.result = compute_trial_metrics(run.trace, run.outcome, spec.seed);
  return run;
}

TrialResult compute_trial_metrics(
  const std::vector<TickRecord> & trace, TrialOutcome outcome, std::uint64_t seed)
{
  TrialResult result;
  result.seed = seed;
  result.success = outcome == TrialOutcome::success;
  result.collided = outcome == TrialOutcome::collision;
  if (trace.empty()) {
    return result;
  }
  result.duration = trace.back().t;
  double speed_sum = 0.0;
  double distance_sum = 0.0;
  double min_distance = std::numeric_limits<double>::infinity();
  for (const auto & record : trace) {
    speed_sum += record.state.velocity.norm();
    distance_sum += record.nearest_obstacle_distance;
    min_distance = std::min(min_distance, record.nearest_obstacle_distance);
    if (record.stop) {
      result.stop_events.push_back(*record.stop);
    }
  }
  const auto n = static_cast<double>(trace.size());
  result.mean_speed = speed_sum / n;
  result.mean_obstacle_distance = distance_sum / n;
  result.min_obstacle_distance = min_distance;
  result.stops_issued = result.stop_events.size();
  return result;
}

void write_trace(
  std::ostream & out, const TraceMetadata & metadata, const std::vector<TickRecord> & trace)
{
  out << "# trace v1";
  for (const auto & [key, value] : metadata) {
    out << ' ' << key << '=' << value;
  }
  out << '\n' << kTraceColumns << '\n';
  for (const auto & record : trace) {
    write_row(out, record, to_string(record.mode));
    if (record.stop) {
      // The flagged row repeats the trigger state with the event's monitor values.
      TickRecord event = record;
      event.stop_cost_min = record.stop->stop_cost;
      event.worst_distance = record.stop->obstacle_distance;
      event.worst_angle = record.stop->obstacle_angle;
      write_row(out, event, "stop_event");
    }
  }
}

ParsedTrace read_trace(std::istream & in)
{
  ParsedTrace parsed;
  std::string line;
  std::size_t line_number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) {
      continue;
    }
    if (line[0] == '#') {
      std::istringstream tokens(line.substr(1));
      std::string token;
      while (tokens >> token) {
        if (const auto eq = token.find('='); eq != std::string::npos) {
          parsed.metadata[token.substr(0, eq)] = token.substr(eq + 1);
        }
      }
      continue;
    }
    if (!header_seen) {
      if (line != kTraceColumns) {
        throw InvalidInput("trace line " + std::to_string(line_number) + ": unexpected header");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cells.size() != kTraceColumnCount) {
      throw InvalidInput(
        "trace line " + std::to_string(line_number) + ": expected " +
        std::to_string(kTraceColumnCount) + " columns");
    }
    const auto n = line_number;
    if (cells[1] == "stop_event") {
      if (parsed.trace.empty() || !parsed.trace.back().triggered) {
        throw InvalidInput("trace line " + std::to_string(n) + ": stop_event without trigger");
      }
      TickRecord & owner = parsed.trace.back();
      StopEventRecord stop;
      stop.time = parse_double(cells[0], n);
      stop.position = Vec3(parse_double(cells[2], n), parse_double(cells[3], n), parse_double(cells[4], n));
      stop.velocity = Vec3(parse_double(cells[5], n), parse_double(cells[6], n), parse_double(cells[7], n));
      stop.speed = stop.velocity.norm();
      stop.stop_cost = parse_double(cells[10], n);
      stop.obstacle_distance = parse_double(cells[11], n);
      stop.obstacle_angle = parse_double(cells[12], n);
      owner.stop = stop;
      continue;
    }
    const auto mode = parse_mode(cells[1]);
    if (!mode) {
      throw InvalidInput("trace line " + std::to_string(n) + ": unknown mode '" + cells[1] + "'");
    }
    TickRecord record;
    record.t = parse_double(cells[0], n);
    record.mode = *mode;
    record.state.position =
      Vec3(parse_double(cells[2], n), parse_double(cells[3], n), parse_double(cells[4], n));
    record.state.velocity =
      Vec3(parse_double(cells[5], n), parse_double(cells[6], n), parse_double(cells[7], n));
    record.state.yaw = parse_double(cells[8], n);
    record.nearest_obstacle_distance = parse_double(cells[9], n);
    record.stop_cost_min = parse_optional(cells[10], n);
    record.worst_distance = parse_optional(cells[11], n);
    record.worst_angle = parse_optional(cells[12], n);
    record.monitor_tick = cells[14] == "1";
    record.triggered = cells[15] == "1";
    parsed.trace.push_back(record);
  }
  if (!header_seen) {
    throw InvalidInput("trace has no column header");
  }
  return parsed;
}

}  // namespace safestop
