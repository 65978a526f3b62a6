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

#ifndef SAFESTOP__SIM__TRIAL_HPP_
#define SAFESTOP__SIM__TRIAL_HPP_

#include "sim/operator.hpp"
#include "sim/scenario.hpp"
#include "sim/world.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace safestop
{

enum class TrialOutcome { success, collision, timeout };

std::string to_string(TrialOutcome outcome);
std::optional<TrialOutcome> parse_trial_outcome(const std::string & name);

struct TrialResult
{
  bool success{false};
  bool collided{false};
  double duration{0.0};
  double mean_speed{0.0};
  double mean_obstacle_distance{0.0};
  double min_obstacle_distance{0.0};
  std::size_t stops_issued{0};
  std::vector<StopEventRecord> stop_events;
  std::uint64_t seed{0};
};

struct TrialSpec
{
  Scenario scenario;
  std::shared_ptr<const ObstacleMap> map;
  OperatorProfile profile{OperatorProfile::aggressive};
  bool monitoring_enabled{true};
  std::uint64_t seed{0};
  double timeout{120.0};  // s
  WorldConfig world;
  OperatorSettings operator_settings;
};

struct TrialRun
{
  TrialResult result;
  TrialOutcome outcome{TrialOutcome::timeout};
  /// One record per tick plus the final state.
  std::vector<TickRecord> trace;
};

/// Steps the world under the scripted operator until goal, collision or timeout.
TrialRun run_trial(const TrialSpec & spec);

/// Trial metrics from a trace; the same arithmetic serves live runs and reloaded logs.
TrialResult compute_trial_metrics(
  const std::vector<TickRecord> & trace, TrialOutcome outcome, std::uint64_t seed);

/// Key/value header carried by every trace file.
using TraceMetadata = std::map<std::string, std::string>;

/**
 * Trace log: a "# trace v1 key=value ..." line, then CSV rows
 *   t,mode,px,py,pz,vx,vy,vz,yaw,nearest_obstacle_dist,stop_cost_min,
 *   worst_obstacle_dist,worst_obstacle_angle,speed,monitor_tick,triggered
 * Each tick row describes the state the tick started from. A tick whose monitor fired is
 * followed by a row with mode "stop_event". Values use round-trip precision; absent monitor
 * values are empty cells.
 */
void write_trace(std::ostream & out, const TraceMetadata & metadata,
                 const std::vector<TickRecord> & trace);

struct ParsedTrace
{
  TraceMetadata metadata;
  std::vector<TickRecord> trace;
};

/// Throws InvalidInput with the line number on malformed input.
ParsedTrace read_trace(std::istream & in);

}  // namespace safestop

#endif  // SAFESTOP__SIM__TRIAL_HPP_
