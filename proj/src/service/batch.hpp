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

#ifndef SAFESTOP__SERVICE__BATCH_HPP_
#define SAFESTOP__SERVICE__BATCH_HPP_

#include "service/run_config.hpp"
#include "sim/trial.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace safestop
{

struct TrialJob
{
  std::size_t index{0};
  std::uint64_t seed{0};
  bool monitoring_enabled{true};
};

/// Trial list in output order. "both" pairs seeds: the first ceil(N/2) seeds run enabled, the
/// first floor(N/2) run disabled.
std::vector<TrialJob> plan_trials(const RunConfig & config);

std::string trace_file_name(const TrialJob & job);

struct TrialEntry
{
  TrialJob job;
  TrialOutcome outcome{TrialOutcome::timeout};
  TrialResult result;
  std::filesystem::path trace_file;
};

struct MeanSd
{
  double mean{0.0};
  double sd{0.0};  // sample standard deviation; 0 for a single value
};

std::optional<MeanSd> mean_sd(const std::vector<double> & values);

/// One summary line per monitoring setting.
struct SummaryRow
{
  bool monitoring_enabled{true};
  std::size_t trials{0};
  std::size_t successes{0};
  double success_rate{0.0};
  std::optional<MeanSd> velocity;  // per-trial mean speed
  std::optional<MeanSd> distance;  // per-trial mean obstacle distance
  std::optional<MeanSd> min_distance;  // per-trial minimum obstacle distance
  std::optional<MeanSd> stops;  // stops issued per trial
  std::optional<MeanSd> trigger_velocity;  // over all stop events
  std::optional<MeanSd> trigger_distance;  // over all stop events
};

/// Enabled row first; settings without trials are omitted.
std::vector<SummaryRow> summarize(const std::vector<TrialEntry> & entries);

/// CSV with 4-decimal values; undefined statistics are empty cells.
void write_summary(std::ostream & out, const std::vector<SummaryRow> & rows);

struct BatchResult
{
  std::vector<TrialEntry> entries;
  std::vector<SummaryRow> rows;
  std::filesystem::path summary_file;
};

/// Runs every planned trial (in parallel), writes one trace per trial plus summary.csv into
/// config.output_dir. Results are merged in plan order, so output does not depend on scheduling.
BatchResult run_batch(const RunConfig & config);

/// Reloads every trace in a directory and rebuilds the entries from the logged samples alone.
std::vector<TrialEntry> load_trace_directory(const std::filesystem::path & dir);

/// Trace files (trace_*.csv) in a directory, sorted by name.
std::vector<std::filesystem::path> list_trace_files(const std::filesystem::path & dir);

}  // namespace safestop

#endif  // SAFESTOP__SERVICE__BATCH_HPP_
