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

#include "service/batch.hpp"

#include "geometry/errors.hpp"
#include "service/logging.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <thread>

namespace safestop
{
namespace
{

std::string format_value(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  // Avoid a "-0.0000" cell for tiny negative values.
  if (std::string(buf) == "-0.0000") {
    return "0.0000";
  }
  return buf;
}

std::string format_stat(const std::optional<MeanSd> & s)
{
  return s ? format_value(s->mean) + "," + format_value(s->sd) : std::string(",");
}

TraceMetadata trace_metadata(const RunConfig & config, const TrialJob & job, TrialOutcome outcome)
{
  return TraceMetadata{
    {"trial", std::to_string(job.index)},
    {"seed", std::to_string(job.seed)},
    {"monitoring", job.monitoring_enabled ? "enabled" : "disabled"},
    {"outcome", to_string(outcome)},
    {"scenario", to_string(config.scenario.kind)},
    {"profile", to_string(config.profile)},
    {"beta", format_value(config.world.monitor.beta)},
    {"min_speed", format_value(config.world.monitor.min_speed)},
  };
}

TrialEntry run_job(const RunConfig & config, const TrialJob & job)
{
  TrialSpec spec;
  spec.scenario = make_scenario(config.scenario, job.seed);
  validate_scenario(spec.scenario, config.world.feasibility.clearance_radius);
  spec.map = std::make_shared<ObstacleMap>(build_scenario_map(spec.scenario));
  spec.profile = config.profile;
  spec.monitoring_enabled = job.monitoring_enabled;
  spec.seed = job.seed;
  spec.timeout = config.timeout;
  spec.world = config.world;
  spec.operator_settings = config.operator_settings;

  TrialRun run = run_trial(spec);

  TrialEntry entry;
  entry.job = job;
  entry.outcome = run.outcome;
  entry.trace_file = config.output_dir / trace_file_name(job);
  std::ofstream out(entry.trace_file, std::ios::binary);
  if (!out) {
    throw IoError("cannot write trace file: " + entry.trace_file.string());
  }
  write_trace(out, trace_metadata(config, job, run.outcome), run.trace);
  if (!out) {
    throw IoError("failed writing trace file: " + entry.trace_file.string());
  }
  // Metrics come from the trace as logged, the same path a reload takes.
  entry.result = compute_trial_metrics(run.trace, run.outcome, job.seed);
  log()->info(
    "trial {} seed {} monitoring {}: {} after {:.2f} s, {} stops", job.index, job.seed,
    job.monitoring_enabled ? "on" : "off", to_string(run.outcome), entry.result.duration,
    entry.result.stops_issued);
  return entry;
}

}  // namespace

std::vector<TrialJob> plan_trials(const RunConfig & config)
{
  std::vector<TrialJob> jobs;
  auto add = [&](std::size_t count, bool enabled) {
    for (std::size_t i = 0; i < count; ++i) {
      jobs.push_back(TrialJob{jobs.size(), config.seed_base + i, enabled});
    }
  };
  switch (config.monitoring) {
    case MonitoringSelection::enabled:
      add(config.trials, true);
      break;
    case MonitoringSelection::disabled:
      add(config.trials, false);
      break;
    case MonitoringSelection::both:
      add((config.trials + 1) / 2, true);
      add(config.trials / 2, false);
      break;
  }
  return jobs;
}

std::string trace_file_name(const TrialJob & job)
{
  char buf[96];
  std::snprintf(
    buf, sizeof(buf), "trace_%s_seed%06" PRIu64 ".csv",
    job.monitoring_enabled ? "enabled" : "disabled", job.seed);
  return buf;
}

std::optional<MeanSd> mean_sd(const std::vector<double> & values)
{
  if (values.empty()) {
    return std::nullopt;
  }
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  MeanSd s;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) {
      ss += (v - s.mean) * (v - s.mean);
    }
    s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::vector<SummaryRow> summarize(const std::vector<TrialEntry> & entries)
{
  std::vector<SummaryRow> rows;
  for (const bool enabled : {true, false}) {
    SummaryRow row;
    row.monitoring_enabled = enabled;
    std::vector<double> velocity, distance, min_distance, stops, trigger_v, trigger_d;
    for (const auto & e : entries) {
      if (e.job.monitoring_enabled != enabled) {
        continue;
      }
      ++row.trials;
      row.successes += e.result.success ? 1 : 0;
      velocity.push_back(e.result.mean_speed);
      distance.push_back(e.result.mean_obstacle_distance);
      min_distance.push_back(e.result.min_obstacle_distance);
      stops.push_back(static_cast<double>(e.result.stops_issued));
      for (const auto & stop : e.result.stop_events) {
        trigger_v.push_back(stop.speed);
        trigger_d.push_back(stop.obstacle_distance);
      }
    }
    if (row.trials == 0) {
      continue;
    }
    row.success_rate = static_cast<double>(row.successes) / static_cast<double>(row.trials);
    row.velocity = mean_sd(velocity);
    row.distance = mean_sd(distance);
    row.min_distance = mean_sd(min_distance);
    row.stops = mean_sd(stops);
    row.trigger_velocity = mean_sd(trigger_v);
    row.trigger_distance = mean_sd(trigger_d);
    rows.push_back(row);
  }
  return rows;
}

void write_summary(std::ostream & out, const std::vector<SummaryRow> & rows)
{
  out << "monitoring,trials,successes,success_rate,velocity_mean,velocity_sd,distance_mean,"
         "distance_sd,min_distance_mean,min_distance_sd,stops_mean,stops_sd,"
         "trigger_velocity_mean,trigger_velocity_sd,trigger_distance_mean,trigger_distance_sd\n";
  for (const auto & r : rows) {
    out << (r.monitoring_enabled ? "enabled" : "disabled") << ',' << r.trials << ','
        << r.successes << ',' << format_value(r.success_rate) << ',' << format_stat(r.velocity)
        << ',' << format_stat(r.distance) << ',' << format_stat(r.min_distance) << ','
        << format_stat(r.stops) << ',' << format_stat(r.trigger_velocity) << ','
        << format_stat(r.trigger_distance) << '\n';
  }
}

BatchResult run_batch(const RunConfig & config)
{
  config.validate();
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + config.output_dir.string() + ": " +
                  ec.message());
  }

  const auto jobs = plan_trials(config);
  std::vector<TrialEntry> entries(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        entries[i] = run_job(config, jobs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  std::size_t threads = config.threads != 0 ? config.threads
                                            : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs.size());
  log()->info("running {} trials on {} threads", jobs.size(), threads);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto & t : pool) {
    t.join();
  }
  for (const auto & e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }

  BatchResult result;
  result.entries = std::move(entries);
  result.rows = summarize(result.entries);
  result.summary_file = config.output_dir / "summary.csv";
  std::ofstream out(result.summary_file, std::ios::binary);
  if (!out) {
    throw IoError("cannot write summary: " + result.summary_file.string());
  }
  write_summary(out, result.rows);
  return result;
}

std::vector<std::filesystem::path> list_trace_files(const std::filesystem::path & dir)
{
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto & item : std::filesystem::directory_iterator(dir)) {
    const std::string name = item.path().filename().string();
    if (item.is_regular_file() && name.rfind("trace_", 0) == 0 && item.path().extension() == ".csv") {
      files.push_back(item.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<TrialEntry> load_trace_directory(const std::filesystem::path & dir)
{
  std::vector<TrialEntry> entries;
  for (const auto & file : list_trace_files(dir)) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      throw IoError("cannot read trace: " + file.string());
    }
    ParsedTrace parsed;
    try {
      parsed = read_trace(in);
    } catch (const InvalidInput & e) {
      throw InvalidInput(file.filename().string() + ": " + e.what());
    }
    auto field = [&](const char * key) -> const std::string & {
      auto it = parsed.metadata.find(key);
      if (it == parsed.metadata.end()) {
        throw InvalidInput(file.filename().string() + ": trace header lacks " + key);
      }
      return it->second;
    };
    TrialEntry entry;
    entry.trace_file = file;
    entry.job.index = std::stoull(field("trial"));
    entry.job.seed = std::stoull(field("seed"));
    entry.job.monitoring_enabled = field("monitoring") == "enabled";
    const auto outcome = parse_trial_outcome(field("outcome"));
    if (!outcome) {
      throw InvalidInput(file.filename().string() + ": unknown outcome " + field("outcome"));
    }
    entry.outcome = *outcome;
    entry.result = compute_trial_metrics(parsed.trace, *outcome, entry.job.seed);
    entries.push_back(std::move(entry));
  }
  std::sort(entries.begin(), entries.end(), [](const TrialEntry & a, const TrialEntry & b) {
    return a.job.index < b.job.index;
  });
  return entries;
}

}  // namespace safestop
