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

#include <safestop/safestop.h>

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <optional>
#include <string>
#include <thread>

namespace
{

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitEmpty = 3;

volatile std::sig_atomic_t interrupted = 0;

void on_signal(int) { interrupted = 1; }

int report_error(const char * what, safestop_status status)
{
  std::fprintf(stderr, "safestop %s: %s: %s\n", what, safestop_status_string(status),
               safestop_last_error());
  return status == SAFESTOP_ERR_CONFIG || status == SAFESTOP_ERR_INVALID_ARGUMENT ? kExitUsage
                                                                                   : kExitFailure;
}

int cmd_run(const std::string & config, bool enabled, bool disabled,
            std::optional<std::size_t> trials, std::optional<std::uint64_t> seed,
            const std::string & out)
{
  safestop_run_overrides overrides;
  safestop_run_overrides_default(&overrides);
  if (enabled) {
    overrides.monitoring = SAFESTOP_MONITORING_ENABLED;
  } else if (disabled) {
    overrides.monitoring = SAFESTOP_MONITORING_DISABLED;
  }
  if (trials) {
    overrides.trials = *trials;
  }
  if (seed) {
    overrides.has_seed = 1;
    overrides.seed = *seed;
  }
  if (!out.empty()) {
    overrides.out_dir = out.c_str();
  }
  safestop_batch_info info;
  const auto status = safestop_run_batch(config.c_str(), &overrides, &info);
  if (status != SAFESTOP_OK) {
    return report_error("run", status);
  }
  std::printf("%zu trials written to %s\n", info.trials, info.output_dir);
  if (info.enabled_trials > 0) {
    std::printf("  monitoring enabled:  %zu/%zu succeeded\n", info.enabled_successes,
                info.enabled_trials);
  }
  if (info.disabled_trials > 0) {
    std::printf("  monitoring disabled: %zu/%zu succeeded\n", info.disabled_successes,
                info.disabled_trials);
  }
  return 0;
}

int cmd_report(const std::string & in, const std::string & out)
{
  safestop_report_info info;
  const auto status = safestop_report(in.c_str(), out.c_str(), &info);
  if (status == SAFESTOP_ERR_EMPTY) {
    std::fprintf(stderr, "safestop report: empty report: no trace logs found in %s\n", in.c_str());
    return kExitEmpty;
  }
  if (status != SAFESTOP_OK) {
    return report_error("report", status);
  }
  std::printf("%zu traces, %zu monitor ticks, %zu triggers\n", info.traces, info.monitor_ticks,
              info.triggers);
  if (info.separability_defined) {
    std::printf("linear separability (1-2 m/s, %zu samples): accuracy %.4f\n", info.band_samples,
                info.accuracy);
  } else {
    std::printf("linear separability (1-2 m/s, %zu samples): undefined\n", info.band_samples);
  }
  std::printf("triggers below min_speed: %zu\n", info.triggers_below_min_speed);
  return 0;
}

int cmd_serve(const std::string & config, std::uint16_t port)
{
  safestop_server * server = nullptr;
  auto status = safestop_server_create(config.c_str(), port, &server);
  if (status != SAFESTOP_OK) {
    return report_error("serve", status);
  }
  status = safestop_server_start(server);
  if (status != SAFESTOP_OK) {
    safestop_server_destroy(server);
    return report_error("serve", status);
  }
  std::uint16_t bound = 0;
  safestop_server_port(server, &bound);
  std::printf("serving teleop protocol on ws://127.0.0.1:%u (Ctrl-C to stop)\n", bound);
  std::fflush(stdout);

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::atomic<bool> done{false};
  std::thread watcher([&] {
    while (!interrupted && !done.load()) {
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    safestop_server_stop(server);
  });
  status = safestop_server_run(server);
  done.store(true);
  watcher.join();
  safestop_server_destroy(server);
  return status == SAFESTOP_OK ? 0 : report_error("serve", status);
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Imminent-collision monitoring and safe-stop simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", safestop_version());

  std::string config;
  bool enabled = false;
  bool disabled = false;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::string out;
  auto * run = app.add_subcommand("run", "Run a batch of seeded trials");
  run->add_option("--config", config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  auto * en = run->add_flag("--enabled", enabled, "Only run with monitoring enabled");
  auto * dis = run->add_flag("--disabled", disabled, "Only run with monitoring disabled");
  en->excludes(dis);
  run->add_option("--trials", trials, "Number of trials")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  run->add_option("--seed", seed, "First trial seed");
  run->add_option("--out", out, "Output directory for traces and summary.csv");

  std::string in_dir;
  std::string report_out;
  auto * report = app.add_subcommand("report", "Build scatter, stop-cost and separability reports");
  report->add_option("--in", in_dir, "Directory with trace logs")->required();
  report->add_option("--out", report_out, "Report output directory")->required();

  std::string serve_config;
  std::uint16_t port = 8765;
  auto * serve = app.add_subcommand("serve", "Host the live teleoperation websocket service");
  serve->add_option("--config", serve_config, "Run configuration (JSON)")
    ->required()
    ->check(CLI::ExistingFile);
  serve->add_option("--port", port, "TCP port (0 picks a free one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (run->parsed()) {
    return cmd_run(config, enabled, disabled, trials, seed, out);
  }
  if (report->parsed()) {
    return cmd_report(in_dir, report_out);
  }
  return cmd_serve(serve_config, port);
}
