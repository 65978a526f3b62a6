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

#include "safestop/safestop.h"

#include "geometry/errors.hpp"
#include "geometry/obstacle_map.hpp"
#include "geometry/point_cloud_io.hpp"
#include "monitor/collision_monitor.hpp"
#include "service/batch.hpp"
#include "service/logging.hpp"
#include "service/report.hpp"
#include "service/run_config.hpp"
#include "service/teleop_server.hpp"
#include "trajectory/stop_trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <memory>
#include <new>
#include <string>

struct safestop_map
{
  safestop::ObstacleMap map;
};

struct safestop_trajectory
{
  safestop::StopTrajectory trajectory;
};

struct safestop_server
{
  std::unique_ptr<safestop::TeleopServer> server;
};

namespace
{
thread_local std::string last_error;

safestop_status fail(safestop_status status, const std::string & message)
{
  last_error = message;
  safestop::log()->debug("C API error {}: {}", static_cast<int>(status), message);
  return status;
}

/// Runs f and maps exceptions onto status codes.
template<typename F>
safestop_status guarded(F && f)
{
  try {
    f();
    return SAFESTOP_OK;
  } catch (const safestop::InvalidInput & e) {
    return fail(SAFESTOP_ERR_INVALID_ARGUMENT, e.what());
  } catch (const safestop::DegenerateInput & e) {
    return fail(SAFESTOP_ERR_DEGENERATE, e.what());
  } catch (const safestop::ContractError & e) {
    return fail(SAFESTOP_ERR_CONTRACT, e.what());
  } catch (const safestop::SolveError & e) {
    return fail(SAFESTOP_ERR_SOLVE, e.what());
  } catch (const safestop::DomainError & e) {
    return fail(SAFESTOP_ERR_DOMAIN, e.what());
  } catch (const safestop::ConfigError & e) {
    return fail(SAFESTOP_ERR_CONFIG, e.what());
  } catch (const safestop::IoError & e) {
    return fail(SAFESTOP_ERR_IO, e.what());
  } catch (const safestop::GenerationError & e) {
    return fail(SAFESTOP_ERR_GENERATION, e.what());
  } catch (const std::bad_alloc &) {
    return fail(SAFESTOP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception & e) {
    return fail(SAFESTOP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SAFESTOP_ERR_INTERNAL, "unknown error");
  }
}

safestop::Vec3 vec(const double v[3]) { return safestop::Vec3(v[0], v[1], v[2]); }

void copy(const safestop::Vec3 & v, double out[3])
{
  out[0] = v.x();
  out[1] = v.y();
  out[2] = v.z();
}

safestop::VehicleState to_state(const safestop_state & s)
{
  safestop::VehicleState state;
  state.position = vec(s.position);
  state.velocity = vec(s.velocity);
  state.acceleration = vec(s.acceleration);
  state.jerk = vec(s.jerk);
  state.yaw = s.yaw;
  state.yaw_rate = s.yaw_rate;
  state.yaw_accel = s.yaw_accel;
  state.yaw_jerk = s.yaw_jerk;
  safestop::validate_state(state);
  return state;
}

safestop::MonitorConfig to_cpp(const safestop_monitor_config & c)
{
  safestop::MonitorConfig m;
  m.w1 = c.w1;
  m.w2 = c.w2;
  m.w3 = c.w3;
  m.beta = c.beta;
  m.monitor_rate = c.monitor_rate;
  m.k_nearest = c.k_nearest;
  m.query_radius = c.query_radius;
  m.min_speed = c.min_speed;
  m.validate();
  return m;
}

safestop::EscapeConfig to_cpp(const safestop_escape_config & c)
{
  if (c.strata_len > SAFESTOP_MAX_STRATA) {
    throw safestop::ConfigError("escape.strata_len exceeds SAFESTOP_MAX_STRATA");
  }
  safestop::EscapeConfig e;
  e.we1 = c.we1;
  e.we2 = c.we2;
  e.grid_half_extents = vec(c.grid_half_extents);
  e.grid_spacing = c.grid_spacing;
  e.velocity_scale = c.velocity_scale;
  e.strata.clear();
  for (size_t i = 0; i < c.strata_len; ++i) {
    e.strata.push_back(safestop::Stratum{c.strata_fraction[i], c.strata_count[i]});
  }
  e.clearance_radius = c.clearance_radius;
  e.rng_seed = c.rng_seed;
  e.validate();
  return e;
}

safestop::FeasibilityConfig to_cpp(const safestop_feasibility_config & c)
{
  safestop::FeasibilityConfig f;
  f.accel_bound = c.accel_bound;
  f.clearance_radius = c.clearance_radius;
  f.sample_dt = c.sample_dt;
  f.min_duration = c.min_duration;
  f.duration_gain = c.duration_gain;
  f.brake_fraction = c.brake_fraction;
  f.duration_speed_floor = c.duration_speed_floor;
  f.validate();
  return f;
}

#define REQUIRE(ptr)                                                            \
  do {                                                                          \
    if ((ptr) == nullptr) {                                                     \
      return fail(SAFESTOP_ERR_INVALID_ARGUMENT, #ptr " must not be NULL");     \
    }                                                                           \
  } while (0)

}  // namespace

extern "C" {

const char * safestop_version(void) { return "1.0.0"; }

const char * safestop_status_string(safestop_status status)
{
  switch (status) {
    case SAFESTOP_OK:
      return "ok";
    case SAFESTOP_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case SAFESTOP_ERR_DEGENERATE:
      return "degenerate input";
    case SAFESTOP_ERR_CONTRACT:
      return "contract violation";
    case SAFESTOP_ERR_SOLVE:
      return "solve failure";
    case SAFESTOP_ERR_DOMAIN:
      return "argument out of domain";
    case SAFESTOP_ERR_CONFIG:
      return "configuration error";
    case SAFESTOP_ERR_IO:
      return "i/o error";
    case SAFESTOP_ERR_GENERATION:
      return "scenario generation failed";
    case SAFESTOP_ERR_EMPTY:
      return "nothing to process";
    case SAFESTOP_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char * safestop_last_error(void) { return last_error.c_str(); }

void safestop_monitor_config_default(safestop_monitor_config * config)
{
  if (config == nullptr) {
    return;
  }
  const safestop::MonitorConfig m;
  *config = safestop_monitor_config{
    m.w1, m.w2, m.w3, m.beta, m.monitor_rate, m.k_nearest, m.query_radius, m.min_speed};
}

void safestop_escape_config_default(safestop_escape_config * config)
{
  if (config == nullptr) {
    return;
  }
  const safestop::EscapeConfig e;
  *config = safestop_escape_config{};
  config->we1 = e.we1;
  config->we2 = e.we2;
  copy(e.grid_half_extents, config->grid_half_extents);
  config->grid_spacing = e.grid_spacing;
  config->velocity_scale = e.velocity_scale;
  config->strata_len = e.strata.size();
  for (size_t i = 0; i < e.strata.size() && i < SAFESTOP_MAX_STRATA; ++i) {
    config->strata_fraction[i] = e.strata[i].fraction;
    config->strata_count[i] = e.strata[i].count;
  }
  config->clearance_radius = e.clearance_radius;
  config->rng_seed = e.rng_seed;
}

void safestop_feasibility_config_default(safestop_feasibility_config * config)
{
  if (config == nullptr) {
    return;
  }
  const safestop::FeasibilityConfig f;
  *config = safestop_feasibility_config{
    f.accel_bound, f.clearance_radius, f.sample_dt, f.min_duration,
    f.duration_gain, f.brake_fraction, f.duration_speed_floor};
}

safestop_status safestop_map_create(const double * points, size_t count, safestop_map ** out)
{
  REQUIRE(out);
  if (count > 0) {
    REQUIRE(points);
  }
  return guarded([&] {
    std::vector<safestop::Vec3> pts;
    pts.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      pts.emplace_back(points[3 * i], points[3 * i + 1], points[3 * i + 2]);
    }
    *out = new safestop_map{safestop::ObstacleMap(std::move(pts))};
  });
}

safestop_status safestop_map_load(const char * path, safestop_map ** out)
{
  REQUIRE(path);
  REQUIRE(out);
  return guarded(
    [&] { *out = new safestop_map{safestop::ObstacleMap(safestop::load_point_cloud(path))}; });
}

void safestop_map_destroy(safestop_map * map) { delete map; }

safestop_status safestop_map_point_count(const safestop_map * map, size_t * out)
{
  REQUIRE(map);
  REQUIRE(out);
  *out = map->map.point_count();
  return SAFESTOP_OK;
}

safestop_status safestop_map_nearest_distance(
  const safestop_map * map, const double query[3], double * out)
{
  REQUIRE(map);
  REQUIRE(query);
  REQUIRE(out);
  return guarded([&] { *out = map->map.nearest_distance(vec(query)); });
}

safestop_status safestop_map_k_nearest(
  const safestop_map * map, const double query[3], size_t k, double radius, double * out_points,
  double * out_distances, size_t * out_count)
{
  REQUIRE(map);
  REQUIRE(query);
  REQUIRE(out_count);
  return guarded([&] {
    const auto neighbors = map->map.k_nearest(vec(query), k, radius);
    for (size_t i = 0; i < neighbors.size(); ++i) {
      if (out_points != nullptr) {
        copy(neighbors[i].point, out_points + 3 * i);
      }
      if (out_distances != nullptr) {
        out_distances[i] = neighbors[i].distance;
      }
    }
    *out_count = neighbors.size();
  });
}

safestop_status safestop_check_imminent(
  const safestop_state * state, const safestop_map * map, const safestop_monitor_config * config,
  safestop_verdict * out)
{
  REQUIRE(state);
  REQUIRE(map);
  REQUIRE(out);
  return guarded([&] {
    const auto cfg = config != nullptr ? to_cpp(*config) : safestop::MonitorConfig{};
    const auto verdict = safestop::check_imminent(to_state(*state), map->map, cfg);
    *out = safestop_verdict{};
    out->triggered = verdict.triggered ? 1 : 0;
    out->evaluated = verdict.worst_cost ? 1 : 0;
    const double nan = std::nan("");
    copy(verdict.worst_point.value_or(safestop::Vec3::Constant(nan)), out->worst_point);
    out->worst_cost = verdict.worst_cost.value_or(nan);
    out->worst_distance = verdict.worst_distance.value_or(nan);
    out->worst_angle = verdict.worst_angle.value_or(nan);
    out->evaluated_count = verdict.evaluated_count;
  });
}

safestop_status safestop_generate_stop_trajectory(
  const safestop_state * state, const safestop_map * map, const safestop_escape_config * escape,
  const safestop_feasibility_config * feasibility, safestop_trajectory ** out)
{
  REQUIRE(state);
  REQUIRE(map);
  REQUIRE(out);
  return guarded([&] {
    const auto e = escape != nullptr ? to_cpp(*escape) : safestop::EscapeConfig{};
    const auto f = feasibility != nullptr ? to_cpp(*feasibility) : safestop::FeasibilityConfig{};
    *out = new safestop_trajectory{
      safestop::generate_stop_trajectory(to_state(*state), map->map, e, f)};
  });
}

void safestop_trajectory_destroy(safestop_trajectory * trajectory) { delete trajectory; }

safestop_status safestop_trajectory_duration(const safestop_trajectory * trajectory, double * out)
{
  REQUIRE(trajectory);
  REQUIRE(out);
  *out = trajectory->trajectory.duration();
  return SAFESTOP_OK;
}

safestop_status safestop_trajectory_kind_of(
  const safestop_trajectory * trajectory, safestop_trajectory_kind * out)
{
  REQUIRE(trajectory);
  REQUIRE(out);
  *out = trajectory->trajectory.kind == safestop::TrajectoryKind::polynomial
           ? SAFESTOP_TRAJECTORY_POLYNOMIAL
           : SAFESTOP_TRAJECTORY_FALLBACK_BRAKE;
  return SAFESTOP_OK;
}

safestop_status safestop_trajectory_escape_point(
  const safestop_trajectory * trajectory, double out[3], int * has_escape)
{
  REQUIRE(trajectory);
  REQUIRE(out);
  REQUIRE(has_escape);
  const auto & escape = trajectory->trajectory.escape_point;
  *has_escape = escape ? 1 : 0;
  copy(escape.value_or(safestop::Vec3::Constant(std::nan(""))), out);
  return SAFESTOP_OK;
}

safestop_status safestop_trajectory_evaluate(
  const safestop_trajectory * trajectory, double t, int order, double out[3], double * out_yaw)
{
  REQUIRE(trajectory);
  REQUIRE(out);
  return guarded([&] {
    const auto p = trajectory->trajectory.evaluate(t, order);
    copy(p.value, out);
    if (out_yaw != nullptr) {
      *out_yaw = p.yaw;
    }
  });
}

void safestop_run_overrides_default(safestop_run_overrides * overrides)
{
  if (overrides != nullptr) {
    *overrides = safestop_run_overrides{SAFESTOP_MONITORING_FROM_CONFIG, 0, 0, 0, nullptr};
  }
}

safestop_status safestop_run_batch(
  const char * config_path, const safestop_run_overrides * overrides, safestop_batch_info * out)
{
  REQUIRE(config_path);
  return guarded([&] {
    auto config = safestop::load_run_config(config_path);
    if (overrides != nullptr) {
      switch (overrides->monitoring) {
        case SAFESTOP_MONITORING_ENABLED:
          config.monitoring = safestop::MonitoringSelection::enabled;
          break;
        case SAFESTOP_MONITORING_DISABLED:
          config.monitoring = safestop::MonitoringSelection::disabled;
          break;
        case SAFESTOP_MONITORING_BOTH:
          config.monitoring = safestop::MonitoringSelection::both;
          break;
        case SAFESTOP_MONITORING_FROM_CONFIG:
          break;
        default:
          throw safestop::InvalidInput("overrides.monitoring: unknown value");
      }
      if (overrides->trials != 0) {
        config.trials = overrides->trials;
      }
      if (overrides->has_seed) {
        config.seed_base = overrides->seed;
      }
      if (overrides->out_dir != nullptr) {
        config.output_dir = overrides->out_dir;
      }
    }
    const auto batch = safestop::run_batch(config);
    if (out != nullptr) {
      *out = safestop_batch_info{};
      out->trials = batch.entries.size();
      std::snprintf(out->output_dir, sizeof(out->output_dir), "%s", config.output_dir.c_str());
      for (const auto & row : batch.rows) {
        if (row.monitoring_enabled) {
          out->enabled_trials = row.trials;
          out->enabled_successes = row.successes;
        } else {
          out->disabled_trials = row.trials;
          out->disabled_successes = row.successes;
        }
      }
    }
  });
}

safestop_status safestop_report(
  const char * in_dir, const char * out_dir, safestop_report_info * out)
{
  REQUIRE(in_dir);
  REQUIRE(out_dir);
  bool empty = false;
  const auto status = guarded([&] {
    const auto summary = safestop::generate_report(in_dir, out_dir);
    empty = summary.empty();
    if (out != nullptr) {
      *out = safestop_report_info{};
      out->traces = summary.traces;
      out->monitor_ticks = summary.monitor_ticks;
      out->triggers = summary.triggers;
      out->band_samples = summary.band_samples;
      out->band_positives = summary.band_positives;
      out->separability_defined = summary.fit ? 1 : 0;
      out->accuracy = summary.fit ? summary.fit->accuracy : std::nan("");
      out->triggers_below_min_speed = summary.triggers_below_min_speed;
    }
  });
  if (status == SAFESTOP_OK && empty) {
    return fail(SAFESTOP_ERR_EMPTY, std::string("no trace logs in ") + in_dir);
  }
  return status;
}

safestop_status safestop_server_create(
  const char * config_path, uint16_t port, safestop_server ** out)
{
  REQUIRE(config_path);
  REQUIRE(out);
  return guarded([&] {
    const auto config = safestop::load_run_config(config_path);
    config.validate();
    auto scenario = safestop::make_scenario(config.scenario, config.seed_base);
    safestop::validate_scenario(scenario, config.world.feasibility.clearance_radius);
    safestop::ServeOptions options;
    options.port = port;
    auto world = config.world;
    world.monitoring_enabled = config.monitoring != safestop::MonitoringSelection::disabled;
    *out = new safestop_server{
      std::make_unique<safestop::TeleopServer>(std::move(scenario), world, options)};
  });
}

safestop_status safestop_server_start(safestop_server * server)
{
  REQUIRE(server);
  return guarded([&] { server->server->start(); });
}

safestop_status safestop_server_port(const safestop_server * server, uint16_t * out)
{
  REQUIRE(server);
  REQUIRE(out);
  *out = server->server->port();
  return SAFESTOP_OK;
}

safestop_status safestop_server_run(safestop_server * server)
{
  REQUIRE(server);
  return guarded([&] { server->server->run(); });
}

safestop_status safestop_server_stop(safestop_server * server)
{
  REQUIRE(server);
  return guarded([&] { server->server->stop(); });
}

void safestop_server_destroy(safestop_server * server) { delete server; }

}  // extern "C"
