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

/*
 * safestop C API.
 *
 * Every function returns a safestop_status. On failure, safestop_last_error() describes the
 * problem; the message is per thread and stays valid until the next failing call on that
 * thread. Handles are opaque and owned by the caller, who releases them with the matching
 * *_destroy function (NULL is accepted and ignored).
 */
#ifndef SAFESTOP_SAFESTOP_H_
#define SAFESTOP_SAFESTOP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SAFESTOP_API __declspec(dllexport)
#else
#define SAFESTOP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum safestop_status
{
  SAFESTOP_OK = 0,
  SAFESTOP_ERR_INVALID_ARGUMENT = 1,
  SAFESTOP_ERR_DEGENERATE = 2,
  SAFESTOP_ERR_CONTRACT = 3,
  SAFESTOP_ERR_SOLVE = 4,
  SAFESTOP_ERR_DOMAIN = 5,
  SAFESTOP_ERR_CONFIG = 6,
  SAFESTOP_ERR_IO = 7,
  SAFESTOP_ERR_GENERATION = 8,
  SAFESTOP_ERR_EMPTY = 9,
  SAFESTOP_ERR_INTERNAL = 10
} safestop_status;

SAFESTOP_API const char * safestop_version(void);
SAFESTOP_API const char * safestop_status_string(safestop_status status);
SAFESTOP_API const char * safestop_last_error(void);

/* ---- vehicle state and configuration ---------------------------------------------------- */

typedef struct safestop_state
{
  double position[3];
  double velocity[3];
  double acceleration[3];
  double jerk[3];
  double yaw;
  double yaw_rate;
  double yaw_accel;
  double yaw_jerk;
} safestop_state;

typedef struct safestop_monitor_config
{
  double w1;
  double w2;
  double w3;
  double beta;
  double monitor_rate;
  size_t k_nearest;
  double query_radius;
  double min_speed;
} safestop_monitor_config;

#define SAFESTOP_MAX_STRATA 8

typedef struct safestop_escape_config
{
  double we1;
  double we2;
  double grid_half_extents[3];
  double grid_spacing;
  double velocity_scale;
  size_t strata_len;
  double strata_fraction[SAFESTOP_MAX_STRATA];
  size_t strata_count[SAFESTOP_MAX_STRATA];
  double clearance_radius;
  uint64_t rng_seed;
} safestop_escape_config;

typedef struct safestop_feasibility_config
{
  double accel_bound;
  double clearance_radius;
  double sample_dt;
  double min_duration;
  double duration_gain;
  double brake_fraction;
  double duration_speed_floor;
} safestop_feasibility_config;

SAFESTOP_API void safestop_monitor_config_default(safestop_monitor_config * config);
SAFESTOP_API void safestop_escape_config_default(safestop_escape_config * config);
SAFESTOP_API void safestop_feasibility_config_default(safestop_feasibility_config * config);

/* ---- obstacle map ----------------------------------------------------------------------- */

typedef struct safestop_map safestop_map;

/* points: count * 3 doubles (x, y, z). */
SAFESTOP_API safestop_status safestop_map_create(
  const double * points, size_t count, safestop_map ** out);
/* Point-cloud file: one "x y z" per line, '#' comments. */
SAFESTOP_API safestop_status safestop_map_load(const char * path, safestop_map ** out);
SAFESTOP_API void safestop_map_destroy(safestop_map * map);

SAFESTOP_API safestop_status safestop_map_point_count(const safestop_map * map, size_t * out);
/* Distance to the closest point; +inf for an empty map. */
SAFESTOP_API safestop_status safestop_map_nearest_distance(
  const safestop_map * map, const double query[3], double * out);
/*
 * Up to k neighbours within radius (pass INFINITY for no limit), closest first. out_points
 * holds k * 3 doubles and out_distances k doubles; either may be NULL. *out_count receives the
 * number written.
 */
SAFESTOP_API safestop_status safestop_map_k_nearest(
  const safestop_map * map, const double query[3], size_t k, double radius,
  double * out_points, double * out_distances, size_t * out_count);

/* ---- monitor ---------------------------------------------------------------------------- */

typedef struct safestop_verdict
{
  int triggered;
  int evaluated; /* 0 when no point was scored (slow vehicle or nothing ahead) */
  double worst_point[3];
  double worst_cost;
  double worst_distance;
  double worst_angle;
  size_t evaluated_count;
} safestop_verdict;

/* config may be NULL for defaults. */
SAFESTOP_API safestop_status safestop_check_imminent(
  const safestop_state * state, const safestop_map * map, const safestop_monitor_config * config,
  safestop_verdict * out);

/* ---- stop trajectory -------------------------------------------------------------------- */

typedef struct safestop_trajectory safestop_trajectory;

typedef enum safestop_trajectory_kind
{
  SAFESTOP_TRAJECTORY_POLYNOMIAL = 0,
  SAFESTOP_TRAJECTORY_FALLBACK_BRAKE = 1
} safestop_trajectory_kind;

/* Escape-point search followed by the fallback brake. Configs may be NULL for defaults. */
SAFESTOP_API safestop_status safestop_generate_stop_trajectory(
  const safestop_state * state, const safestop_map * map, const safestop_escape_config * escape,
  const safestop_feasibility_config * feasibility, safestop_trajectory ** out);
SAFESTOP_API void safestop_trajectory_destroy(safestop_trajectory * trajectory);

SAFESTOP_API safestop_status safestop_trajectory_duration(
  const safestop_trajectory * trajectory, double * out);
SAFESTOP_API safestop_status safestop_trajectory_kind_of(
  const safestop_trajectory * trajectory, safestop_trajectory_kind * out);
/* *has_escape is 0 for the fallback brake, which has no escape point. */
SAFESTOP_API safestop_status safestop_trajectory_escape_point(
  const safestop_trajectory * trajectory, double out[3], int * has_escape);
/* order 0..4 (position .. snap); t in [0, duration]. out_yaw may be NULL. */
SAFESTOP_API safestop_status safestop_trajectory_evaluate(
  const safestop_trajectory * trajectory, double t, int order, double out[3], double * out_yaw);

/* ---- batch runs and reports ------------------------------------------------------------- */

typedef enum safestop_monitoring
{
  SAFESTOP_MONITORING_FROM_CONFIG = -1,
  SAFESTOP_MONITORING_DISABLED = 0,
  SAFESTOP_MONITORING_ENABLED = 1,
  SAFESTOP_MONITORING_BOTH = 2
} safestop_monitoring;

typedef struct safestop_run_overrides
{
  safestop_monitoring monitoring;
  size_t trials; /* 0 keeps the config value */
  int has_seed;
  uint64_t seed;
  const char * out_dir; /* NULL keeps the config value */
} safestop_run_overrides;

SAFESTOP_API void safestop_run_overrides_default(safestop_run_overrides * overrides);

typedef struct safestop_batch_info
{
  size_t trials;
  size_t enabled_trials;
  size_t enabled_successes;
  size_t disabled_trials;
  size_t disabled_successes;
  char output_dir[1024]; /* where traces and summary.csv went (truncated if longer) */
} safestop_batch_info;

/* Runs a batch described by a JSON config file; overrides and out may be NULL. */
SAFESTOP_API safestop_status safestop_run_batch(
  const char * config_path, const safestop_run_overrides * overrides, safestop_batch_info * out);

typedef struct safestop_report_info
{
  size_t traces;
  size_t monitor_ticks;
  size_t triggers;
  size_t band_samples;
  size_t band_positives;
  int separability_defined;
  double accuracy;
  size_t triggers_below_min_speed;
} safestop_report_info;

/* SAFESTOP_ERR_EMPTY when in_dir holds no trace logs. out may be NULL. */
SAFESTOP_API safestop_status safestop_report(
  const char * in_dir, const char * out_dir, safestop_report_info * out);

/* ---- teleop service --------------------------------------------------------------------- */

typedef struct safestop_server safestop_server;

/* Scenario and world settings come from the config (seed = config seed); port 0 picks one. */
SAFESTOP_API safestop_status safestop_server_create(
  const char * config_path, uint16_t port, safestop_server ** out);
SAFESTOP_API safestop_status safestop_server_start(safestop_server * server);
SAFESTOP_API safestop_status safestop_server_port(const safestop_server * server, uint16_t * out);
/* Blocks until safestop_server_stop is called from another thread. */
SAFESTOP_API safestop_status safestop_server_run(safestop_server * server);
SAFESTOP_API safestop_status safestop_server_stop(safestop_server * server);
SAFESTOP_API void safestop_server_destroy(safestop_server * server);

#ifdef __cplusplus
}
#endif

#endif /* SAFESTOP_SAFESTOP_H_ */
