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

#include "service/run_config.hpp"

#include "geometry/errors.hpp"
#include "geometry/point_cloud_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

namespace safestop
{
namespace
{
using nlohmann::json;

/// Reads typed fields from one JSON object and rejects keys nobody asked for.
class Fields
{
public:
  Fields(const json & j, std::string path) : j_(j), path_(std::move(path))
  {
    if (!j_.is_object()) {
      throw ConfigError(path_ + ": expected an object");
    }
  }

  bool has(const char * key) const { return j_.contains(key); }
  std::string path(const char * key) const { return path_ + "." + key; }

  const json * get(const char * key)
  {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const char * key, double & out)
  {
    if (const json * v = get(key)) {
      if (!v->is_number()) {
        throw ConfigError(path(key) + ": expected a number");
      }
      out = v->get<double>();
      if (!std::isfinite(out)) {
        throw ConfigError(path(key) + ": must be finite");
      }
    }
  }

  template<typename Int>
  void integer(const char * key, Int & out)
  {
    if (const json * v = get(key)) {
      if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
        throw ConfigError(path(key) + ": expected a non-negative integer");
      }
      const auto raw = v->get<std::uint64_t>();
      if (raw > static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) {
        throw ConfigError(path(key) + ": out of range");
      }
      out = static_cast<Int>(raw);
    }
  }

  void boolean(const char * key, bool & out)
  {
    if (const json * v = get(key)) {
      if (!v->is_boolean()) {
        throw ConfigError(path(key) + ": expected true or false");
      }
      out = v->get<bool>();
    }
  }

  std::optional<std::string> string(const char * key)
  {
    if (const json * v = get(key)) {
      if (!v->is_string()) {
        throw ConfigError(path(key) + ": expected a string");
      }
      return v->get<std::string>();
    }
    return std::nullopt;
  }

  void vec3(const char * key, Vec3 & out)
  {
    if (const json * v = get(key)) {
      if (!v->is_array() || v->size() != 3) {
        throw ConfigError(path(key) + ": expected an array of 3 numbers");
      }
      for (int i = 0; i < 3; ++i) {
        if (!(*v)[i].is_number()) {
          throw ConfigError(path(key) + ": expected an array of 3 numbers");
        }
        out[i] = (*v)[i].get<double>();
      }
      if (!is_finite(out)) {
        throw ConfigError(path(key) + ": must be finite");
      }
    }
  }

  void finish() const
  {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw ConfigError(path_ + "." + it.key() + ": unknown field");
      }
    }
  }

private:
  const json & j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::filesystem::path resolve(const std::filesystem::path & base, const std::string & p)
{
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

/// Re-raises validation failures under the config path so diagnostics stay uniform.
template<typename F>
void checked(const std::string & path, F && f)
{
  try {
    f();
  } catch (const Error & e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void parse_monitor(const json & j, MonitorConfig & m)
{
  Fields f(j, "monitor");
  f.number("w1", m.w1);
  f.number("w2", m.w2);
  f.number("w3", m.w3);
  f.number("beta", m.beta);
  f.number("monitor_rate", m.monitor_rate);
  f.integer("k_nearest", m.k_nearest);
  f.number("query_radius", m.query_radius);
  f.number("min_speed", m.min_speed);
  f.finish();
}

void parse_escape(const json & j, EscapeConfig & e)
{
  Fields f(j, "escape");
  f.number("we1", e.we1);
  f.number("we2", e.we2);
  f.vec3("grid_half_extents", e.grid_half_extents);
  f.number("grid_spacing", e.grid_spacing);
  f.number("velocity_scale", e.velocity_scale);
  f.number("clearance_radius", e.clearance_radius);
  f.integer("rng_seed", e.rng_seed);
  if (const json * strata = f.get("strata")) {
    if (!strata->is_array()) {
      throw ConfigError("escape.strata: expected an array");
    }
    e.strata.clear();
    for (std::size_t i = 0; i < strata->size(); ++i) {
      Fields s((*strata)[i], "escape.strata[" + std::to_string(i) + "]");
      Stratum stratum{0.0, 0};
      if (!s.has("fraction") || !s.has("count")) {
        throw ConfigError(
          "escape.strata[" + std::to_string(i) + "]: expected fields fraction and count");
      }
      s.number("fraction", stratum.fraction);
      s.integer("count", stratum.count);
      s.finish();
      e.strata.push_back(stratum);
    }
  }
  f.finish();
}

void parse_feasibility(const json & j, FeasibilityConfig & c)
{
  Fields f(j, "feasibility");
  f.number("accel_bound", c.accel_bound);
  f.number("clearance_radius", c.clearance_radius);
  f.number("sample_dt", c.sample_dt);
  f.number("min_duration", c.min_duration);
  f.number("duration_gain", c.duration_gain);
  f.number("brake_fraction", c.brake_fraction);
  f.number("duration_speed_floor", c.duration_speed_floor);
  f.finish();
}

void parse_world(const json & j, WorldConfig & w)
{
  Fields f(j, "world");
  f.number("dt", w.dt);
  f.number("velocity_time_constant", w.velocity_time_constant);
  f.number("recovery_duration", w.recovery_duration);
  f.number("contact_radius", w.contact_radius);
  f.finish();
}

void parse_operator(const json & j, RunConfig & cfg)
{
  Fields f(j, "operator");
  if (auto name = f.string("profile")) {
    auto profile = parse_operator_profile(*name);
    if (!profile) {
      throw ConfigError("operator.profile: expected \"aggressive\" or \"cautious\"");
    }
    cfg.profile = *profile;
  }
  auto & s = cfg.operator_settings;
  f.number("aggressive_speed", s.aggressive_speed);
  f.number("cautious_speed", s.cautious_speed);
  f.number("heading_noise", s.heading_noise);
  f.number("noise_hold", s.noise_hold);
  f.number("repulsion_range", s.repulsion_range);
  f.number("repulsion_gain", s.repulsion_gain);
  f.number("yaw_gain", s.yaw_gain);
  f.number("max_yaw_rate", s.max_yaw_rate);
  f.finish();
}

void parse_bounds(Fields & f, Bounds & bounds)
{
  if (const json * b = f.get("bounds")) {
    Fields bf(*b, f.path("bounds"));
    bf.vec3("min", bounds.min);
    bf.vec3("max", bounds.max);
    bf.finish();
  }
}

void parse_scenario(const json & j, ScenarioSource & src, const std::filesystem::path & base)
{
  Fields f(j, "scenario");
  const bool has_generator = f.has("generator");
  const bool has_file = f.has("file");
  const bool has_inline = f.has("inline");
  if (int(has_generator) + int(has_file) + int(has_inline) != 1) {
    throw ConfigError("scenario: expected exactly one of generator, file, inline");
  }
  if (auto cloud = f.string("point_cloud")) {
    src.point_cloud = resolve(base, *cloud);
  }
  if (has_file) {
    src.kind = ScenarioKind::file;
    src.file = resolve(base, *f.string("file"));
  } else if (has_inline) {
    src.kind = ScenarioKind::inline_spec;
    checked("scenario.inline", [&] { src.scenario = scenario_from_json(*f.get("inline")); });
  } else {
    const std::string name = *f.string("generator");
    if (name == "forest") {
      src.kind = ScenarioKind::forest;
      parse_bounds(f, src.bounds);
      f.number("density", src.density);
      if (const json * r = f.get("radius_range")) {
        if (!r->is_array() || r->size() != 2 || !(*r)[0].is_number() || !(*r)[1].is_number()) {
          throw ConfigError("scenario.radius_range: expected [min, max]");
        }
        src.radius_range = {(*r)[0].get<double>(), (*r)[1].get<double>()};
      }
      f.number("altitude", src.forest.altitude);
      f.number("keep_out_radius", src.forest.keep_out_radius);
      f.number("min_gap", src.forest.min_gap);
      f.number("surface_sample_spacing", src.forest.surface_sample_spacing);
      f.integer("attempts_per_tree", src.forest.attempts_per_tree);
    } else if (name == "warehouse") {
      src.kind = ScenarioKind::warehouse;
      src.bounds = Bounds{Vec3(0.0, 0.0, 0.0), Vec3(36.0, 14.0, 5.0)};
      parse_bounds(f, src.bounds);
      f.number("aisle_width", src.aisle_width);
      if (const json * s = f.get("shelf")) {
        Fields sf(*s, "scenario.shelf");
        sf.number("length", src.shelf.length);
        sf.number("depth", src.shelf.depth);
        sf.number("height", src.shelf.height);
        sf.finish();
      }
      f.number("altitude", src.warehouse.altitude);
      f.number("clearance_radius", src.warehouse.clearance_radius);
      f.number("end_margin", src.warehouse.end_margin);
      f.number("surface_sample_spacing", src.warehouse.surface_sample_spacing);
    } else if (name == "two_pillar_arena") {
      src.kind = ScenarioKind::two_pillar_arena;
    } else {
      throw ConfigError(
        "scenario.generator: expected \"forest\", \"warehouse\" or \"two_pillar_arena\"");
    }
  }
  f.finish();
}

}  // namespace

std::string to_string(ScenarioKind kind)
{
  switch (kind) {
    case ScenarioKind::forest:
      return "forest";
    case ScenarioKind::warehouse:
      return "warehouse";
    case ScenarioKind::two_pillar_arena:
      return "two_pillar_arena";
    case ScenarioKind::file:
      return "file";
    case ScenarioKind::inline_spec:
      return "inline";
  }
  return "unknown";
}

std::string to_string(MonitoringSelection selection)
{
  switch (selection) {
    case MonitoringSelection::enabled:
      return "enabled";
    case MonitoringSelection::disabled:
      return "disabled";
    case MonitoringSelection::both:
      return "both";
  }
  return "unknown";
}

void RunConfig::validate() const
{
  if (trials == 0) {
    throw ConfigError("trials: must be at least 1");
  }
  if (!(timeout > 0.0)) {
    throw ConfigError("timeout: must be positive");
  }
  checked("config", [&] { world.validate(); });
  if (scenario.kind == ScenarioKind::file && !std::filesystem::is_regular_file(scenario.file)) {
    throw ConfigError("scenario.file: no such file: " + scenario.file.string());
  }
  if (scenario.point_cloud && !std::filesystem::is_regular_file(*scenario.point_cloud)) {
    throw ConfigError("scenario.point_cloud: no such file: " + scenario.point_cloud->string());
  }
}

RunConfig parse_run_config(const nlohmann::json & j, const std::filesystem::path & base_dir)
{
  RunConfig cfg;
  Fields f(j, "config");
  if (const json * schema = f.get("schema")) {
    if (*schema != 1) {
      throw ConfigError("config.schema: expected 1");
    }
  }
  if (const json * s = f.get("scenario")) {
    parse_scenario(*s, cfg.scenario, base_dir);
  } else {
    throw ConfigError("config.scenario: missing");
  }
  if (const json * m = f.get("monitor")) parse_monitor(*m, cfg.world.monitor);
  if (const json * e = f.get("escape")) parse_escape(*e, cfg.world.escape);
  if (const json * c = f.get("feasibility")) parse_feasibility(*c, cfg.world.feasibility);
  if (const json * w = f.get("world")) parse_world(*w, cfg.world);
  if (const json * o = f.get("operator")) parse_operator(*o, cfg);
  if (auto monitoring = f.string("monitoring")) {
    if (*monitoring == "enabled") {
      cfg.monitoring = MonitoringSelection::enabled;
    } else if (*monitoring == "disabled") {
      cfg.monitoring = MonitoringSelection::disabled;
    } else if (*monitoring == "both") {
      cfg.monitoring = MonitoringSelection::both;
    } else {
      throw ConfigError("config.monitoring: expected \"enabled\", \"disabled\" or \"both\"");
    }
  }
  f.integer("trials", cfg.trials);
  f.integer("seed", cfg.seed_base);
  f.number("timeout", cfg.timeout);
  f.integer("threads", cfg.threads);
  if (auto out = f.string("out")) {
    cfg.output_dir = resolve(base_dir, *out);
  }
  f.finish();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file: " + path.string());
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error & e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_run_config(j, path.parent_path());
}

Scenario make_scenario(const ScenarioSource & source, std::uint64_t seed)
{
  Scenario s;
  switch (source.kind) {
    case ScenarioKind::forest:
      s = generate_forest(seed, source.bounds, source.density, source.radius_range, source.forest);
      break;
    case ScenarioKind::warehouse:
      s = generate_warehouse(seed, source.bounds, source.aisle_width, source.shelf,
                             source.warehouse);
      break;
    case ScenarioKind::two_pillar_arena:
      s = generate_two_pillar_arena();
      break;
    case ScenarioKind::file: {
      std::ifstream in(source.file);
      if (!in) {
        throw IoError("cannot open scenario file: " + source.file.string());
      }
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error & e) {
        throw InvalidInput(source.file.string() + ": " + e.what());
      }
      s = scenario_from_json(j);
      break;
    }
    case ScenarioKind::inline_spec:
      s = source.scenario;
      break;
  }
  if (source.point_cloud) {
    auto points = load_point_cloud(*source.point_cloud);
    s.extra_points.insert(s.extra_points.end(), points.begin(), points.end());
  }
  return s;
}

}  // namespace safestop
