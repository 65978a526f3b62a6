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

#include "sim/scenario.hpp"

#include "geometry/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace safestop
{
namespace
{
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t divisions(double length, double spacing)
{
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / spacing - 1e-9)));
}

void sample_disc(
  const Vec3 & center, double radius, double spacing, std::vector<Vec3> & out)
{
  out.push_back(center);
  const std::size_t rings = divisions(radius, spacing);
  for (std::size_t r = 1; r <= rings; ++r) {
    const double rr = radius * static_cast<double>(r) / static_cast<double>(rings);
    const std::size_t n = divisions(kTwoPi * rr, spacing);
    for (std::size_t k = 0; k < n; ++k) {
      const double a = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
      out.emplace_back(center.x() + rr * std::cos(a), center.y() + rr * std::sin(a), center.z());
    }
  }
}

std::vector<Vec3> sample_cylinder(const Cylinder & c, double spacing)
{
  std::vector<Vec3> out;
  const double z0 = c.center.z() - 0.5 * c.height;
  const std::size_t layers = divisions(c.height, spacing);
  const std::size_t around = divisions(kTwoPi * c.radius, spacing);
  for (std::size_t l = 0; l <= layers; ++l) {
    const double z = z0 + c.height * static_cast<double>(l) / static_cast<double>(layers);
    for (std::size_t k = 0; k < around; ++k) {
      const double a = kTwoPi * static_cast<double>(k) / static_cast<double>(around);
      out.emplace_back(c.center.x() + c.radius * std::cos(a), c.center.y() + c.radius * std::sin(a), z);
    }
  }
  // Caps without their rim (already covered by the side layers).
  for (const double z : {z0, z0 + c.height}) {
    std::vector<Vec3> cap;
    sample_disc(Vec3(c.center.x(), c.center.y(), z), c.radius, spacing, cap);
    const std::size_t rim = divisions(kTwoPi * c.radius, spacing);
    out.insert(out.end(), cap.begin(), cap.end() - static_cast<std::ptrdiff_t>(rim));
  }
  return out;
}

std::vector<Vec3> sample_box(const Box & b, double spacing)
{
  std::vector<Vec3> out;
  const Vec3 lo = b.center - b.half_extents;
  std::array<std::size_t, 3> n{};
  for (int a = 0; a < 3; ++a) {
    n[a] = divisions(2.0 * b.half_extents[a], spacing);
  }
  // Lattice over the box keeping only points on at least one face.
  for (std::size_t i = 0; i <= n[0]; ++i) {
    for (std::size_t j = 0; j <= n[1]; ++j) {
      for (std::size_t k = 0; k <= n[2]; ++k) {
        const bool on_face = i == 0 || i == n[0] || j == 0 || j == n[1] || k == 0 || k == n[2];
        if (!on_face) {
          continue;
        }
        out.emplace_back(
          lo.x() + 2.0 * b.half_extents.x() * static_cast<double>(i) / static_cast<double>(n[0]),
          lo.y() + 2.0 * b.half_extents.y() * static_cast<double>(j) / static_cast<double>(n[1]),
          lo.z() + 2.0 * b.half_extents.z() * static_cast<double>(k) / static_cast<double>(n[2]));
      }
    }
  }
  return out;
}

Vec3 vec_from_json(const nlohmann::json & j, const std::string & path)
{
  if (!j.is_array() || j.size() != 3) {
    throw InvalidInput(path + ": expected an array of 3 numbers");
  }
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) {
      throw InvalidInput(path + ": expected an array of 3 numbers");
    }
    v[i] = j[i].get<double>();
  }
  if (!is_finite(v)) {
    throw InvalidInput(path + ": non-finite value");
  }
  return v;
}

nlohmann::json vec_to_json(const Vec3 & v)
{
  return nlohmann::json::array({v.x(), v.y(), v.z()});
}

double number_field(
  const nlohmann::json & j, const char * key, const std::string & path, double fallback)
{
  if (!j.contains(key)) {
    return fallback;
  }
  if (!j.at(key).is_number()) {
    throw InvalidInput(path + "." + key + ": expected a number");
  }
  return j.at(key).get<double>();
}

double required_number(const nlohmann::json & j, const char * key, const std::string & path)
{
  if (!j.contains(key)) {
    throw InvalidInput(path + "." + key + ": missing");
  }
  return number_field(j, key, path, 0.0);
}

Vec3 required_vec(const nlohmann::json & j, const char * key, const std::string & path)
{
  if (!j.contains(key)) {
    throw InvalidInput(path + "." + key + ": missing");
  }
  return vec_from_json(j.at(key), path + "." + key);
}
}  // namespace

double distance_to_solid(const Solid & solid, const Vec3 & p)
{
  if (const auto * c = std::get_if<Cylinder>(&solid)) {
    const double radial = std::hypot(p.x() - c->center.x(), p.y() - c->center.y()) - c->radius;
    const double vertical = std::abs(p.z() - c->center.z()) - 0.5 * c->height;
    const double outside = std::hypot(std::max(radial, 0.0), std::max(vertical, 0.0));
    return outside;
  }
  const auto & b = std::get<Box>(solid);
  const Vec3 excess = ((p - b.center).cwiseAbs() - b.half_extents).cwiseMax(0.0);
  return excess.norm();
}

std::vector<Vec3> sample_surface(const Solid & solid, double spacing)
{
  if (!(spacing > 0.0)) {
    throw InvalidInput("surface sample spacing must be positive");
  }
  if (const auto * c = std::get_if<Cylinder>(&solid)) {
    return sample_cylinder(*c, spacing);
  }
  return sample_box(std::get<Box>(solid), spacing);
}

ObstacleMap build_scenario_map(const Scenario & scenario)
{
  std::vector<Vec3> points;
  for (const auto & solid : scenario.solids) {
    auto surface = sample_surface(solid, scenario.surface_sample_spacing);
    points.insert(points.end(), surface.begin(), surface.end());
  }
  points.insert(points.end(), scenario.extra_points.begin(), scenario.extra_points.end());
  return ObstacleMap(std::move(points));
}

void validate_scenario(const Scenario & scenario, double clearance_radius)
{
  VehicleState start = scenario.start;
  validate_state(start);
  if (!scenario.bounds.contains(scenario.start.position)) {
    throw InvalidInput("scenario start lies outside the bounds");
  }
  if (!scenario.bounds.contains(scenario.goal)) {
    throw InvalidInput("scenario goal lies outside the bounds");
  }
  if (!(scenario.goal_radius > 0.0)) {
    throw InvalidInput("scenario goal_radius must be positive");
  }
  if (!(scenario.surface_sample_spacing > 0.0)) {
    throw InvalidInput("scenario surface_sample_spacing must be positive");
  }
  for (std::size_t i = 0; i < scenario.solids.size(); ++i) {
    if (distance_to_solid(scenario.solids[i], scenario.start.position) < clearance_radius) {
      throw InvalidInput("scenario start is within clearance of solid " + std::to_string(i), i);
    }
  }
}

Scenario generate_forest(
  std::uint64_t seed, const Bounds & bounds, double tree_density,
  std::pair<double, double> radius_range, const ForestOptions & options)
{
  const auto [r_min, r_max] = radius_range;
  if (!(tree_density >= 0.0) || !(r_min > 0.0) || !(r_max >= r_min)) {
    throw GenerationError("forest density must be non-negative and radii positive");
  }
  const Vec3 extent = bounds.max - bounds.min;
  if (!((extent.array() > 0.0).all())) {
    throw GenerationError("forest bounds must have positive extent");
  }

  Scenario scenario;
  scenario.name = "forest";
  scenario.bounds = bounds;
  scenario.surface_sample_spacing = options.surface_sample_spacing;
  const double mid_y = 0.5 * (bounds.min.y() + bounds.max.y());
  const double z = bounds.min.z() + options.altitude;
  scenario.start.position = Vec3(bounds.min.x() + 2.0, mid_y, z);
  scenario.goal = Vec3(bounds.max.x() - 2.0, mid_y, z);
  scenario.goal_radius = 1.0;

  const auto count =
    static_cast<std::size_t>(std::llround(tree_density * extent.x() * extent.y()));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(bounds.min.x(), bounds.max.x());
  std::uniform_real_distribution<double> uy(bounds.min.y(), bounds.max.y());
  std::uniform_real_distribution<double> ur(r_min, r_max);

  std::vector<Cylinder> trees;
  trees.reserve(count);
  const double height = extent.z();
  const double center_z = bounds.min.z() + 0.5 * height;
  for (std::size_t t = 0; t < count; ++t) {
    bool placed = false;
    for (int attempt = 0; attempt < options.attempts_per_tree && !placed; ++attempt) {
      const double radius = ur(rng);
      const Vec3 c(ux(rng), uy(rng), center_z);
      const auto planar = [&](const Vec3 & p) { return std::hypot(p.x() - c.x(), p.y() - c.y()); };
      if (
        planar(scenario.start.position) < options.keep_out_radius + radius ||
        planar(scenario.goal) < options.keep_out_radius + radius) {
        continue;
      }
      const bool overlaps = std::any_of(trees.begin(), trees.end(), [&](const Cylinder & other) {
        return planar(other.center) < radius + other.radius + options.min_gap;
      });
      if (overlaps) {
        continue;
      }
      trees.push_back(Cylinder{c, radius, height});
      placed = true;
    }
    if (!placed) {
      throw GenerationError(
        "placed only " + std::to_string(trees.size()) + " of " + std::to_string(count) +
        " trees; lower the density");
    }
  }
  scenario.solids.assign(trees.begin(), trees.end());
  return scenario;
}

Scenario generate_warehouse(
  std::uint64_t seed, const Bounds & bounds, double aisle_width, const ShelfDims & shelf,
  const WarehouseOptions & options)
{
  if (!(aisle_width > 2.0 * options.clearance_radius)) {
    throw GenerationError("aisle width must exceed twice the clearance radius");
  }
  if (!(shelf.length > 0.0 && shelf.depth > 0.0 && shelf.height > 0.0)) {
    throw GenerationError("shelf dimensions must be positive");
  }
  const Vec3 extent = bounds.max - bounds.min;
  const double rack_x0 = bounds.min.x() + options.end_margin;
  const double rack_x1 = bounds.max.x() - options.end_margin;
  if (rack_x1 - rack_x0 < shelf.length) {
    throw GenerationError("bounds too short for a single shelf");
  }
  // Rows are centered on the bounds with an even count so the middle slot is an aisle.
  const double pitch = shelf.depth + aisle_width;
  auto rows = static_cast<int>(std::floor((extent.y() + aisle_width) / pitch));
  if (rows % 2 == 1) {
    --rows;
  }
  if (rows < 2) {
    throw GenerationError("bounds too narrow for two shelf rows and an aisle");
  }
  if (shelf.height > extent.z()) {
    throw GenerationError("shelves taller than the bounds");
  }

  Scenario scenario;
  scenario.name = "warehouse";
  scenario.bounds = bounds;
  scenario.surface_sample_spacing = options.surface_sample_spacing;
  const double mid_y = 0.5 * (bounds.min.y() + bounds.max.y());
  const double z = bounds.min.z() + options.altitude;
  scenario.start.position = Vec3(bounds.min.x() + 1.0, mid_y, z);
  scenario.goal = Vec3(bounds.max.x() - 1.0, mid_y, z);
  scenario.goal_radius = 1.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gap(0.6, 1.4);
  const double span = rows * shelf.depth + (rows - 1) * aisle_width;
  const double first_center = mid_y - 0.5 * span + 0.5 * shelf.depth;
  const double center_z = bounds.min.z() + 0.5 * shelf.height;
  for (int r = 0; r < rows; ++r) {
    const double y = first_center + r * pitch;
    double x = rack_x0;
    while (x + shelf.length <= rack_x1 + 1e-9) {
      scenario.solids.emplace_back(Box{
        Vec3(x + 0.5 * shelf.length, y, center_z),
        Vec3(0.5 * shelf.length, 0.5 * shelf.depth, 0.5 * shelf.height)});
      x += shelf.length + gap(rng);
    }
  }
  return scenario;
}

Scenario generate_two_pillar_arena()
{
  Scenario scenario;
  scenario.name = "two_pillar_arena";
  scenario.bounds = Bounds{Vec3(0.0, 0.0, 0.0), Vec3(8.0, 8.0, 3.0)};
  scenario.solids.emplace_back(Cylinder{Vec3(4.0, 2.75, 1.5), 0.3, 3.0});
  scenario.solids.emplace_back(Cylinder{Vec3(4.0, 5.25, 1.5), 0.3, 3.0});
  scenario.start.position = Vec3(1.0, 4.0, 1.5);
  scenario.goal = Vec3(7.0, 4.0, 1.5);
  scenario.goal_radius = 0.5;
  scenario.surface_sample_spacing = 0.1;
  return scenario;
}

nlohmann::json state_to_json(const VehicleState & state)
{
  return nlohmann::json{
    {"position", vec_to_json(state.position)},
    {"velocity", vec_to_json(state.velocity)},
    {"acceleration", vec_to_json(state.acceleration)},
    {"jerk", vec_to_json(state.jerk)},
    {"yaw", state.yaw},
    {"yaw_rate", state.yaw_rate},
    {"yaw_accel", state.yaw_accel},
    {"yaw_jerk", state.yaw_jerk}};
}

VehicleState state_from_json(const nlohmann::json & j, const std::string & path)
{
  if (!j.is_object()) {
    throw InvalidInput(path + ": expected an object");
  }
  VehicleState s;
  s.position = required_vec(j, "position", path);
  if (j.contains("velocity")) s.velocity = vec_from_json(j["velocity"], path + ".velocity");
  if (j.contains("acceleration")) {
    s.acceleration = vec_from_json(j["acceleration"], path + ".acceleration");
  }
  if (j.contains("jerk")) s.jerk = vec_from_json(j["jerk"], path + ".jerk");
  s.yaw = number_field(j, "yaw", path, 0.0);
  s.yaw_rate = number_field(j, "yaw_rate", path, 0.0);
  s.yaw_accel = number_field(j, "yaw_accel", path, 0.0);
  s.yaw_jerk = number_field(j, "yaw_jerk", path, 0.0);
  validate_state(s);
  return s;
}

nlohmann::json scenario_to_json(const Scenario & scenario)
{
  nlohmann::json solids = nlohmann::json::array();
  for (const auto & solid : scenario.solids) {
    if (const auto * c = std::get_if<Cylinder>(&solid)) {
      solids.push_back(
        {{"type", "cylinder"},
         {"center", vec_to_json(c->center)},
         {"radius", c->radius},
         {"height", c->height}});
    } else {
      const auto & b = std::get<Box>(solid);
      solids.push_back(
        {{"type", "box"},
         {"center", vec_to_json(b.center)},
         {"half_extents", vec_to_json(b.half_extents)}});
    }
  }
  nlohmann::json j{
    {"schema", 1},
    {"name", scenario.name},
    {"bounds", {{"min", vec_to_json(scenario.bounds.min)}, {"max", vec_to_json(scenario.bounds.max)}}},
    {"solids", solids},
    {"start", state_to_json(scenario.start)},
    {"goal", vec_to_json(scenario.goal)},
    {"goal_radius", scenario.goal_radius},
    {"surface_sample_spacing", scenario.surface_sample_spacing}};
  if (!scenario.extra_points.empty()) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto & p : scenario.extra_points) {
      points.push_back(vec_to_json(p));
    }
    j["extra_points"] = points;
  }
  return j;
}

Scenario scenario_from_json(const nlohmann::json & j)
{
  if (!j.is_object()) {
    throw InvalidInput("scenario: expected an object");
  }
  if (!j.contains("schema") || j["schema"] != 1) {
    throw InvalidInput("scenario.schema: expected 1");
  }
  Scenario s;
  s.name = j.value("name", std::string("scenario"));
  if (!j.contains("bounds") || !j["bounds"].is_object()) {
    throw InvalidInput("scenario.bounds: missing");
  }
  s.bounds.min = required_vec(j["bounds"], "min", "scenario.bounds");
  s.bounds.max = required_vec(j["bounds"], "max", "scenario.bounds");
  if (j.contains("solids")) {
    if (!j["solids"].is_array()) {
      throw InvalidInput("scenario.solids: expected an array");
    }
    for (std::size_t i = 0; i < j["solids"].size(); ++i) {
      const auto & item = j["solids"][i];
      const std::string path = "scenario.solids[" + std::to_string(i) + "]";
      const std::string type = item.value("type", std::string());
      if (type == "cylinder") {
        Cylinder c{required_vec(item, "center", path), required_number(item, "radius", path),
                   required_number(item, "height", path)};
        if (!(c.radius > 0.0) || !(c.height > 0.0)) {
          throw InvalidInput(path + ": radius and height must be positive", i);
        }
        s.solids.emplace_back(c);
      } else if (type == "box") {
        Box b{required_vec(item, "center", path), required_vec(item, "half_extents", path)};
        if (!(b.half_extents.array() > 0.0).all()) {
          throw InvalidInput(path + ".half_extents: must be positive", i);
        }
        s.solids.emplace_back(b);
      } else {
        throw InvalidInput(path + ".type: expected \"cylinder\" or \"box\"", i);
      }
    }
  }
  if (!j.contains("start")) {
    throw InvalidInput("scenario.start: missing");
  }
  s.start = state_from_json(j["start"], "scenario.start");
  s.goal = required_vec(j, "goal", "scenario");
  s.goal_radius = number_field(j, "goal_radius", "scenario", 1.0);
  s.surface_sample_spacing = number_field(j, "surface_sample_spacing", "scenario", 0.1);
  if (j.contains("extra_points")) {
    const auto & points = j["extra_points"];
    if (!points.is_array()) {
      throw InvalidInput("scenario.extra_points: expected an array");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
      s.extra_points.push_back(
        vec_from_json(points[i], "scenario.extra_points[" + std::to_string(i) + "]"));
    }
  }
  return s;
}

}  // namespace safestop
