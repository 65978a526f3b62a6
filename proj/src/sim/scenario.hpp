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

#ifndef SAFESTOP__SIM__SCENARIO_HPP_
#define SAFESTOP__SIM__SCENARIO_HPP_

#include "geometry/obstacle_map.hpp"
#include "geometry/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace safestop
{

/// Vertical cylinder; center is the geometric center (mid-height on the axis).
struct Cylinder
{
  Vec3 center{Vec3::Zero()};
  double radius{0.5};
  double height{1.0};
};

struct Box
{
  Vec3 center{Vec3::Zero()};
  Vec3 half_extents{Vec3::Ones()};
};

using Solid = std::variant<Cylinder, Box>;

struct Bounds
{
  Vec3 min{Vec3::Zero()};
  Vec3 max{Vec3::Zero()};

  bool contains(const Vec3 & p) const
  {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
};

struct Scenario
{
  std::string name;
  Bounds bounds;
  std::vector<Solid> solids;
  VehicleState start;
  Vec3 goal{Vec3::Zero()};
  double goal_radius{1.0};
  double surface_sample_spacing{0.1};
  /// Additional raw obstacle points (e.g. a loaded point cloud).
  std::vector<Vec3> extra_points;
};

/// Exact Euclidean distance from p to the solid (0 inside).
double distance_to_solid(const Solid & solid, const Vec3 & p);

/// Surface points at roughly the given spacing, including caps and faces.
std::vector<Vec3> sample_surface(const Solid & solid, double spacing);

/// Surface-samples every solid and appends extra_points.
ObstacleMap build_scenario_map(const Scenario & scenario);

/// Checks bounds, start/goal placement and clearance. Throws InvalidInput.
void validate_scenario(const Scenario & scenario, double clearance_radius);

struct ForestOptions
{
  double altitude{2.0};  // m, flight height of start and goal
  double keep_out_radius{2.0};  // m, tree-free disc around start and goal
  double min_gap{0.6};  // m, minimum free space between neighbouring trunks
  double surface_sample_spacing{0.1};
  int attempts_per_tree{2000};
};

/// Poisson-disk rejection placement of round(density * area) trunks spanning the bounds' height.
/// Start and goal sit 2 m inside the west and east faces. Throws GenerationError when the trunks
/// cannot be placed.
Scenario generate_forest(
  std::uint64_t seed, const Bounds & bounds, double tree_density,
  std::pair<double, double> radius_range, const ForestOptions & options = {});

struct ShelfDims
{
  double length{6.0};
  double depth{1.0};
  double height{4.0};
};

struct WarehouseOptions
{
  double altitude{2.0};
  double clearance_radius{0.3};
  double end_margin{3.0};  // m of open floor between the rack ends and the bounds
  double surface_sample_spacing{0.1};
};

/// Rows of shelf boxes along x separated by aisles; start and goal at the two ends of the
/// central aisle. The seed perturbs the gaps between consecutive shelves in a row.
Scenario generate_warehouse(
  std::uint64_t seed, const Bounds & bounds, double aisle_width, const ShelfDims & shelf,
  const WarehouseOptions & options = {});

/// 8 m x 8 m arena with two 0.3 m pillars 2.5 m apart between start and goal.
Scenario generate_two_pillar_arena();

nlohmann::json scenario_to_json(const Scenario & scenario);
/// Throws InvalidInput with the offending field path.
Scenario scenario_from_json(const nlohmann::json & j);

nlohmann::json state_to_json(const VehicleState & state);
VehicleState state_from_json(const nlohmann::json & j, const std::string & path = "state");

}  // namespace safestop

#endif  // SAFESTOP__SIM__SCENARIO_HPP_
