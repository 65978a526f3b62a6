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

#ifndef SAFESTOP__SERVICE__RUN_CONFIG_HPP_
#define SAFESTOP__SERVICE__RUN_CONFIG_HPP_

#include "sim/operator.hpp"
#include "sim/scenario.hpp"
#include "sim/world.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace safestop
{

enum class ScenarioKind { forest, warehouse, two_pillar_arena, file, inline_spec };

std::string to_string(ScenarioKind kind);

/// Where each trial's scenario comes from. Generators are re-seeded per trial.
struct ScenarioSource
{
  ScenarioKind kind{ScenarioKind::two_pillar_arena};
  Bounds bounds{Vec3(0.0, 0.0, 0.0), Vec3(40.0, 40.0, 5.0)};

  // forest
  double density{0.05};  // trees / m^2
  std::pair<double, double> radius_range{0.5, 1.0};  // m
  ForestOptions forest;

  // warehouse
  double aisle_width{1.6};  // m
  ShelfDims shelf;
  WarehouseOptions warehouse;

  // file / inline
  std::filesystem::path file;
  Scenario scenario;

  /// Optional `x y z` point cloud appended to the obstacle points.
  std::optional<std::filesystem::path> point_cloud;
};

enum class MonitoringSelection { enabled, disabled, both };

std::string to_string(MonitoringSelection selection);

struct RunConfig
{
  ScenarioSource scenario;
  WorldConfig world;
  OperatorProfile profile{OperatorProfile::aggressive};
  OperatorSettings operator_settings;
  MonitoringSelection monitoring{MonitoringSelection::both};
  std::size_t trials{20};
  std::uint64_t seed_base{0};
  double timeout{120.0};  // s per trial
  std::filesystem::path output_dir{"runs"};
  std::size_t threads{0};  // 0: one per hardware thread

  void validate() const;
};

/**
 * Parses a RunConfig document. Unknown keys and wrong types raise ConfigError naming the field
 * path (e.g. "escape.strata[2].count"). Relative paths resolve against base_dir.
 */
RunConfig parse_run_config(const nlohmann::json & j, const std::filesystem::path & base_dir = {});

/// Reads and parses a JSON config file. Throws IoError or ConfigError.
RunConfig load_run_config(const std::filesystem::path & path);

/// Builds the scenario for one trial seed. Throws GenerationError, IoError or InvalidInput.
Scenario make_scenario(const ScenarioSource & source, std::uint64_t seed);

}  // namespace safestop

#endif  // SAFESTOP__SERVICE__RUN_CONFIG_HPP_
