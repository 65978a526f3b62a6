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

#ifndef SAFESTOP__ESCAPE__ESCAPE_SAMPLER_HPP_
#define SAFESTOP__ESCAPE__ESCAPE_SAMPLER_HPP_

#include "geometry/obstacle_map.hpp"
#include "geometry/types.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace safestop
{

struct Stratum
{
  double fraction;  // share of the cost-sorted candidates
  std::size_t count;  // draws from this share
};

struct EscapeConfig
{
  double we1{1.0};  // line-offset weight
  double we2{2.0};  // obstacle-clearance weight
  Vec3 grid_half_extents{1.0, 1.0, 0.5};  // forward, lateral, vertical (m)
  double grid_spacing{0.15};  // m
  double velocity_scale{0.5};  // s; box grows by this factor per m/s of speed
  std::vector<Stratum> strata{{0.01, 10}, {0.09, 40}, {0.40, 30}, {0.50, 20}};
  double clearance_radius{0.6};  // m
  std::uint64_t rng_seed{0};

  void validate() const;
};

struct EscapeCandidate
{
  Vec3 point{Vec3::Zero()};
  double line_offset{0.0};  // q: distance to the velocity line
  double obstacle_clearance{0.0};  // d: distance to the nearest obstacle
  double cost{0.0};
  bool colliding{false};
  std::size_t lattice_index{0};
};

/// Stand-in for the weighted clearance term when the map is empty (d = +inf).
inline constexpr double kUnboundedClearanceCredit = 1e9;

/**
 * Uniform lattice in a velocity-aligned box ahead of the vehicle.
 *
 * The box half-extents are grid_half_extents * (1 + velocity_scale * speed) and its rear face
 * passes through the vehicle, so every emitted point has non-negative projection. Each axis
 * holds floor(2h / spacing) + 1 points centered on the box. The vehicle position itself is
 * skipped. Throws DegenerateInput at zero velocity.
 */
std::vector<Vec3> generate_grid(const VehicleState & state, const EscapeConfig & cfg);

/// Lattice point count per axis before the half-space cut.
std::size_t lattice_count(double half_extent, double spacing);

/// cost = we1 * q - we2 * d; lower is better.
EscapeCandidate escape_cost(
  const VehicleState & state, const Vec3 & escape, const ObstacleMap & map,
  const EscapeConfig & cfg);

/// Stratum sizes for n sorted candidates: boundaries at round(n * cumulative fraction).
std::vector<std::size_t> stratum_sizes(std::size_t n, const std::vector<Stratum> & strata);

/// Strict weak order used to rank candidates: cost, then q, then lattice order.
bool candidate_less(const EscapeCandidate & a, const EscapeCandidate & b);

/**
 * Cost-stratified downsampling without replacement.
 *
 * Colliding candidates are dropped first. Each stratum contributes min(count, size) distinct
 * candidates drawn uniformly with the configured seed; the result is sorted by candidate_less.
 */
std::vector<EscapeCandidate> stratified_sample(
  std::vector<EscapeCandidate> candidates, const EscapeConfig & cfg);

}  // namespace safestop

#endif  // SAFESTOP__ESCAPE__ESCAPE_SAMPLER_HPP_
