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

#include "escape/escape_sampler.hpp"

#include "geometry/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace safestop
{

void EscapeConfig::validate() const
{
  if (!(we1 >= 0.0) || !(we2 >= 0.0)) {
    throw ConfigError("escape weights we1, we2 must be non-negative");
  }
  if (!(grid_half_extents.array() > 0.0).all() || !is_finite(grid_half_extents)) {
    throw ConfigError("escape.grid_half_extents must be positive");
  }
  if (!(grid_spacing > 0.0) || !std::isfinite(grid_spacing)) {
    throw ConfigError("escape.grid_spacing must be positive");
  }
  if (!(velocity_scale >= 0.0) || !std::isfinite(velocity_scale)) {
    throw ConfigError("escape.velocity_scale must be non-negative");
  }
  if (strata.empty()) {
    throw ConfigError("escape.strata must not be empty");
  }
  double total = 0.0;
  for (const auto & stratum : strata) {
    if (!(stratum.fraction > 0.0)) {
      throw ConfigError("escape.strata fractions must be positive");
    }
    if (stratum.count == 0) {
      throw ConfigError("escape.strata counts must be positive");
    }
    total += stratum.fraction;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("escape.strata fractions must sum to 1");
  }
  if (!(clearance_radius >= 0.0)) {
    throw ConfigError("escape.clearance_radius must be non-negative");
  }
}

std::size_t lattice_count(double half_extent, double spacing)
{
  return static_cast<std::size_t>(std::floor(2.0 * half_extent / spacing + 1e-9)) + 1;
}

std::vector<Vec3> generate_grid(const VehicleState & state, const EscapeConfig & cfg)
{
  const VelocityFrame frame = make_velocity_frame(state.velocity);
  const Vec3 half = cfg.grid_half_extents * (1.0 + cfg.velocity_scale * state.velocity.norm());
  const double s = cfg.grid_spacing;
  const std::size_t nf = lattice_count(half.x(), s);
  const std::size_t nl = lattice_count(half.y(), s);
  const std::size_t nu = lattice_count(half.z(), s);

  const auto coordinate = [s](std::size_t i, std::size_t n) {
    return (static_cast<double>(i) - 0.5 * static_cast<double>(n - 1)) * s;
  };

  std::vector<Vec3> points;
  points.reserve(nf * nl * nu);
  for (std::size_t i = 0; i < nf; ++i) {
    const double forward = half.x() + coordinate(i, nf);
    if (forward < 0.0) {
      continue;
    }
    for (std::size_t j = 0; j < nl; ++j) {
      const double lateral = coordinate(j, nl);
      for (std::size_t k = 0; k < nu; ++k) {
        const double up = coordinate(k, nu);
        if (forward == 0.0 && lateral == 0.0 && up == 0.0) {
          continue;
        }
        points.push_back(state.position + frame.to_world(Vec3(forward, lateral, up)));
      }
    }
  }
  return points;
}

EscapeCandidate escape_cost(
  const VehicleState & state, const Vec3 & escape, const ObstacleMap & map,
  const EscapeConfig & cfg)
{
  const double speed = state.velocity.norm();
  if (!(speed > 0.0)) {
    throw DegenerateInput("escape cost undefined at zero velocity");
  }
  const Vec3 heading = state.velocity / speed;
  const Vec3 offset = escape - state.position;

  EscapeCandidate candidate;
  candidate.point = escape;
  candidate.line_offset = (offset - offset.dot(heading) * heading).norm();
  candidate.obstacle_clearance = map.nearest_distance(escape);
  const double clearance_credit = std::isinf(candidate.obstacle_clearance)
                                    ? kUnboundedClearanceCredit
                                    : cfg.we2 * candidate.obstacle_clearance;
  candidate.cost = cfg.we1 * candidate.line_offset - clearance_credit;
  candidate.colliding = candidate.obstacle_clearance < cfg.clearance_radius;
  return candidate;
}

std::vector<std::size_t> stratum_sizes(std::size_t n, const std::vector<Stratum> & strata)
{
  std::vector<std::size_t> sizes;
  sizes.reserve(strata.size());
  double cumulative = 0.0;
  std::size_t previous = 0;
  for (std::size_t i = 0; i < strata.size(); ++i) {
    cumulative += strata[i].fraction;
    std::size_t boundary = i + 1 == strata.size()
                             ? n
                             : static_cast<std::size_t>(std::llround(cumulative * n));
    boundary = std::clamp(boundary, previous, n);
    sizes.push_back(boundary - previous);
    previous = boundary;
  }
  return sizes;
}

bool candidate_less(const EscapeCandidate & a, const EscapeCandidate & b)
{
  if (a.cost != b.cost) {
    return a.cost < b.cost;
  }
  if (a.line_offset != b.line_offset) {
    return a.line_offset < b.line_offset;
  }
  return a.lattice_index < b.lattice_index;
}

std::vector<EscapeCandidate> stratified_sample(
  std::vector<EscapeCandidate> candidates, const EscapeConfig & cfg)
{
  std::erase_if(candidates, [](const EscapeCandidate & c) { return c.colliding; });
  if (candidates.empty()) {
    return candidates;
  }
  std::sort(candidates.begin(), candidates.end(), candidate_less);

  std::mt19937_64 rng(cfg.rng_seed);
  const auto sizes = stratum_sizes(candidates.size(), cfg.strata);
  std::vector<std::size_t> chosen;
  std::size_t begin = 0;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    const std::size_t size = sizes[s];
    const std::size_t draws = std::min(cfg.strata[s].count, size);
    std::vector<std::size_t> pool(size);
    std::iota(pool.begin(), pool.end(), begin);
    // Partial Fisher-Yates: the first draws slots become a uniform sample without replacement.
    for (std::size_t i = 0; i < draws; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, size - 1);
      std::swap(pool[i], pool[pick(rng)]);
      chosen.push_back(pool[i]);
    }
    begin += size;
  }
  std::sort(chosen.begin(), chosen.end());

  std::vector<EscapeCandidate> sample;
  sample.reserve(chosen.size());
  for (const std::size_t index : chosen) {
    sample.push_back(candidates[index]);
  }
  return sample;
}

}  // namespace safestop
