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

#ifndef SAFESTOP__GEOMETRY__OBSTACLE_MAP_HPP_
#define SAFESTOP__GEOMETRY__OBSTACLE_MAP_HPP_

#include "geometry/types.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace safestop
{

struct Neighbor
{
  Vec3 point;
  double distance;
  /// Position of the point in the list the map was built from.
  std::size_t index;
};

/**
 * Immutable point-cloud obstacle map with an exact KD-tree index.
 *
 * Query results are identical to a linear scan: distances are computed the same way and
 * equal distances are ordered by insertion index.
 */
class ObstacleMap
{
public:
  ObstacleMap() = default;

  /// Throws InvalidInput (carrying the point index) on a non-finite coordinate.
  explicit ObstacleMap(std::vector<Vec3> points);

  std::size_t point_count() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  /// Points in insertion order.
  std::span<const Vec3> points() const { return points_; }

  /// Up to k points with distance <= radius, ascending by (distance, insertion index).
  std::vector<Neighbor> k_nearest(
    const Vec3 & query, std::size_t k,
    double radius = std::numeric_limits<double>::infinity()) const;

  /// Exact distance to the closest point, +infinity for an empty map.
  double nearest_distance(const Vec3 & query) const;

private:
  struct Node
  {
    std::uint32_t begin;
    std::uint32_t end;
    std::int32_t left{-1};
    std::int32_t right{-1};
    std::int32_t axis{-1};
    double split{0.0};
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);

  std::vector<Vec3> points_;
  // Tree-ordered copies of the points and the insertion index of each.
  std::vector<Vec3> tree_points_;
  std::vector<std::uint32_t> tree_index_;
  std::vector<Node> nodes_;
  std::int32_t root_{-1};
};

/// Squared Euclidean distance; shared by the index and linear-scan code paths.
inline double squared_distance(const Vec3 & a, const Vec3 & b)
{
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double dz = a.z() - b.z();
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace safestop

#endif  // SAFESTOP__GEOMETRY__OBSTACLE_MAP_HPP_
