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

#include "geometry/obstacle_map.hpp"

#include "geometry/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>
#include <utility>

namespace safestop
{
namespace
{
constexpr std::uint32_t kLeafSize = 8;

struct HeapEntry
{
  double squared;
  std::uint32_t index;
  std::uint32_t slot;

  bool operator<(const HeapEntry & other) const
  {
    return squared < other.squared || (squared == other.squared && index < other.index);
  }
};
}  // namespace

ObstacleMap::ObstacleMap(std::vector<Vec3> points) : points_(std::move(points))
{
  if (points_.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidInput("too many points for the map index");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!is_finite(points_[i])) {
      throw InvalidInput("non-finite coordinate at point " + std::to_string(i), i);
    }
  }
  tree_points_ = points_;
  tree_index_.resize(points_.size());
  std::iota(tree_index_.begin(), tree_index_.end(), 0U);
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    root_ = build(0, static_cast<std::uint32_t>(points_.size()));
  }
}

std::int32_t ObstacleMap::build(std::uint32_t begin, std::uint32_t end)
{
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= kLeafSize) {
    return id;
  }

  Vec3 lo = tree_points_[begin];
  Vec3 hi = lo;
  for (std::uint32_t i = begin + 1; i < end; ++i) {
    lo = lo.cwiseMin(tree_points_[i]);
    hi = hi.cwiseMax(tree_points_[i]);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);

  // Sort a permutation so point/index pairs move together.
  std::vector<std::uint32_t> order(end - begin);
  std::iota(order.begin(), order.end(), begin);
  const std::uint32_t mid_offset = (end - begin) / 2;
  std::nth_element(
    order.begin(), order.begin() + mid_offset, order.end(),
    [&](std::uint32_t a, std::uint32_t b) {
      return tree_points_[a][axis] < tree_points_[b][axis];
    });
  std::vector<Vec3> points(order.size());
  std::vector<std::uint32_t> indices(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    points[i] = tree_points_[order[i]];
    indices[i] = tree_index_[order[i]];
  }
  std::copy(points.begin(), points.end(), tree_points_.begin() + begin);
  std::copy(indices.begin(), indices.end(), tree_index_.begin() + begin);

  const std::uint32_t mid = begin + mid_offset;
  const double split = tree_points_[mid][axis];
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  // Left holds [begin, mid) with coordinate <= split, right holds [mid, end) with >= split.
  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

std::vector<Neighbor> ObstacleMap::k_nearest(
  const Vec3 & query, std::size_t k, double radius) const
{
  std::vector<Neighbor> result;
  if (root_ < 0 || k == 0 || !(radius > 0.0)) {
    return result;
  }
  const double radius_sq = std::isinf(radius) ? radius : radius * radius;

  std::priority_queue<HeapEntry> heap;
  auto bound = [&]() { return heap.size() < k ? radius_sq : heap.top().squared; };

  // Iterative depth-first search; the far side is visited whenever it could hold a point at
  // distance <= the current bound (ties included).
  std::vector<std::pair<std::int32_t, double>> stack;
  stack.emplace_back(root_, 0.0);
  while (!stack.empty()) {
    const auto [id, plane_sq] = stack.back();
    stack.pop_back();
    if (plane_sq > bound()) {
      continue;
    }
    const Node & node = nodes_[id];
    if (node.axis < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        const double sq = squared_distance(tree_points_[i], query);
        if (sq > radius_sq) {
          continue;
        }
        const HeapEntry entry{sq, tree_index_[i], i};
        if (heap.size() < k) {
          heap.push(entry);
        } else if (entry < heap.top()) {
          heap.pop();
          heap.push(entry);
        }
      }
      continue;
    }
    const double diff = query[node.axis] - node.split;
    const std::int32_t near = diff <= 0.0 ? node.left : node.right;
    const std::int32_t far = diff <= 0.0 ? node.right : node.left;
    stack.emplace_back(far, diff * diff);
    stack.emplace_back(near, 0.0);
  }

  result.reserve(heap.size());
  std::vector<HeapEntry> entries;
  entries.reserve(heap.size());
  while (!heap.empty()) {
    entries.push_back(heap.top());
    heap.pop();
  }
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    result.push_back(Neighbor{tree_points_[it->slot], std::sqrt(it->squared), it->index});
  }
  return result;
}

double ObstacleMap::nearest_distance(const Vec3 & query) const
{
  if (root_ < 0) {
    return std::numeric_limits<double>::infinity();
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::int32_t, double>> stack;
  stack.reserve(64);
  stack.emplace_back(root_, 0.0);
  while (!stack.empty()) {
    const auto [id, plane_sq] = stack.back();
    stack.pop_back();
    if (plane_sq >= best) {
      continue;
    }
    const Node & node = nodes_[id];
    if (node.axis < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        best = std::min(best, squared_distance(tree_points_[i], query));
      }
      continue;
    }
    const double diff = query[node.axis] - node.split;
    const std::int32_t near = diff <= 0.0 ? node.left : node.right;
    const std::int32_t far = diff <= 0.0 ? node.right : node.left;
    stack.emplace_back(far, diff * diff);
    stack.emplace_back(near, 0.0);
  }
  return std::sqrt(best);
}

}  // namespace safestop
