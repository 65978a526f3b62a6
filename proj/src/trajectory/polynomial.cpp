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

#include "trajectory/polynomial.hpp"

#include "geometry/errors.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace safestop
{
namespace
{
constexpr std::size_t N = kPolyCoefficients;

// i! / (i - k)!
constexpr double falling_factorial(std::size_t i, std::size_t k)
{
  double value = 1.0;
  for (std::size_t m = 0; m < k; ++m) {
    value *= static_cast<double>(i - m);
  }
  return value;
}

std::array<double, N> solve_dense(std::array<std::array<double, N>, N> a, std::array<double, N> b)
{
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < N; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) {
        pivot = row;
      }
    }
    if (std::abs(a[pivot][col]) < 1e-12) {
      throw SolveError("boundary system is singular");
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t row = col + 1; row < N; ++row) {
      const double factor = a[row][col] / a[col][col];
      if (factor == 0.0) {
        continue;
      }
      for (std::size_t k = col; k < N; ++k) {
        a[row][k] -= factor * a[col][k];
      }
      b[row] -= factor * b[col];
    }
  }
  std::array<double, N> x{};
  for (std::size_t i = N; i-- > 0;) {
    double sum = b[i];
    for (std::size_t k = i + 1; k < N; ++k) {
      sum -= a[i][k] * x[k];
    }
    x[i] = sum / a[i][i];
  }
  return x;
}
}  // namespace

double PolySegment::evaluate(double t, int order) const
{
  if (order < 0) {
    throw DomainError("negative derivative order");
  }
  const auto k = static_cast<std::size_t>(order);
  if (k >= N) {
    return 0.0;
  }
  double value = 0.0;
  for (std::size_t i = N; i-- > k;) {
    value = value * t + coefficients[i] * falling_factorial(i, k);
  }
  return value;
}

PolySegment solve_axis(const AxisBoundary & boundary)
{
  const double T = boundary.duration;
  if (!std::isfinite(T) || !(T >= kMinSolveDuration)) {
    throw SolveError("duration " + std::to_string(T) + " s is too short or not finite");
  }
  if (
    !std::isfinite(boundary.p0) || !std::isfinite(boundary.v0) || !std::isfinite(boundary.a0) ||
    !std::isfinite(boundary.j0) || !std::isfinite(boundary.pf)) {
    throw SolveError("boundary values must be finite");
  }

  // Rows 0..3: derivatives 0..3 at s = 0. Rows 4..7: derivatives 0..3 at s = 1.
  std::array<std::array<double, N>, N> system{};
  for (std::size_t k = 0; k < 4; ++k) {
    system[k][k] = falling_factorial(k, k);
    for (std::size_t i = k; i < N; ++i) {
      system[4 + k][i] = falling_factorial(i, k);
    }
  }
  const std::array<double, N> rhs{
    boundary.p0, boundary.v0 * T, boundary.a0 * T * T, boundary.j0 * T * T * T,
    boundary.pf, 0.0, 0.0, 0.0};
  const auto normalized = solve_dense(system, rhs);

  PolySegment segment;
  segment.duration = T;
  double scale = 1.0;
  for (std::size_t i = 0; i < N; ++i) {
    segment.coefficients[i] = normalized[i] / scale;
    scale *= T;
    if (!std::isfinite(segment.coefficients[i])) {
      throw SolveError("coefficients overflow for duration " + std::to_string(T) + " s");
    }
  }
  return segment;
}

}  // namespace safestop
