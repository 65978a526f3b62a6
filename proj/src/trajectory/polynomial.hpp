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

#ifndef SAFESTOP__TRAJECTORY__POLYNOMIAL_HPP_
#define SAFESTOP__TRAJECTORY__POLYNOMIAL_HPP_

#include <array>
#include <cstddef>

namespace safestop
{

/// Boundary-value problem for one axis: full state up to jerk at t = 0, rest at pf at t = T.
struct AxisBoundary
{
  double p0{0.0};
  double v0{0.0};
  double a0{0.0};
  double j0{0.0};
  double pf{0.0};
  double duration{1.0};
};

inline constexpr std::size_t kPolyCoefficients = 8;

/// Degree-7 polynomial on [0, T], coefficients in ascending powers of t.
struct PolySegment
{
  std::array<double, kPolyCoefficients> coefficients{};
  double duration{0.0};

  /// order-th derivative at t. No domain check; callers own the interval.
  double evaluate(double t, int order = 0) const;
};

/**
 * Solves the 8 boundary constraints
 *   f(0) = p0, f'(0) = v0, f''(0) = a0, f'''(0) = j0,
 *   f(T) = pf, f'(T) = f''(T) = f'''(T) = 0
 * for the unique degree-7 polynomial. The system is assembled in normalized time
 * s = t / T (so its matrix does not depend on T) and reduced by Gaussian elimination with
 * partial pivoting; coefficients are then rescaled by T^-i.
 *
 * Throws SolveError when T is not a usable positive duration.
 */
PolySegment solve_axis(const AxisBoundary & boundary);

/// Smallest duration accepted by solve_axis.
inline constexpr double kMinSolveDuration = 1e-6;

}  // namespace safestop

#endif  // SAFESTOP__TRAJECTORY__POLYNOMIAL_HPP_
