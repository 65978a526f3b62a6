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

#include "geometry/point_cloud_io.hpp"

#include "geometry/errors.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace safestop
{

std::vector<Vec3> read_point_cloud(std::istream & in)
{
  std::vector<Vec3> points;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    std::string token;
    std::vector<double> values;
    while (fields >> token) {
      std::size_t consumed = 0;
      double value = 0.0;
      try {
        value = std::stod(token, &consumed);
      } catch (const std::exception &) {
        consumed = 0;
      }
      if (consumed != token.size()) {
        throw InvalidInput(
          "line " + std::to_string(line_number) + ": not a number: '" + token + "'",
          points.size());
      }
      values.push_back(value);
    }
    if (values.empty()) {
      continue;
    }
    if (values.size() != 3) {
      throw InvalidInput(
        "line " + std::to_string(line_number) + ": expected 3 coordinates, got " +
          std::to_string(values.size()),
        points.size());
    }
    const Vec3 p(values[0], values[1], values[2]);
    if (!is_finite(p)) {
      throw InvalidInput(
        "line " + std::to_string(line_number) + ": non-finite coordinate at point " +
          std::to_string(points.size()),
        points.size());
    }
    points.push_back(p);
  }
  return points;
}

std::vector<Vec3> load_point_cloud(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open point cloud '" + path.string() + "'");
  }
  return read_point_cloud(in);
}

void write_point_cloud(std::ostream & out, const std::vector<Vec3> & points)
{
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(17);
  for (const auto & p : points) {
    out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace safestop
