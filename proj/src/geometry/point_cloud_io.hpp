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

#ifndef SAFESTOP__GEOMETRY__POINT_CLOUD_IO_HPP_
#define SAFESTOP__GEOMETRY__POINT_CLOUD_IO_HPP_

#include "geometry/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace safestop
{

// One "x y z" triple per line in meters; '#' starts a comment that runs to end of line.
std::vector<Vec3> read_point_cloud(std::istream & in);
std::vector<Vec3> load_point_cloud(const std::filesystem::path & path);

void write_point_cloud(std::ostream & out, const std::vector<Vec3> & points);

}  // namespace safestop

#endif  // SAFESTOP__GEOMETRY__POINT_CLOUD_IO_HPP_
