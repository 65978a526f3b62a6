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

#include "service/logging.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <string>

namespace safestop
{

std::shared_ptr<spdlog::logger> log()
{
  static const std::shared_ptr<spdlog::logger> logger = [] {
    auto l = spdlog::stderr_color_mt("safestop");
    auto level = spdlog::level::warn;
    if (const char * env = std::getenv("SAFESTOP_LOG")) {
      const auto parsed = spdlog::level::from_str(env);
      // from_str maps unknown names to off; only accept it when asked for explicitly.
      if (parsed != spdlog::level::off || std::string(env) == "off") {
        level = parsed;
      }
    }
    l->set_level(level);
    l->set_pattern("[%H:%M:%S.%e] [%l] %v");
    return l;
  }();
  return logger;
}

}  // namespace safestop
