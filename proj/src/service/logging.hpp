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

#ifndef SAFESTOP__SERVICE__LOGGING_HPP_
#define SAFESTOP__SERVICE__LOGGING_HPP_

#include <spdlog/logger.h>

#include <memory>

namespace safestop
{

/// Shared stderr logger. The level comes from SAFESTOP_LOG (trace, debug, info, warn, error,
/// critical, off); unset or unrecognised values mean warn.
std::shared_ptr<spdlog::logger> log();

}  // namespace safestop

#endif  // SAFESTOP__SERVICE__LOGGING_HPP_
