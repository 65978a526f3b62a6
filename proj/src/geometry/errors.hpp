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

#ifndef SAFESTOP__GEOMETRY__ERRORS_HPP_
#define SAFESTOP__GEOMETRY__ERRORS_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace safestop
{

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Rejected input value. Carries the offending element index when the input is a list.
class InvalidInput : public Error
{
public:
  explicit InvalidInput(const std::string & what, std::optional<std::size_t> index = std::nullopt)
  : Error(what), index_(index)
  {
  }
  std::optional<std::size_t> index() const { return index_; }

private:
  std::optional<std::size_t> index_;
};

/// Geometry for which a quantity is undefined (zero velocity, coincident points).
class DegenerateInput : public Error
{
public:
  using Error::Error;
};

/// Caller broke a documented precondition.
class ContractError : public Error
{
public:
  using Error::Error;
};

class SolveError : public Error
{
public:
  using Error::Error;
};

class DomainError : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

class IoError : public Error
{
public:
  using Error::Error;
};

class GenerationError : public Error
{
public:
  using Error::Error;
};

}  // namespace safestop

#endif  // SAFESTOP__GEOMETRY__ERRORS_HPP_
