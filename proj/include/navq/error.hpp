// Copyright 2026 The navq Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Exception types shared by every navq module.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace navq {

/// Base class of all navq errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid sizes, ranges, or knobs.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// A circuit plan references a feature or parameter that does not resolve.
class LayoutError : public Error {
  public:
    using Error::Error;
};

/// Caller-supplied data has the wrong shape.
class InputError : public Error {
  public:
    using Error::Error;
};

/// An API was called in a state where it is not allowed.
class UsageError : public Error {
  public:
    using Error::Error;
};

class SceneError : public Error {
  public:
    using Error::Error;
};

class PlanningError : public Error {
  public:
    using Error::Error;
};

/// Throws `E` with `msg` unless `cond` holds.
template <class E = ConfigError>
inline void require(bool cond, const std::string &msg) {
    if (!cond) {
        throw E(msg);
    }
}

} // namespace navq
