// Copyright 2026 The metaqaoa Authors

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
 * Exception hierarchy shared by every metaqaoa module.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace metaqaoa {

/// Base class of all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Register or problem size above what the dense simulator supports.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// Qubit/spin index outside the valid range.
class IndexError : public Error {
  public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Mismatched vector/tensor dimensions.
class ShapeError : public Error {
  public:
    using Error::Error;
};

/// Malformed configuration: parameter slots, CLI config, missing files.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// A numerical quantity became non-finite during optimization.
class DivergenceError : public Error {
  public:
    using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
  public:
    using Error::Error;
};

namespace detail {
template <typename E> [[noreturn]] inline void fail(const std::string &msg) {
    throw E(msg);
}
} // namespace detail

} // namespace metaqaoa

#define METAQAOA_REQUIRE(cond, ErrorType, msg)                                \
    do {                                                                       \
        if (!(cond)) {                                                         \
            ::metaqaoa::detail::fail<ErrorType>(msg);                          \
        }                                                                      \
    } while (0)
