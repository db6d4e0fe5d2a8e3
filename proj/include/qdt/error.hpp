// Copyright 2026 The qdt Authors

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
 * Exception types shared by every qdt module.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace qdt {

/// Bad caller input: malformed matrices, mismatched spaces, invalid lotteries.
class InputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Operand dimensions do not fit the operation, or exceed the size guard.
class DimensionError : public InputError {
  public:
    using InputError::InputError;
};

/// A numerical identity that must hold by construction was violated.
class InvariantViolation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace qdt
