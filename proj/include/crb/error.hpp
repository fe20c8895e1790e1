// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace crb {

/// Bad input: wrong dimensions, non-finite entries, non-positive powers.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotHermitianError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NotPositiveDefiniteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Null space of z^H is empty (single relay).
class NullSpaceEmptyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// z = 0 passed to a routine that needs a nonzero direction.
class DegenerateChannelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Interior-point iteration did not reach its stopping criterion.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, double gap)
        : std::runtime_error(what + " (duality gap estimate " + std::to_string(gap) + ")"), gap_(gap) {}

    double gap() const noexcept { return gap_; }

private:
    double gap_;
};

/// Upper bisection bound stayed feasible after the allowed number of doublings.
class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace crb
