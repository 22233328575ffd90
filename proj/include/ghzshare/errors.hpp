// Copyright 2026 The ghzshare Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GHZSHARE_ERRORS_HPP
#define GHZSHARE_ERRORS_HPP

#include <stdexcept>

namespace ghzshare {

/// A caller broke an operation's precondition (as opposed to passing a
/// malformed value, which is std::invalid_argument).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A state the simulator should never reach.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace ghzshare

#endif  // GHZSHARE_ERRORS_HPP
