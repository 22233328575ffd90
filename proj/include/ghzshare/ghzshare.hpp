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

#ifndef GHZSHARE_GHZSHARE_HPP
#define GHZSHARE_GHZSHARE_HPP

#include "ghzshare/attacks.hpp"
#include "ghzshare/density_matrix.hpp"
#include "ghzshare/errors.hpp"
#include "ghzshare/harness.hpp"
#include "ghzshare/keyshare.hpp"
#include "ghzshare/measurement.hpp"
#include "ghzshare/parity_rules.hpp"
#include "ghzshare/random_stream.hpp"
#include "ghzshare/serialization.hpp"
#include "ghzshare/splitting.hpp"
#include "ghzshare/state_vector.hpp"

#endif  // GHZSHARE_GHZSHARE_HPP
