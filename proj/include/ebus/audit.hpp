// Copyright 2026 The EBUS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include "ebus/sampler.hpp"

namespace ebus {

struct AuditResult {
  bool ok = true;
  std::string message;  // first failed check, empty when ok
};

/// Recomputes every piece of derived state from the raw entry arrays and the
/// current shift, and compares bit-for-bit against the incrementally
/// maintained values: per-level exact sums and buckets, the occupancy bitmap,
/// the top level, the live count, the locator table (both directions), the
/// total approximate mass and its one-word safety bound, and the exact
/// sandwich sum(A_l - 1) <= M(G) <= A(G) evaluated in wide-integer
/// arithmetic at a common scale.
AuditResult audit_state(const Sampler& s);

}  // namespace ebus
