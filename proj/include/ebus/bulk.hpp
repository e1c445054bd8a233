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

#include <cstdint>
#include <vector>

#include "ebus/rng.hpp"
#include "ebus/sampler.hpp"
#include "ebus/wide_uint.hpp"

namespace ebus {

/// Exact integer level weight after scaling by the lowest occupied exponent:
/// weight = sum(level) * 2^(level - min occupied level).
struct ScaledLevelWeight {
  int level;
  WideUint weight;
};

/// Scaled exact weights of all occupied levels, descending by level.
/// Requires a nonempty sampler. Every value, and every suffix sum of them,
/// fits in fewer than 2226 bits.
std::vector<ScaledLevelWeight> scaled_level_weights(const Sampler& s);

/// Exactly uniform over {0, ..., bound-1} for bound >= 1, by rejection over
/// bit_length(bound) fresh random bits per attempt.
WideUint wide_uniform_below(RngSource& rng, const WideUint& bound);

/// True with probability exactly num/den. Requires num <= den, den >= 1.
bool exact_bernoulli(RngSource& rng, const WideUint& num, const WideUint& den);

/// Counts per occupied level (descending), summing to `total`.
struct LevelCount {
  int level;
  uint64_t count;
};
struct LevelCounts {
  std::vector<LevelCount> per_level;
  uint64_t total = 0;
};

/// Splits `draws` over the occupied levels with exactly the multinomial law
/// of that many independent level picks: walking the levels top-down, each
/// count is an exact Binomial(remaining, weight/suffix-weight) drawn as
/// independent exact Bernoulli trials, and the last level takes the
/// remainder. Requires a nonempty sampler.
LevelCounts draw_level_counts(const Sampler& s, uint64_t draws, RngSource& rng);

}  // namespace ebus
