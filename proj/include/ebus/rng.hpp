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
#include <random>

#include "ebus/check.hpp"

namespace ebus {

/// Source of uniform 64-bit words. All exactness statements are conditional
/// on next_word() returning independent words uniform over {0, ..., 2^64-1};
/// everything built on top (bounded uniforms, Bernoulli trials, the sampler
/// itself) introduces no further bias.
class RngSource {
 public:
  virtual ~RngSource() = default;
  virtual uint64_t next_word() = 0;

  /// Exactly uniform over {0, ..., bound-1} for 1 <= bound. Rejection on raw
  /// words; no modulo bias.
  uint64_t uniform_below(uint64_t bound) {
    EBUS_CHECK(bound >= 1);
    if ((bound & (bound - 1)) == 0) return next_word() & (bound - 1);
    const uint64_t rem = (uint64_t(0) - bound) % bound;  // 2^64 mod bound
    const uint64_t limit = uint64_t(0) - rem;            // largest multiple of bound
    for (;;) {
      const uint64_t r = next_word();
      if (r < limit) return r % bound;
    }
  }
};

/// Default word source backed by std::mt19937_64.
class Mt19937Source final : public RngSource {
 public:
  explicit Mt19937Source(uint64_t seed) : gen_(seed) {}
  uint64_t next_word() override { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace ebus
