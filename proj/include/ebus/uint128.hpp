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

#include <bit>
#include <cstdint>

static_assert(sizeof(unsigned __int128) == 16, "requires a 128-bit integer type");

namespace ebus {

// Exact significand sums are kept in 128-bit integers: a level can hold up to
// 2^64 - 1 significands of up to 64 bits each.
using uint128 = unsigned __int128;

inline constexpr uint128 kTwoPow64 = uint128(1) << 64;

inline int bit_length(uint128 v) {
  const auto hi = static_cast<uint64_t>(v >> 64);
  if (hi != 0) return 128 - std::countl_zero(hi);
  const auto lo = static_cast<uint64_t>(v);
  return lo == 0 ? 0 : 64 - std::countl_zero(lo);
}

inline int bit_length(uint64_t v) { return v == 0 ? 0 : 64 - std::countl_zero(v); }

// floor(log2 v) for v >= 1.
inline int floor_log2(uint128 v) { return bit_length(v) - 1; }

// floor(v / 2^k) with shift counts beyond the word size allowed.
inline uint128 shift_right_saturating(uint128 v, unsigned k) {
  return k >= 128 ? uint128(0) : v >> k;
}

inline uint64_t shift_right_saturating(uint64_t v, unsigned k) {
  return k >= 64 ? 0 : v >> k;
}

}  // namespace ebus
