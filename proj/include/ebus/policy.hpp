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

#include "ebus/check.hpp"
#include "ebus/float_decode.hpp"
#include "ebus/uint128.hpp"

namespace ebus {

/// Parameters of the global-shift policy.
///
/// The shift G scales every level weight so that the total approximate mass
/// A = sum over levels of (floor(W * 2^G) + 1) stays inside one 64-bit word
/// (safe) while staying large enough that the corrective rejection step is
/// rare (good: A >= 2^good_exponent; strongly good: A >= 2^strong_exponent).
/// Defaults keep the slow-path probability below 2^-20 at good shifts and
/// below 2^-34 right after a lazy increase.
struct PolicyParams {
  static constexpr int kWordBits = 64;

  int init_exponent = 39;      // target magnitude of A on first insertion
  int overflow_exponent = 48;  // target magnitude of a bucket after level overflow
  int good_exponent = 32;      // lazy increase triggers when A drops below 2^this
  int strong_exponent = 46;    // target magnitude of A after a lazy increase
  int global_step = 16;        // shift decrement on total-mass overflow

  // Enforces the inequalities the policy's guarantees are proved under.
  // Throws std::invalid_argument on violation.
  void validate() const;
};

enum class ShiftKind {
  kInit,            // first nonzero weight entered an empty sampler
  kLevelOverflow,   // a single bucket would have exceeded the word range
  kGlobalOverflow,  // the total approximate mass exceeded the word range
  kLazyIncrease,    // pre-sampling restoration of a strongly good shift
};

/// One committed change of the global shift, reported to the optional
/// observer hook after the affected level summaries have been repaired.
struct ShiftEvent {
  ShiftKind kind;
  int old_shift;
  int new_shift;
  int levels_touched;  // summaries rewritten by the repair (0 for kInit)
};

// Shift installed when the first nonzero weight lands in `top`.
inline int init_shift(const PolicyParams& p, int top) {
  return p.init_exponent + 1 - PolicyParams::kWordBits - top;
}

// Downward shift chosen when `level` would overflow with prospective exact
// sum `sum`; places that bucket in [2^overflow_exponent, 2^(overflow_exponent+1)).
inline int level_overflow_shift(const PolicyParams& p, uint128 sum, int level) {
  EBUS_CHECK(sum != 0);
  return p.overflow_exponent - floor_log2(sum) - level;
}

// Exact bucket value after lowering the shift by `down`: floor((A-1)/2^down)+1.
// Valid for any nonempty level whose stored value was exact at the old shift.
inline uint64_t rescale_bucket_down(uint64_t approx, unsigned down) {
  return shift_right_saturating(approx - 1, down) + 1;
}

// First level not forced to be a unit bucket: every nonempty level below
// theta has bucket value exactly 1, independent of its significand sum.
inline int unit_bucket_threshold(int shift, uint64_t live) {
  EBUS_CHECK(live >= 1);
  return -PolicyParams::kWordBits - shift - (bit_length(live) - 1);
}

// Below eta, the bucket value depends only on the upper 64 bits of the exact
// significand sum.
inline int upper_half_threshold(int shift) { return -PolicyParams::kWordBits - shift; }

}  // namespace ebus
