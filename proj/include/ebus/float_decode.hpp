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
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace ebus {

/// A positive IEEE binary64 value factored as sig * 2^level with the
/// significand normalized into [2^63, 2^64). Every positive double, normal or
/// subnormal, has exactly one such factorization.
struct DecodedWeight {
  int level;     // binary exponent of the weight written as sig * 2^level
  uint64_t sig;  // normalized significand, top bit always set
};

// Level domain induced by normalizing binary64: 2046 normal-exponent levels
// plus 52 levels reached only by subnormals, 2098 in total.
inline constexpr int kLevelMin = -1137;
inline constexpr int kLevelMax = 960;
inline constexpr int kLevelCount = kLevelMax - kLevelMin + 1;
static_assert(kLevelCount == 2098);

enum class WeightClass { kZero, kPositive, kInvalid };

// Total over all doubles. Negative, NaN and infinite values are Invalid;
// zero (either sign) means "absent".
inline WeightClass classify(double w) {
  if (w == 0.0) return WeightClass::kZero;
  if (!(w > 0.0) || !std::isfinite(w)) return WeightClass::kInvalid;
  return WeightClass::kPositive;
}

/// Exact factorization of a positive double. The reconstruction
/// sig * 2^level equals the input bit-for-bit; no rounding is involved.
inline DecodedWeight decode(double w) {
  if (classify(w) != WeightClass::kPositive)
    throw std::invalid_argument("ebus: decode requires a positive finite weight");
  const uint64_t bits = std::bit_cast<uint64_t>(w);
  const uint64_t mantissa = bits & ((uint64_t(1) << 52) - 1);
  const int biased_exp = static_cast<int>(bits >> 52);
  if (biased_exp == 0) {
    // Subnormal: w = mantissa * 2^-1074 with 1 <= mantissa < 2^52.
    const int lead = std::countl_zero(mantissa);
    return {-1074 - lead, mantissa << lead};
  }
  // Normal: w = (2^52 + mantissa) * 2^(biased_exp - 1075).
  return {biased_exp - 1086, ((uint64_t(1) << 52) | mantissa) << 11};
}

// Inverse of decode for decoded values (sig then has at most 53 significant
// bits, so the conversion is exact).
inline double weight_from_decoded(const DecodedWeight& d) {
  return std::ldexp(static_cast<double>(d.sig), d.level);
}

// Dense offset of a level in [0, kLevelCount).
inline int level_index(int level) {
  if (level < kLevelMin || level > kLevelMax)
    throw std::out_of_range("ebus: level outside the binary64 level domain");
  return level - kLevelMin;
}

}  // namespace ebus
