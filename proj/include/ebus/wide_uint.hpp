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

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <utility>

#include "ebus/uint128.hpp"

namespace ebus {

/// Fixed-width 2240-bit unsigned integer (35 x 64-bit words, little-endian).
///
/// Scaling every level weight by the lowest occupied exponent turns all level
/// weights and their suffix sums into integers of fewer than 128 + 2098 = 2226
/// bits, so this width holds every exact quantity needed by bulk sampling and
/// the invariant checker. Arithmetic is exact; overflow and underflow are
/// program errors, not wraparound.
class WideUint {
 public:
  static constexpr int kWords = 35;
  static constexpr int kBits = kWords * 64;

  WideUint() = default;
  explicit WideUint(uint64_t v) { words_[0] = v; }

  static WideUint from_u128(uint128 v) {
    WideUint w;
    w.words_[0] = static_cast<uint64_t>(v);
    w.words_[1] = static_cast<uint64_t>(v >> 64);
    return w;
  }

  // Little-endian words; at most kWords of them.
  static WideUint from_words(std::span<const uint64_t> words);

  bool is_zero() const;
  int bit_length() const;
  bool has_bits_below(unsigned k) const;  // any set bit at position < k

  WideUint& operator+=(const WideUint& o);  // checks: no carry out
  WideUint& operator-=(const WideUint& o);  // checks: no borrow (*this >= o)
  WideUint& operator<<=(unsigned k);        // checks: no bits shifted out
  WideUint& operator>>=(unsigned k);

  friend WideUint operator+(WideUint a, const WideUint& b) { return a += b; }
  friend WideUint operator-(WideUint a, const WideUint& b) { return a -= b; }
  friend WideUint operator<<(WideUint a, unsigned k) { return a <<= k; }
  friend WideUint operator>>(WideUint a, unsigned k) { return a >>= k; }

  std::strong_ordering operator<=>(const WideUint& o) const;
  bool operator==(const WideUint& o) const { return words_ == o.words_; }

  uint64_t word(int i) const { return words_[static_cast<size_t>(i)]; }
  uint64_t low_word() const { return words_[0]; }

  // value ~= frac * 2^exp with frac in [0.5, 1); {0, 0} for zero. Truncates
  // below the top 64 bits, so the relative error is under 2^-63.
  std::pair<double, int> frexp() const;

 private:
  std::array<uint64_t, kWords> words_{};
};

// num/den as a double, correct to ordinary double rounding even when both
// operands are far outside the double range. den must be nonzero.
double wide_ratio(const WideUint& num, const WideUint& den);

}  // namespace ebus
