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

#include "ebus/wide_uint.hpp"

#include <bit>
#include <cmath>

#include "ebus/check.hpp"

namespace ebus {

WideUint WideUint::from_words(std::span<const uint64_t> words) {
  EBUS_CHECK(words.size() <= kWords);
  WideUint w;
  for (size_t i = 0; i < words.size(); ++i) w.words_[i] = words[i];
  return w;
}

bool WideUint::is_zero() const {
  for (uint64_t w : words_)
    if (w != 0) return false;
  return true;
}

int WideUint::bit_length() const {
  for (int i = kWords - 1; i >= 0; --i) {
    if (words_[static_cast<size_t>(i)] != 0)
      return i * 64 + 64 - std::countl_zero(words_[static_cast<size_t>(i)]);
  }
  return 0;
}

bool WideUint::has_bits_below(unsigned k) const {
  if (k > static_cast<unsigned>(kBits)) k = kBits;
  const unsigned full = k / 64;
  for (unsigned i = 0; i < full; ++i)
    if (words_[i] != 0) return true;
  const unsigned rest = k % 64;
  if (rest != 0 && (words_[full] & ((uint64_t(1) << rest) - 1)) != 0) return true;
  return false;
}

WideUint& WideUint::operator+=(const WideUint& o) {
  unsigned carry = 0;
  for (int i = 0; i < kWords; ++i) {
    const uint128 sum = uint128(words_[static_cast<size_t>(i)]) +
                        o.words_[static_cast<size_t>(i)] + carry;
    words_[static_cast<size_t>(i)] = static_cast<uint64_t>(sum);
    carry = static_cast<unsigned>(sum >> 64);
  }
  EBUS_CHECK(carry == 0);
  return *this;
}

WideUint& WideUint::operator-=(const WideUint& o) {
  unsigned borrow = 0;
  for (int i = 0; i < kWords; ++i) {
    const uint64_t rhs = o.words_[static_cast<size_t>(i)];
    const uint64_t lhs = words_[static_cast<size_t>(i)];
    const uint64_t out = lhs - rhs - borrow;
    borrow = (lhs < rhs || (lhs == rhs && borrow)) ? 1 : 0;
    words_[static_cast<size_t>(i)] = out;
  }
  EBUS_CHECK(borrow == 0);
  return *this;
}

WideUint& WideUint::operator<<=(unsigned k) {
  if (k == 0 || is_zero()) return *this;
  EBUS_CHECK(static_cast<unsigned>(bit_length()) + k <= kBits);
  const unsigned word_shift = k / 64;
  const unsigned bit_shift = k % 64;
  for (int i = kWords - 1; i >= 0; --i) {
    const int src = i - static_cast<int>(word_shift);
    uint64_t v = src >= 0 ? words_[static_cast<size_t>(src)] : 0;
    if (bit_shift != 0) {
      v <<= bit_shift;
      if (src - 1 >= 0) v |= words_[static_cast<size_t>(src - 1)] >> (64 - bit_shift);
    }
    words_[static_cast<size_t>(i)] = v;
  }
  return *this;
}

WideUint& WideUint::operator>>=(unsigned k) {
  if (k == 0) return *this;
  if (k >= static_cast<unsigned>(kBits)) {
    words_.fill(0);
    return *this;
  }
  const unsigned word_shift = k / 64;
  const unsigned bit_shift = k % 64;
  for (int i = 0; i < kWords; ++i) {
    const unsigned src = static_cast<unsigned>(i) + word_shift;
    uint64_t v = src < kWords ? words_[src] : 0;
    if (bit_shift != 0) {
      v >>= bit_shift;
      if (src + 1 < kWords) v |= words_[src + 1] << (64 - bit_shift);
    }
    words_[static_cast<size_t>(i)] = v;
  }
  return *this;
}

std::strong_ordering WideUint::operator<=>(const WideUint& o) const {
  for (int i = kWords - 1; i >= 0; --i) {
    const uint64_t a = words_[static_cast<size_t>(i)];
    const uint64_t b = o.words_[static_cast<size_t>(i)];
    if (a != b) return a < b ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

std::pair<double, int> WideUint::frexp() const {
  const int bl = bit_length();
  if (bl == 0) return {0.0, 0};
  uint64_t top;
  if (bl <= 64) {
    top = words_[0] << (64 - bl);
  } else {
    WideUint shifted = *this;
    shifted >>= static_cast<unsigned>(bl - 64);
    top = shifted.low_word();
  }
  // top has its leading bit at position 63, so top * 2^-64 lies in [0.5, 1).
  return {std::ldexp(static_cast<double>(top), -64), bl};
}

double wide_ratio(const WideUint& num, const WideUint& den) {
  EBUS_CHECK(!den.is_zero());
  if (num.is_zero()) return 0.0;
  const auto [nf, ne] = num.frexp();
  const auto [df, de] = den.frexp();
  return std::ldexp(nf / df, ne - de);
}

}  // namespace ebus
