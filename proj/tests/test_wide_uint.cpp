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

#include <cmath>
#include <random>

#include "doctest.h"

using namespace ebus;

namespace {

uint128 random_u128(std::mt19937_64& gen, int max_bits) {
  uint128 v = (uint128(gen()) << 64) | gen();
  const int drop = 128 - max_bits;
  return drop > 0 ? v >> drop : v;
}

}  // namespace

TEST_CASE("construction and zero checks") {
  CHECK(WideUint().is_zero());
  CHECK(WideUint().bit_length() == 0);
  CHECK(WideUint(1).bit_length() == 1);
  CHECK(WideUint(0xffffffffffffffffull).bit_length() == 64);
  const WideUint big = WideUint::from_u128(uint128(1) << 100);
  CHECK(big.bit_length() == 101);
  CHECK_FALSE(big.is_zero());
}

TEST_CASE("arithmetic agrees with native 128-bit results in range") {
  std::mt19937_64 gen(91);
  for (int i = 0; i < 20000; ++i) {
    const uint128 a = random_u128(gen, 120);
    const uint128 b = random_u128(gen, 120);
    CHECK(WideUint::from_u128(a) + WideUint::from_u128(b) == WideUint::from_u128(a + b));
    const uint128 lo = a < b ? a : b;
    const uint128 hi = a < b ? b : a;
    CHECK(WideUint::from_u128(hi) - WideUint::from_u128(lo) == WideUint::from_u128(hi - lo));
    CHECK((WideUint::from_u128(a) <=> WideUint::from_u128(b)) == (a <=> b));
  }
}

TEST_CASE("shifts round-trip and track bit length") {
  std::mt19937_64 gen(92);
  for (int i = 0; i < 20000; ++i) {
    const uint128 a = random_u128(gen, 128);
    if (a == 0) continue;
    const unsigned k = static_cast<unsigned>(gen() % (WideUint::kBits - 128));
    WideUint w = WideUint::from_u128(a);
    const int before = w.bit_length();
    w <<= k;
    CHECK(w.bit_length() == before + static_cast<int>(k));
    CHECK_FALSE(w.has_bits_below(k));
    w >>= k;
    CHECK(w == WideUint::from_u128(a));
  }

  WideUint x(0b1010);
  CHECK(x.has_bits_below(2));
  CHECK_FALSE(x.has_bits_below(1));
  CHECK((x >> 1).low_word() == 0b101);
  CHECK((x >> 4000).is_zero());
}

TEST_CASE("word-granular shifts cross word boundaries") {
  WideUint v(0x123456789abcdef0ull);
  v <<= 64;
  CHECK(v.word(0) == 0);
  CHECK(v.word(1) == 0x123456789abcdef0ull);
  v <<= 7;
  v >>= 71;
  CHECK(v.low_word() == 0x123456789abcdef0ull);
}

TEST_CASE("frexp and ratios survive magnitudes beyond double range") {
  const auto [f1, e1] = WideUint(1).frexp();
  CHECK(f1 == 0.5);
  CHECK(e1 == 1);

  WideUint big(1);
  big <<= 2000;
  const auto [f2, e2] = big.frexp();
  CHECK(f2 == 0.5);
  CHECK(e2 == 2001);

  WideUint three(3);
  three <<= 2100;
  CHECK(wide_ratio(WideUint(1) << 2100, three) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(wide_ratio(WideUint(), three) == 0.0);
  CHECK(wide_ratio(WideUint(7), WideUint(7)) == 1.0);
}

TEST_CASE("from_words mirrors word layout") {
  const uint64_t words[3] = {5, 6, 7};
  const WideUint w = WideUint::from_words(words);
  CHECK(w.word(0) == 5);
  CHECK(w.word(1) == 6);
  CHECK(w.word(2) == 7);
  CHECK(w.bit_length() == 128 + 3);
}
