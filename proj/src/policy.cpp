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

#include "ebus/policy.hpp"

#include <stdexcept>

namespace ebus {

void PolicyParams::validate() const {
  const int b = kWordBits;
  auto fail = [](const char* what) { throw std::invalid_argument(what); };

  // 2 <= global_step <= overflow_exponent - good_exponent < b - good_exponent - 2
  if (global_step < 2) fail("ebus: policy global_step must be at least 2");
  if (global_step > overflow_exponent - good_exponent)
    fail("ebus: policy global_step exceeds overflow_exponent - good_exponent");
  if (overflow_exponent - good_exponent >= b - good_exponent - 2)
    fail("ebus: policy overflow_exponent too large for the word size");

  // log2(kLevelCount) < good <= init <= strong < b - log2(b + 10)
  if ((uint64_t(1) << good_exponent) <= uint64_t(kLevelCount) || good_exponent >= b)
    fail("ebus: policy good_exponent must exceed log2 of the level count");
  if (good_exponent > init_exponent) fail("ebus: policy good_exponent exceeds init_exponent");
  if (init_exponent > strong_exponent)
    fail("ebus: policy init_exponent exceeds strong_exponent");
  if (strong_exponent >= b ||
      (uint128(b + 10) << strong_exponent) >= (uint128(1) << b))
    fail("ebus: policy strong_exponent too large for the word size");
}

}  // namespace ebus
