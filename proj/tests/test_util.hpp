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

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ebus/float_decode.hpp"
#include "ebus/rng.hpp"

namespace ebus_test {

// Replays a fixed word sequence; trips if a test consumes more than scripted.
class ScriptedRng final : public ebus::RngSource {
 public:
  explicit ScriptedRng(std::vector<uint64_t> words) : words_(std::move(words)) {}

  uint64_t next_word() override {
    EBUS_CHECK(next_ < words_.size());
    return words_[next_++];
  }

  size_t consumed() const { return next_; }

 private:
  std::vector<uint64_t> words_;
  size_t next_ = 0;
};

// Positive finite weight; regimes: 0 moderate (around 1), 1 wild full range,
// 2 subnormal-heavy, 3 exact powers of two.
inline double random_weight(std::mt19937_64& gen, int regime) {
  std::uniform_real_distribution<double> mantissa(1.0, 2.0);
  for (;;) {
    double w = 0.0;
    switch (regime & 3) {
      case 0:
        w = std::ldexp(mantissa(gen), static_cast<int>(gen() % 64) - 32);
        break;
      case 1:
        w = std::ldexp(mantissa(gen), static_cast<int>(gen() % 2040) - 1064);
        break;
      case 2:
        w = std::ldexp(mantissa(gen), -1022 - static_cast<int>(gen() % 53));
        break;
      case 3:
        w = std::ldexp(1.0, static_cast<int>(gen() % 2044) - 1070);
        break;
    }
    if (ebus::classify(w) == ebus::WeightClass::kPositive) return w;
  }
}

}  // namespace ebus_test
