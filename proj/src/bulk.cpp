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

#include "ebus/bulk.hpp"

#include <cassert>
#include <stdexcept>

namespace ebus {

namespace {
// Scaled level weights and their suffix sums stay below 2b + N bits.
constexpr int kWidthBound = 2 * 64 + kLevelCount;  // 2226
}  // namespace

std::vector<ScaledLevelWeight> scaled_level_weights(const Sampler& s) {
  if (s.live_count() == 0)
    throw std::logic_error("ebus: scaled level weights of an empty sampler");
  const std::vector<int> levels = s.occupied_levels();
  const int lowest = levels.back();
  std::vector<ScaledLevelWeight> out;
  out.reserve(levels.size());
  for (int lvl : levels) {
    WideUint w = WideUint::from_u128(s.level(lvl).sum);
    w <<= static_cast<unsigned>(lvl - lowest);
    assert(w.bit_length() < kWidthBound);
    out.push_back({lvl, w});
  }
  return out;
}

WideUint wide_uniform_below(RngSource& rng, const WideUint& bound) {
  EBUS_CHECK(!bound.is_zero());
  const int bits = bound.bit_length();
  const int words = (bits + 63) / 64;
  const uint64_t top_mask =
      (bits % 64 == 0) ? ~uint64_t(0) : (uint64_t(1) << (bits % 64)) - 1;
  uint64_t raw[WideUint::kWords];
  for (;;) {
    for (int i = 0; i < words; ++i) raw[i] = rng.next_word();
    raw[words - 1] &= top_mask;
    WideUint v = WideUint::from_words({raw, static_cast<size_t>(words)});
    if (v < bound) return v;
  }
}

bool exact_bernoulli(RngSource& rng, const WideUint& num, const WideUint& den) {
  EBUS_CHECK(!den.is_zero());
  if (num > den)
    throw std::invalid_argument("ebus: Bernoulli numerator exceeds denominator");
  return wide_uniform_below(rng, den) < num;
}

LevelCounts draw_level_counts(const Sampler& s, uint64_t draws, RngSource& rng) {
  if (s.live_count() == 0)
    throw std::logic_error("ebus: level counts on an empty sampler");
  const std::vector<ScaledLevelWeight> scaled = scaled_level_weights(s);
  const size_t n = scaled.size();

  // Suffix sums over the descending level order, computed once per batch.
  std::vector<WideUint> suffix(n);
  suffix[n - 1] = scaled[n - 1].weight;
  for (size_t i = n - 1; i-- > 0;) {
    suffix[i] = suffix[i + 1] + scaled[i].weight;
    assert(suffix[i].bit_length() < kWidthBound);
  }

  LevelCounts out;
  out.total = draws;
  out.per_level.reserve(n);
  uint64_t remaining = draws;
  for (size_t i = 0; i < n; ++i) {
    uint64_t count;
    if (i + 1 == n) {
      count = remaining;
    } else {
      count = 0;
      for (uint64_t t = 0; t < remaining; ++t)
        count += exact_bernoulli(rng, scaled[i].weight, suffix[i]) ? 1 : 0;
    }
    out.per_level.push_back({scaled[i].level, count});
    remaining -= count;
  }
  return out;
}

std::vector<uint64_t> Sampler::sample_many(uint64_t draws, RngSource& rng) {
  if (live_count_ == 0) throw std::logic_error("ebus: sample on an empty sampler");
  lazy_increase();  // same entry contract as the scalar path
  const LevelCounts counts = draw_level_counts(*this, draws, rng);
  std::vector<uint64_t> out;
  out.reserve(draws);
  for (const auto& [lvl, count] : counts.per_level) {
    const auto& entries = level(lvl).entries;
    for (uint64_t i = 0; i < count; ++i)
      out.push_back(sample_within(entries, rng, &stats_.intra_proposals));
  }
  stats_.samples += draws;
  return out;
}

}  // namespace ebus
