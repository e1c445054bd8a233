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

#include "ebus/audit.hpp"

#include <string>

#include "ebus/wide_uint.hpp"

namespace ebus {

namespace {

std::string level_tag(int lvl) { return "level " + std::to_string(lvl); }

}  // namespace

AuditResult audit_state(const Sampler& s) {
  auto fail = [](std::string msg) { return AuditResult{false, std::move(msg)}; };

  uint64_t live = 0;
  uint128 total = 0;
  int top = kLevelMin - 1;
  int lowest = kLevelMax + 1;

  for (int lvl = kLevelMin; lvl <= kLevelMax; ++lvl) {
    const LevelRecord& rec = s.level(lvl);

    uint128 sum = 0;
    for (const LevelEntry& e : rec.entries) {
      if ((e.sig >> 63) == 0) return fail(level_tag(lvl) + ": denormalized significand");
      sum += e.sig;
    }
    if (sum != rec.sum) return fail(level_tag(lvl) + ": exact sum mismatch");
    if ((rec.sum == 0) != rec.entries.empty())
      return fail(level_tag(lvl) + ": sum/entry emptiness mismatch");

    const auto approx = bucket_approx(rec.sum, lvl, s.shift());
    if (!approx) return fail(level_tag(lvl) + ": bucket overflows a word");
    if (*approx != rec.approx) return fail(level_tag(lvl) + ": bucket mismatch");

    const int off = level_index(lvl);
    const bool bit = (s.occupancy_words()[static_cast<size_t>(off >> 6)] >>
                      (off & 63)) & 1;
    if (bit != (rec.sum != 0)) return fail(level_tag(lvl) + ": occupancy bit mismatch");

    for (uint64_t pos = 0; pos < rec.entries.size(); ++pos) {
      const auto loc = s.locate(rec.entries[pos].index);
      if (!loc || loc->first != lvl || loc->second != pos)
        return fail(level_tag(lvl) + ": locator does not point back to entry");
    }

    live += rec.entries.size();
    total += rec.approx;
    if (rec.sum != 0) {
      top = std::max(top, lvl);
      lowest = std::min(lowest, lvl);
    }
  }

  if (live != s.live_count()) return fail("live count mismatch");
  if (total != s.total_approx()) return fail("total approximate mass mismatch");
  if (total >= kTwoPow64) return fail("total approximate mass exceeds one word");

  uint64_t located = 0;
  for (uint64_t j = 0; j < s.capacity(); ++j)
    if (s.locate(j)) ++located;
  if (located != live) return fail("locator table holds a stale entry");

  if (live == 0) {
    if (s.top_level().has_value()) return fail("top level set on empty sampler");
    return {};
  }
  if (!s.top_level() || *s.top_level() != top) return fail("top level mismatch");

  // sum(A_l - 1) <= M(G) <= A(G), checked exactly at the common scale
  // 2^-(lowest + shift). At a safe shift every occupied level has
  // level + shift <= 0, so the scale exponent is nonnegative.
  const int scale = -(lowest + s.shift());
  if (scale < 0) return fail("occupied level above the word range");
  WideUint exact_mass;  // M(G) * 2^scale
  uint64_t floor_sum = 0;
  for (int lvl = lowest; lvl <= top; ++lvl) {
    const LevelRecord& rec = s.level(lvl);
    if (rec.sum == 0) continue;
    WideUint w = WideUint::from_u128(rec.sum);
    w <<= static_cast<unsigned>(lvl - lowest);
    exact_mass += w;
    floor_sum += rec.approx - 1;
  }
  const WideUint mass_high = exact_mass >> static_cast<unsigned>(scale);
  // floor_sum <= M(G)  <=>  floor_sum <= floor(M(G))
  if (WideUint(floor_sum) > mass_high)
    return fail("exact mass below the sum of bucket floors");
  // M(G) <= A(G)  <=>  quotient below A, or equal with no remainder
  const auto total_u64 = static_cast<uint64_t>(total);
  if (mass_high > WideUint(total_u64) ||
      (mass_high == WideUint(total_u64) &&
       exact_mass.has_bits_below(static_cast<unsigned>(scale))))
    return fail("exact mass exceeds total approximate mass");

  return {};
}

}  // namespace ebus
