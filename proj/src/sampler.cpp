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

#include "ebus/sampler.hpp"

#include <bit>
#include <cassert>
#include <limits>
#include <stdexcept>
#include <string>

namespace ebus {

std::optional<uint64_t> bucket_approx(uint128 sum, int level, int shift) {
  if (sum == 0) return uint64_t(0);
  const int s = level + shift;
  uint128 q;
  if (s <= 0) {
    q = shift_right_saturating(sum, static_cast<unsigned>(-s));
  } else {
    if (static_cast<unsigned>(bit_length(sum)) + static_cast<unsigned>(s) > 64)
      return std::nullopt;
    q = sum << static_cast<unsigned>(s);
  }
  if (q >= uint128(std::numeric_limits<uint64_t>::max())) return std::nullopt;
  return static_cast<uint64_t>(q) + 1;
}

bool refine_boundary(uint128 sum, int level, int shift, RngSource& rng) {
  RefinementCursor cursor{sum, level + shift};
  for (;;) {
    const uint64_t digit = cursor.next_digit();
    const uint64_t r = rng.next_word();
    if (r < digit) return true;
    if (r > digit || cursor.at_final_digit()) return false;
  }
}

uint64_t sample_within(std::span<const LevelEntry> entries, RngSource& rng,
                       uint64_t* proposal_rounds) {
  EBUS_CHECK(!entries.empty());
  const uint64_t n = entries.size();
  const uint64_t slot_mask = std::bit_ceil(n) - 1;
  for (;;) {
    if (proposal_rounds != nullptr) ++*proposal_rounds;
    const uint64_t slot = rng.next_word() & slot_mask;
    const uint64_t x = rng.next_word();
    if (slot < n && x < entries[slot].sig) return entries[slot].index;
  }
}

Sampler::Sampler(uint64_t capacity, PolicyParams params)
    : params_(params), levels_(kLevelCount), locator_(capacity) {
  params_.validate();
}

Sampler Sampler::from_weights(std::span<const double> weights, PolicyParams params) {
  Sampler s(weights.size(), params);
  for (size_t i = 0; i < weights.size(); ++i) {
    if (classify(weights[i]) == WeightClass::kInvalid)
      throw std::invalid_argument("ebus: invalid weight at index " + std::to_string(i));
    s.update(i, weights[i]);
  }
  return s;
}

void Sampler::update(uint64_t index, double weight) {
  const WeightClass cls = classify(weight);
  if (cls == WeightClass::kInvalid)
    throw std::invalid_argument("ebus: invalid weight at index " + std::to_string(index));
  if (index > locator_.size())
    throw std::out_of_range("ebus: index " + std::to_string(index) +
                            " beyond capacity " + std::to_string(locator_.size()));
  if (index == locator_.size()) locator_.emplace_back();

  if (locator_[index].level != kAbsent) delete_entry(index);
  if (cls == WeightClass::kPositive) insert_weight(index, decode(weight));

  assert(total_approx_ < kTwoPow64);
}

void Sampler::insert_weight(uint64_t index, DecodedWeight d) {
  if (live_count_ == 0) {
    // First nonzero weight: pick the shift directly, no repair needed.
    const int g = init_shift(params_, d.level);
    const ShiftEvent event{ShiftKind::kInit, shift_, g, 0};
    shift_ = g;
    if (shift_hook_) shift_hook_(event);
  } else {
    // An insertion may only overflow the touched bucket; check the
    // prospective sum before committing and lower the shift if needed.
    const uint128 prospective = level_ref(d.level).sum + d.sig;
    if (!bucket_approx(prospective, d.level, shift_)) {
      apply_shift(level_overflow_shift(params_, prospective, d.level),
                  ShiftKind::kLevelOverflow);
    }
  }

  LevelRecord& rec = level_ref(d.level);
  EBUS_CHECK(rec.entries.size() < std::numeric_limits<uint32_t>::max());
  locator_[index] = {static_cast<int32_t>(d.level),
                     static_cast<uint32_t>(rec.entries.size())};
  rec.entries.push_back({d.sig, index});
  const bool was_empty = rec.sum == 0;
  rec.sum += d.sig;

  const auto approx = bucket_approx(rec.sum, d.level, shift_);
  EBUS_CHECK(approx.has_value());
  total_approx_ += *approx - rec.approx;
  rec.approx = *approx;
  ++live_count_;

  if (was_empty) {
    const int off = level_index(d.level);
    occupancy_[static_cast<size_t>(off >> 6)] |= uint64_t(1) << (off & 63);
  }
  if (live_count_ == 1 || d.level > top_level_) top_level_ = d.level;

  // The committed total can exceed one word only transiently; each pass
  // divides it by 2^global_step, so a single pass suffices in practice.
  while (total_approx_ >= kTwoPow64)
    apply_shift(shift_ - params_.global_step, ShiftKind::kGlobalOverflow);
}

void Sampler::delete_entry(uint64_t index) {
  const int lvl = locator_[index].level;
  const uint64_t pos = locator_[index].pos;
  LevelRecord& rec = level_ref(lvl);

  const uint64_t sig = rec.entries[pos].sig;
  const LevelEntry last = rec.entries.back();
  rec.entries.pop_back();
  if (pos < rec.entries.size()) {
    rec.entries[pos] = last;
    locator_[last.index].pos = static_cast<uint32_t>(pos);
  }
  // Geometric shrink at quarter occupancy keeps total reserved capacity
  // within a constant factor of the live count.
  if (rec.entries.capacity() >= 16 && rec.entries.size() * 4 < rec.entries.capacity()) {
    std::vector<LevelEntry> tight;
    tight.reserve(rec.entries.size() * 2);
    tight.assign(rec.entries.begin(), rec.entries.end());
    rec.entries.swap(tight);
  }
  locator_[index] = {};

  rec.sum -= sig;
  uint64_t approx = 0;
  if (rec.sum != 0) {
    const auto a = bucket_approx(rec.sum, lvl, shift_);
    EBUS_CHECK(a.has_value());  // buckets only shrink on deletion
    approx = *a;
  }
  total_approx_ = total_approx_ - rec.approx + approx;
  rec.approx = approx;
  --live_count_;

  if (rec.sum == 0) {
    const int off = level_index(lvl);
    occupancy_[static_cast<size_t>(off >> 6)] &= ~(uint64_t(1) << (off & 63));
    if (live_count_ > 0 && lvl == top_level_) top_level_ = scan_highest_occupied();
  }
  // Deletions never raise the shift eagerly; a later sampling call restores
  // goodness lazily if the mass has shrunk too far.
}

void Sampler::apply_shift(int new_shift, ShiftKind kind) {
  const int old_shift = shift_;
  EBUS_CHECK(new_shift != old_shift);
  int touched = 0;
  if (live_count_ > 0) touched = repair_levels(old_shift, new_shift);
  shift_ = new_shift;
  if (new_shift < old_shift)
    ++stats_.shifts_down;
  else
    ++stats_.shifts_up;
  if (shift_hook_) shift_hook_({kind, old_shift, new_shift, touched});
}

int Sampler::repair_levels(int old_shift, int new_shift) {
  assert(live_count_ > 0);
  // Only levels at or above the unit-bucket threshold of the safer (larger)
  // shift can change, and that threshold sits within 2*64 levels of the top.
  const int window_low = std::max(top_level_ - 2 * PolicyParams::kWordBits + 1, kLevelMin);
  int touched = 0;

  if (new_shift < old_shift) {
    const int theta_old = unit_bucket_threshold(old_shift, live_count_);
    const int theta_new = unit_bucket_threshold(new_shift, live_count_);
    const unsigned down = static_cast<unsigned>(old_shift - new_shift);
    for (int lvl = top_level_; lvl >= window_low; --lvl) {
      if (lvl < theta_old) break;  // unit buckets at both shifts
      LevelRecord& rec = level_ref(lvl);
      if (rec.sum == 0) continue;
      const uint64_t approx =
          lvl >= theta_new ? rescale_bucket_down(rec.approx, down) : 1;
      total_approx_ = total_approx_ - rec.approx + approx;
      rec.approx = approx;
      ++touched;
    }
  } else {
    const int theta_new = unit_bucket_threshold(new_shift, live_count_);
    const int eta_new = upper_half_threshold(new_shift);
    for (int lvl = top_level_; lvl >= window_low; --lvl) {
      if (lvl < theta_new) break;  // still forced unit buckets
      LevelRecord& rec = level_ref(lvl);
      if (rec.sum == 0) continue;
      uint64_t approx;
      if (lvl >= eta_new) {
        const auto a = bucket_approx(rec.sum, lvl, new_shift);
        EBUS_CHECK(a.has_value());  // the policy only installs safe shifts
        approx = *a;
      } else {
        // Here level + new_shift + 64 < 0, so only the upper half of the
        // exact sum can reach the integer part.
        const auto high = static_cast<uint64_t>(rec.sum >> 64);
        const unsigned k = static_cast<unsigned>(-(lvl + new_shift + PolicyParams::kWordBits));
        approx = shift_right_saturating(high, k) + 1;
      }
      total_approx_ = total_approx_ - rec.approx + approx;
      rec.approx = approx;
      ++touched;
    }
  }
  return touched;
}

int Sampler::scan_highest_occupied() const {
  for (int wi = kOccupancyWords - 1; wi >= 0; --wi) {
    const uint64_t word = occupancy_[static_cast<size_t>(wi)];
    if (word != 0) return wi * 64 + 63 - std::countl_zero(word) + kLevelMin;
  }
  EBUS_CHECK(false);
  return 0;
}

std::optional<std::pair<int, uint64_t>> Sampler::locate(uint64_t index) const {
  if (index >= locator_.size() || locator_[index].level == kAbsent) return std::nullopt;
  return std::pair<int, uint64_t>{locator_[index].level, locator_[index].pos};
}

double Sampler::stored_weight(uint64_t index) const {
  const auto loc = locate(index);
  if (!loc) return 0.0;
  const LevelEntry& e = level(loc->first).entries[loc->second];
  return weight_from_decoded({loc->first, e.sig});
}

std::vector<int> Sampler::occupied_levels() const {
  std::vector<int> out;
  for (int wi = kOccupancyWords - 1; wi >= 0; --wi) {
    uint64_t word = occupancy_[static_cast<size_t>(wi)];
    while (word != 0) {
      const int bit = 63 - std::countl_zero(word);
      out.push_back(wi * 64 + bit + kLevelMin);
      word ^= uint64_t(1) << bit;
    }
  }
  return out;
}

std::pair<uint128, int> Sampler::coarse_estimate() const {
  EBUS_CHECK(live_count_ > 0);
  uint128 estimate = 0;
  for (int r = 0; r <= PolicyParams::kWordBits; ++r) {
    const int lvl = top_level_ - r;
    if (lvl < kLevelMin) break;
    const auto high = static_cast<uint64_t>(level(lvl).sum >> 64);
    if (r == 0)
      estimate += uint128(high) << 1;
    else
      estimate += high >> (r - 1);  // floor(high * 2^(1-r))
  }
  const int t = estimate <= 1 ? 0 : floor_log2(estimate);
  return {estimate, t};
}

bool Sampler::lazy_increase() {
  EBUS_CHECK(live_count_ > 0);
  if (total_approx_ >= (uint128(1) << params_.good_exponent)) return false;
  const auto [estimate, t] = coarse_estimate();
  (void)estimate;
  const int target =
      params_.strong_exponent + 1 - PolicyParams::kWordBits - t - top_level_;
  EBUS_CHECK(target > shift_);
  apply_shift(target, ShiftKind::kLazyIncrease);
  return true;
}

std::optional<int> Sampler::scan_levels_once(uint64_t x, RngSource& rng) {
  const int top_off = level_index(top_level_);
  int wi = top_off >> 6;
  uint64_t word = occupancy_[static_cast<size_t>(wi)];
  for (;;) {
    while (word != 0) {
      const int bit = 63 - std::countl_zero(word);
      word ^= uint64_t(1) << bit;
      const int lvl = wi * 64 + bit + kLevelMin;
      const LevelRecord& rec = levels_[static_cast<size_t>(wi * 64 + bit)];
      // Positions 0..approx-2 of the bucket are accepted outright; the last
      // position carries the truncated fractional mass and is resolved by
      // the refinement loop.
      if (x + 1 < rec.approx) return lvl;
      if (x + 1 == rec.approx) {
        ++stats_.refine_entries;
        if (refine_boundary(rec.sum, lvl, shift_, rng)) return lvl;
        return std::nullopt;
      }
      x -= rec.approx;
    }
    if (--wi < 0) break;
    word = occupancy_[static_cast<size_t>(wi)];
  }
  EBUS_CHECK(false);  // x < total_approx, so the scan always lands
  return std::nullopt;
}

int Sampler::sample_level(RngSource& rng) {
  const auto total = static_cast<uint64_t>(total_approx_);
  for (;;) {
    const uint64_t x = rng.uniform_below(total);
    if (const auto lvl = scan_levels_once(x, rng)) return *lvl;
    ++stats_.level_restarts;
  }
}

uint64_t Sampler::sample(RngSource& rng) {
  if (live_count_ == 0) throw std::logic_error("ebus: sample on an empty sampler");
  lazy_increase();
  const int lvl = sample_level(rng);
  ++stats_.samples;
  return sample_within(level(lvl).entries, rng, &stats_.intra_proposals);
}

}  // namespace ebus
