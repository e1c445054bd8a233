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
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ebus/float_decode.hpp"
#include "ebus/policy.hpp"
#include "ebus/rng.hpp"
#include "ebus/uint128.hpp"

namespace ebus {

/// One stored weight inside a level: its normalized significand and the
/// caller-visible element index.
struct LevelEntry {
  uint64_t sig;
  uint64_t index;
};

/// Per-level state. `sum` is the exact 128-bit sum of the entries'
/// significands; `approx` is the 64-bit bucket floor(sum * 2^(level+G)) + 1
/// used by the fast inter-level scan (0 when the level is empty).
struct LevelRecord {
  uint128 sum = 0;
  uint64_t approx = 0;
  std::vector<LevelEntry> entries;
};

/// Exact bucket value for a level: 0 when sum == 0, otherwise
/// floor(sum * 2^(level+shift)) + 1. Returns nullopt instead of a truncated
/// value when the result would not fit in 64 bits; the shift policy consumes
/// that signal.
std::optional<uint64_t> bucket_approx(uint128 sum, int level, int shift);

/// Lazy base-2^64 digit expansion of frac(sum * 2^pos0). The digit at
/// position pos is floor(sum * 2^pos) mod 2^64; positions advance by 64 per
/// digit, and once pos >= 0 the expansion has terminated.
struct RefinementCursor {
  uint128 sum;
  int pos;  // current digit position exponent; starts at level + shift

  uint64_t next_digit() {
    pos += 64;
    return digit_at(sum, pos);
  }
  bool at_final_digit() const { return pos >= 0; }

  static uint64_t digit_at(uint128 sum, int pos) {
    if (pos >= 0)
      return pos >= 128 ? 0 : static_cast<uint64_t>(sum << static_cast<unsigned>(pos));
    return static_cast<uint64_t>(shift_right_saturating(sum, static_cast<unsigned>(-pos)));
  }
};

/// Boundary refinement: accepts with probability exactly
/// frac(sum * 2^(level+shift)) by comparing the fractional expansion against
/// independent uniform digits, one word at a time. Returns true to accept the
/// level, false to restart the inter-level procedure.
bool refine_boundary(uint128 sum, int level, int shift, RngSource& rng);

/// Exact within-level sampling: returns the stored index of an entry chosen
/// with probability proportional to its normalized significand, by rejection
/// over a power-of-two proposal range. Expected proposal rounds is at most 4
/// because every significand lies in [2^63, 2^64). If `proposal_rounds` is
/// non-null it is incremented once per round.
uint64_t sample_within(std::span<const LevelEntry> entries, RngSource& rng,
                       uint64_t* proposal_rounds = nullptr);

/// Cheap counters for the rare paths; useful for verifying the slow-path
/// bounds experimentally.
struct SamplerStats {
  uint64_t samples = 0;
  uint64_t refine_entries = 0;   // boundary-refinement path entries
  uint64_t level_restarts = 0;   // full restarts of the inter-level procedure
  uint64_t intra_proposals = 0;  // proposal rounds in within-level sampling
  uint64_t shifts_down = 0;
  uint64_t shifts_up = 0;
};

/// Dynamic discrete sampler over IEEE binary64 weights, exact by
/// construction: sample() returns index j with probability exactly
/// w_j / sum(w) over the represented double values.
///
/// Weights live at dense indices 0..capacity-1; updating index == capacity
/// appends. A zero weight deletes the index, and negative, NaN or infinite
/// weights are rejected. Sampling is O(1) worst-case expected; an update is
/// O(1) amortized.
///
/// Single-writer: concurrent mutation, or sampling concurrent with mutation,
/// is not supported (sample() itself may adjust the shift). Whole samplers
/// may be moved freely between threads.
class Sampler {
 public:
  explicit Sampler(uint64_t capacity = 0, PolicyParams params = {});

  /// One-pass construction; equivalent to updating each index in turn.
  /// Throws std::invalid_argument naming the first offending index.
  static Sampler from_weights(std::span<const double> weights, PolicyParams params = {});

  /// Sets the weight of `index`, inserting, replacing or (for zero) deleting
  /// it. `index` may be at most capacity(); index == capacity() appends.
  void update(uint64_t index, double weight);

  /// Draws one index with probability exactly proportional to its weight.
  /// Throws std::logic_error when no weight is live.
  uint64_t sample(RngSource& rng);

  /// Draws `draws` indices whose multiset has exactly the law of `draws`
  /// independent sample() calls. Output is grouped by level (descending);
  /// shuffle if exchangeable order matters. Throws when no weight is live.
  std::vector<uint64_t> sample_many(uint64_t draws, RngSource& rng);

  uint64_t capacity() const { return locator_.size(); }
  uint64_t live_count() const { return live_count_; }
  int shift() const { return shift_; }
  uint128 total_approx() const { return total_approx_; }
  const PolicyParams& params() const { return params_; }

  /// Largest occupied level; nullopt when empty.
  std::optional<int> top_level() const {
    if (live_count_ == 0) return std::nullopt;
    return top_level_;
  }

  const LevelRecord& level(int lvl) const {
    return levels_[static_cast<size_t>(level_index(lvl))];
  }

  /// (level, position) of a live index, or nullopt.
  std::optional<std::pair<int, uint64_t>> locate(uint64_t index) const;

  /// The stored weight of an index (exact reconstruction), 0 when absent.
  double stored_weight(uint64_t index) const;

  /// Occupied levels in descending order.
  std::vector<int> occupied_levels() const;

  std::span<const uint64_t> occupancy_words() const { return occupancy_; }

  /// Coarse integer estimate (E, t) of the mass of the top levels, used to
  /// pick the lazy-increase shift: t = floor(log2(max(E, 1))).
  std::pair<uint128, int> coarse_estimate() const;

  /// Restores a strongly good shift if the total approximate mass has fallen
  /// below 2^good_exponent. Called internally before sampling; exposed for
  /// verification. Returns true if the shift changed. Requires live_count > 0.
  bool lazy_increase();

  SamplerStats& stats() { return stats_; }
  const SamplerStats& stats() const { return stats_; }

  /// Observer invoked after every committed shift change, once the affected
  /// level summaries have been repaired. The state is fully consistent when
  /// the hook runs.
  void set_shift_hook(std::function<void(const ShiftEvent&)> hook) {
    shift_hook_ = std::move(hook);
  }

 private:
  static constexpr int kOccupancyWords = (kLevelCount + 63) / 64;
  static constexpr int32_t kAbsent = INT32_MIN;

  struct LocatorSlot {
    int32_t level = kAbsent;
    uint32_t pos = 0;
  };

  LevelRecord& level_ref(int lvl) { return levels_[static_cast<size_t>(level_index(lvl))]; }

  void insert_weight(uint64_t index, DecodedWeight d);
  void delete_entry(uint64_t index);
  void apply_shift(int new_shift, ShiftKind kind);
  int repair_levels(int old_shift, int new_shift);
  int scan_highest_occupied() const;
  std::optional<int> scan_levels_once(uint64_t x, RngSource& rng);
  int sample_level(RngSource& rng);

  PolicyParams params_;
  std::vector<LevelRecord> levels_;
  std::vector<LocatorSlot> locator_;
  std::array<uint64_t, kOccupancyWords> occupancy_{};
  uint128 total_approx_ = 0;  // wider than a word so overflow is observable
  uint64_t live_count_ = 0;
  int top_level_ = 0;  // meaningful only when live_count_ > 0
  int shift_ = 0;
  SamplerStats stats_;
  std::function<void(const ShiftEvent&)> shift_hook_;
};

}  // namespace ebus
