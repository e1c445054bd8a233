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

#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "ebus/audit.hpp"
#include "ebus/sampler.hpp"
#include "test_util.hpp"

using namespace ebus;

TEST_CASE("bucket_approx follows the floor-plus-one rule") {
  CHECK(bucket_approx(0, -63, 39) == uint64_t(0));
  CHECK(bucket_approx(uint128(1) << 63, -63, 39) == (uint64_t(1) << 39) + 1);
  CHECK(bucket_approx(3, -1, 0) == 2);  // floor(1.5) + 1
  CHECK_FALSE(bucket_approx(uint128(0xffffffffffffffffull), 0, 0).has_value());
  CHECK(bucket_approx(uint128(0xfffffffffffffffeull), 0, 0) == 0xffffffffffffffffull);
  // Far below the window the bucket collapses to the unit value.
  CHECK(bucket_approx(uint128(1) << 127, -1137, 39) == 1);
  // Positive net shifts are overflow-checked, not truncated.
  CHECK_FALSE(bucket_approx(uint128(1) << 63, 0, 1).has_value());
  CHECK(bucket_approx(3, 10, 0) == 3 * 1024 + 1);
}

TEST_CASE("empty construction") {
  const Sampler s0(0);
  CHECK(s0.capacity() == 0);
  CHECK(s0.live_count() == 0);
  CHECK(s0.total_approx() == 0);
  CHECK_FALSE(s0.top_level().has_value());

  const Sampler s10(10);
  CHECK(s10.capacity() == 10);
  CHECK(s10.live_count() == 0);
  for (uint64_t j = 0; j < 10; ++j) CHECK(s10.stored_weight(j) == 0.0);
  CHECK(audit_state(s10).ok);
}

TEST_CASE("from_weights single pass equals incremental updates") {
  const std::vector<double> ws = {1.0};
  const Sampler s = Sampler::from_weights(ws);
  CHECK(s.live_count() == 1);
  CHECK(s.top_level() == -63);
  CHECK(s.level(-63).sum == uint128(1) << 63);
  CHECK(s.shift() == 39);
  CHECK(s.level(-63).approx == (uint64_t(1) << 39) + 1);

  const std::vector<double> zeros = {0.0, 0.0};
  const Sampler sz = Sampler::from_weights(zeros);
  CHECK(sz.capacity() == 2);
  CHECK(sz.live_count() == 0);

  // Two unit weights: the exact sum needs the 65th bit.
  const std::vector<double> pair = {1.0, 1.0};
  const Sampler sp = Sampler::from_weights(pair);
  CHECK(sp.level(-63).sum == uint128(1) << 64);
  CHECK(audit_state(sp).ok);

  const std::vector<double> bad = {1.0, -2.0};
  CHECK_THROWS_WITH_AS(Sampler::from_weights(bad),
                       "ebus: invalid weight at index 1", std::invalid_argument);
}

TEST_CASE("update inserts, replaces, appends and deletes") {
  Sampler s(3);
  s.update(0, 1.0);
  CHECK(s.live_count() == 1);
  CHECK(s.locate(0).has_value());
  CHECK(s.stored_weight(0) == 1.0);

  s.update(0, 2.0);  // move to the next level
  CHECK(s.live_count() == 1);
  CHECK(s.level(-63).entries.empty());
  CHECK(s.level(-62).sum == uint128(1) << 63);
  CHECK(s.stored_weight(0) == 2.0);

  s.update(3, 0.25);  // index == capacity appends
  CHECK(s.capacity() == 4);
  CHECK(s.stored_weight(3) == 0.25);
  CHECK_THROWS_AS(s.update(6, 1.0), std::out_of_range);
  CHECK_THROWS_AS(s.update(1, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(s.update(1, std::numeric_limits<double>::infinity()),
                  std::invalid_argument);

  s.update(0, 0.0);
  s.update(3, 0.0);
  CHECK(s.live_count() == 0);
  CHECK_FALSE(s.top_level().has_value());
  CHECK(audit_state(s).ok);
}

TEST_CASE("swap-remove keeps the locator table sound") {
  Sampler s(3);
  s.update(0, 1.0);
  s.update(1, 1.25);
  s.update(2, 1.5);  // all in level -63, positions 0,1,2
  REQUIRE(s.level(-63).entries.size() == 3);

  s.update(1, 0.0);  // middle entry: index 2 swaps into position 1
  const auto loc = s.locate(2);
  REQUIRE(loc.has_value());
  CHECK(loc->first == -63);
  CHECK(loc->second == 1);
  CHECK(s.level(-63).entries[1].index == 2);
  CHECK_FALSE(s.locate(1).has_value());
  CHECK(audit_state(s).ok);

  // Two equal significands, delete one: the exact sum halves.
  Sampler t(2);
  t.update(0, 1.0);
  t.update(1, 1.0);
  CHECK(t.level(-63).sum == uint128(1) << 64);
  t.update(0, 0.0);
  CHECK(t.level(-63).sum == uint128(1) << 63);
  CHECK(t.live_count() == 1);
}

TEST_CASE("deleting the top level re-derives it from the bitmap") {
  Sampler s(3);
  s.update(0, 1.0);    // level -63
  s.update(1, 64.0);   // level -57
  s.update(2, 2e-300); // far below
  CHECK(s.top_level() == -57);
  s.update(1, 0.0);
  CHECK(s.top_level() == -63);
  s.update(0, 0.0);
  CHECK(s.top_level() == decode(2e-300).level);
  CHECK(audit_state(s).ok);
}

TEST_CASE("occupied_levels lists levels descending") {
  Sampler s(3);
  s.update(0, 1.0);
  s.update(1, 8.0);
  s.update(2, 0.125);
  const std::vector<int> levels = s.occupied_levels();
  REQUIRE(levels.size() == 3);
  CHECK(levels[0] == -60);
  CHECK(levels[1] == -63);
  CHECK(levels[2] == -66);
}

TEST_CASE("incremental state equals a from-scratch recomputation under fuzz") {
  for (uint64_t seed : {11ull, 12ull}) {
    std::mt19937_64 gen(seed);
    Sampler s(64);
    for (int op = 1; op <= 5000; ++op) {
      const uint64_t j = gen() % 64;
      if (s.live_count() > 0 && gen() % 4 == 0) {
        s.update(j, 0.0);
      } else {
        s.update(j, ebus_test::random_weight(gen, static_cast<int>(gen())));
      }
      if (op % 500 == 0) {
        const AuditResult audit = audit_state(s);
        INFO(audit.message);
        REQUIRE(audit.ok);
      }
    }
    const AuditResult audit = audit_state(s);
    INFO(audit.message);
    REQUIRE(audit.ok);
  }
}
