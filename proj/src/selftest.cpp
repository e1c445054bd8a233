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

#include <bit>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ebus/audit.hpp"
#include "ebus/bulk.hpp"
#include "ebus/harness.hpp"
#include "ebus/rng.hpp"
#include "ebus/sampler.hpp"
#include "ebus/stats.hpp"
#include "ebus/wide_uint.hpp"

namespace ebus {

namespace {

class Suite {
 public:
  explicit Suite(std::string name) { result_.name = std::move(name); }

  void check(bool ok, const std::string& what) {
    ++result_.checks;
    if (!ok) {
      ++result_.failures;
      if (result_.first_failure.empty()) result_.first_failure = what;
    }
  }

  SuiteResult take() { return std::move(result_); }

 private:
  SuiteResult result_;
};

// Positive finite weight with magnitude regime picked by `kind`:
// 0 moderate, 1 wild full-range, 2 subnormal-heavy, 3 exact powers of two.
double random_weight(std::mt19937_64& gen, int kind) {
  std::uniform_real_distribution<double> mantissa(1.0, 2.0);
  for (;;) {
    double w = 0.0;
    switch (kind & 3) {
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
    if (classify(w) == WeightClass::kPositive) return w;
  }
}

SuiteResult decode_roundtrip_suite(uint64_t seed) {
  Suite suite("float-decode-roundtrip");
  std::mt19937_64 gen(seed);

  auto verify = [&](double w) {
    const DecodedWeight d = decode(w);
    suite.check((d.sig >> 63) == 1, "significand top bit clear");
    suite.check(d.level >= kLevelMin && d.level <= kLevelMax, "level out of domain");
    // Independent route: read the raw fields, express w = m * 2^e directly.
    const uint64_t bits = std::bit_cast<uint64_t>(w);
    const uint64_t frac = bits & ((uint64_t(1) << 52) - 1);
    const int biased = static_cast<int>(bits >> 52);
    const uint64_t m = biased == 0 ? frac : (uint64_t(1) << 52) | frac;
    const int e = biased == 0 ? -1074 : biased - 1075;
    WideUint via_decode(d.sig);
    via_decode <<= static_cast<unsigned>(d.level - kLevelMin);
    WideUint via_bits(m);
    via_bits <<= static_cast<unsigned>(e - kLevelMin);
    suite.check(via_decode == via_bits, "reconstruction differs from raw bits");
  };

  for (double w : {5e-324, 0x1.fffffffffffffp-1023, 0x1p-1022, 1.0, 1.5, 0.5,
                   0x1.fffffffffffffp+1023})
    verify(w);
  for (int i = 0; i < 200000; ++i) {
    const double w = std::bit_cast<double>(gen());
    if (classify(w) == WeightClass::kPositive) verify(w);
  }
  return suite.take();
}

SuiteResult store_equivalence_suite(uint64_t seed) {
  Suite suite("store-oracle-equivalence");
  for (uint64_t run = 0; run < 3; ++run) {
    std::mt19937_64 gen(seed + run * 7919);
    Sampler s(128);
    for (int op = 1; op <= 30000; ++op) {
      const uint64_t index = gen() % 128;
      const bool erase = s.live_count() > 0 && gen() % 4 == 0;
      s.update(index, erase ? 0.0 : random_weight(gen, static_cast<int>(gen())));
      if (op % 3000 == 0) {
        const AuditResult audit = audit_state(s);
        suite.check(audit.ok, audit.message);
      }
    }
    const AuditResult audit = audit_state(s);
    suite.check(audit.ok, audit.message);
  }
  return suite.take();
}

SuiteResult safety_bracket_suite(uint64_t seed) {
  Suite suite("shift-safety-brackets");
  std::mt19937_64 gen(seed ^ 0xdeadbeef);
  Mt19937Source rng(seed + 17);

  // Default parameters: adversarial magnitude mix, one million updates.
  {
    Sampler s(64);
    const uint128 good = uint128(1) << s.params().good_exponent;
    const uint128 strong_lo = uint128(1) << s.params().strong_exponent;
    const uint128 strong_hi = uint128(64 + 10) << s.params().strong_exponent;
    bool eager_down = false;
    bool lazy_ok = true;
    s.set_shift_hook([&](const ShiftEvent& ev) {
      if (ev.kind == ShiftKind::kLevelOverflow || ev.kind == ShiftKind::kGlobalOverflow)
        eager_down = true;
      if (ev.kind == ShiftKind::kLazyIncrease)
        lazy_ok = lazy_ok && s.total_approx() >= strong_lo && s.total_approx() < strong_hi;
    });
    for (int op = 0; op < 1000000; ++op) {
      eager_down = false;
      const uint64_t index = gen() % 64;
      if (s.live_count() > 0 && gen() % 3 == 0) {
        s.update(index, 0.0);
      } else {
        s.update(index, random_weight(gen, static_cast<int>(gen())));
      }
      if (s.total_approx() >= kTwoPow64) {
        suite.check(false, "total mass overflowed a word");
        break;
      }
      if (eager_down && s.total_approx() < good) {
        suite.check(false, "eager decrease left a non-good shift");
        break;
      }
      if (s.live_count() > 0 && gen() % 64 == 0) s.sample(rng);
    }
    suite.check(lazy_ok, "lazy increase missed the strongly-good bracket");
    suite.check(true, "fuzz completed");
  }

  // Tiny good_exponent forces frequent lazy increases.
  {
    PolicyParams tight;
    tight.good_exponent = 12;
    tight.init_exponent = 13;
    tight.strong_exponent = 13;
    tight.overflow_exponent = 28;
    Sampler s(8, tight);
    const uint128 lo = uint128(1) << tight.strong_exponent;
    const uint128 hi = uint128(64 + 10) << tight.strong_exponent;
    uint64_t raises = 0;
    bool ok = true;
    s.set_shift_hook([&](const ShiftEvent& ev) {
      if (ev.kind != ShiftKind::kLazyIncrease) return;
      ++raises;
      ok = ok && s.total_approx() >= lo && s.total_approx() < hi;
    });
    for (int round = 0; round < 20000; ++round) {
      s.update(0, random_weight(gen, 0));
      // A transient huge weight forces an eager decrease; deleting it
      // shrinks the mass by ~2^400, so the next draw must re-raise.
      s.update(1, std::ldexp(1.0, 400));
      s.update(1, 0.0);
      s.sample(rng);
    }
    suite.check(ok, "forced lazy increase left the bracket");
    suite.check(raises == 20000, "a round skipped its lazy increase");
  }
  return suite.take();
}

SuiteResult repair_equivalence_suite(uint64_t seed) {
  Suite suite("repair-equivalence");
  std::mt19937_64 gen(seed * 31 + 5);
  Mt19937Source rng(seed + 23);
  Sampler s(32);
  uint64_t events = 0;
  bool all_ok = true;
  std::string first;
  s.set_shift_hook([&](const ShiftEvent& ev) {
    ++events;
    if (ev.levels_touched > 2 * 64) {
      all_ok = false;
      if (first.empty()) first = "repair touched more than 2b levels";
    }
    for (int lvl = kLevelMin; lvl <= kLevelMax; ++lvl) {
      const LevelRecord& rec = s.level(lvl);
      const auto expect = bucket_approx(rec.sum, lvl, ev.new_shift);
      if (!expect || *expect != rec.approx) {
        all_ok = false;
        if (first.empty())
          first = "repaired bucket differs from recompute at level " + std::to_string(lvl);
        break;
      }
    }
  });
  for (int op = 0; op < 20000; ++op) {
    const uint64_t index = gen() % 32;
    switch (gen() % 4) {
      case 0: s.update(index, random_weight(gen, 1)); break;
      case 1: s.update(index, random_weight(gen, 2)); break;
      case 2: s.update(index, random_weight(gen, 0)); break;
      case 3: if (s.live_count() > 0) s.update(index, 0.0); break;
    }
    if (s.live_count() > 0 && gen() % 8 == 0) s.sample(rng);
  }
  suite.check(all_ok, first);
  suite.check(events > 200, "fuzz produced too few shift changes");
  return suite.take();
}

SuiteResult refinement_digit_suite(uint64_t seed) {
  Suite suite("refinement-digits");
  std::mt19937_64 gen(seed + 101);
  for (int trial = 0; trial < 10000; ++trial) {
    uint128 sum = (uint128(gen()) << 64) | gen();
    if (trial % 3 == 0) sum = uint64_t(gen());  // one-word sums too
    if (sum == 0) sum = 1;
    const int pos0 = -static_cast<int>(gen() % 300) - 1;
    const unsigned frac_bits = static_cast<unsigned>(-pos0);

    // Oracle: long division of the fractional remainder, one word at a time.
    WideUint rem = WideUint::from_u128(
        frac_bits >= 128 ? sum : sum & ((uint128(1) << frac_bits) - 1));
    RefinementCursor cursor{sum, pos0};
    const int digits = static_cast<int>((frac_bits + 63) / 64);
    bool ok = true;
    for (int m = 1; m <= digits; ++m) {
      rem <<= 64;
      const WideUint quotient = rem >> frac_bits;
      ok = ok && quotient.bit_length() <= 64;
      WideUint back = quotient;
      back <<= frac_bits;
      rem -= back;
      const uint64_t got = cursor.next_digit();
      ok = ok && got == quotient.low_word();
      ok = ok && cursor.at_final_digit() == (m == digits);
    }
    ok = ok && rem.is_zero();  // the expansion terminates exactly
    suite.check(ok, "digit stream differs from wide-integer expansion");
  }
  return suite.take();
}

SuiteResult statistical_suite(uint64_t seed) {
  Suite suite("statistical-exactness");
  int passing = 0;
  const int sets = 6;
  for (int set = 0; set < sets; ++set) {
    std::mt19937_64 gen(seed + static_cast<uint64_t>(set) * 1013);
    const size_t n = 2 + gen() % 63;
    std::vector<double> weights(n);
    for (double& w : weights) w = random_weight(gen, set % 2 == 0 ? 0 : set);

    Sampler s = Sampler::from_weights(weights);
    Mt19937Source rng(seed * 997 + static_cast<uint64_t>(set));
    std::vector<uint64_t> counts(n, 0);
    for (int d = 0; d < 200000; ++d) ++counts[s.sample(rng)];

    const GofResult gof =
        chi_square_gof(counts, oracle_probabilities(weights).probabilities());
    if (gof.p_value > 1e-4) ++passing;
  }
  suite.check(passing >= sets - 1, "chi-square rejected more than one weight set");

  // Bulk path agrees with the exact per-index law.
  {
    const std::vector<double> weights = {1.0, 1.0, 2.0};
    Sampler s = Sampler::from_weights(weights);
    Mt19937Source rng(seed + 4242);
    std::vector<uint64_t> counts(3, 0);
    for (uint64_t j : s.sample_many(200000, rng)) ++counts[j];
    const std::vector<double> probs = {0.25, 0.25, 0.5};
    const GofResult gof = chi_square_gof(counts, probs);
    suite.check(gof.p_value > 1e-4, "bulk counts rejected against exact law");
    suite.check(counts[0] + counts[1] + counts[2] == 200000, "bulk draw count mismatch");
  }
  return suite.take();
}

}  // namespace

SelftestReport run_selftest(uint64_t seed) {
  SelftestReport report;
  report.suites.push_back(decode_roundtrip_suite(seed));
  report.suites.push_back(store_equivalence_suite(seed));
  report.suites.push_back(safety_bracket_suite(seed));
  report.suites.push_back(repair_equivalence_suite(seed));
  report.suites.push_back(refinement_digit_suite(seed));
  report.suites.push_back(statistical_suite(seed));
  return report;
}

}  // namespace ebus
