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

// End-to-end verification suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any hard criterion fails. The performance
// trend check is informational: it is reported but does not gate the exit
// code, since absolute timings depend on the host.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
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

namespace {

using namespace ebus;
using Clock = std::chrono::steady_clock;

struct Criterion {
  std::string name;
  bool pass = true;
  bool informational = false;
  std::string detail = "";
  double seconds = 0.0;
};

std::vector<Criterion> g_results;

void report(Criterion c, Clock::time_point begin) {
  c.seconds = std::chrono::duration<double>(Clock::now() - begin).count();
  std::printf("[%zu/9] %-28s %s%s (%s; %.1fs)\n", g_results.size() + 1,
              c.name.c_str(), c.pass ? "PASS" : "FAIL",
              c.informational ? " (informational)" : "", c.detail.c_str(),
              c.seconds);
  std::fflush(stdout);
  g_results.push_back(std::move(c));
}

double positive_weight(std::mt19937_64& gen, int regime) {
  std::uniform_real_distribution<double> mantissa(1.0, 2.0);
  for (;;) {
    double w = 0.0;
    switch (regime & 3) {
      case 0:  // clustered within a few octaves
        w = std::ldexp(mantissa(gen), static_cast<int>(gen() % 8));
        break;
      case 1:  // moderate spread
        w = std::ldexp(mantissa(gen), static_cast<int>(gen() % 64) - 32);
        break;
      case 2:  // full double range, 1e-308 .. 1e308 territory
        w = std::ldexp(mantissa(gen), static_cast<int>(gen() % 2040) - 1064);
        break;
      case 3:  // subnormal-heavy
        w = std::ldexp(mantissa(gen), -1022 - static_cast<int>(gen() % 53));
        break;
    }
    if (classify(w) == WeightClass::kPositive) return w;
  }
}

// Criterion 1: chi-square of one million draws against the exact oracle over
// fifty seeded weight sets spanning the full double range.
void criterion_exactness() {
  const auto begin = Clock::now();
  Criterion c{"exactness-vs-oracle"};
  int passing = 0;
  for (uint64_t set = 1; set <= 50; ++set) {
    std::mt19937_64 gen(1000 + set);
    const size_t n = 2 + gen() % 63;
    std::vector<double> weights(n);
    for (double& w : weights) w = positive_weight(gen, static_cast<int>(set % 4));

    Sampler s = Sampler::from_weights(weights);
    Mt19937Source rng(77000 + set);
    std::vector<uint64_t> counts(n, 0);
    for (int draw = 0; draw < 1000000; ++draw) ++counts[s.sample(rng)];

    const GofResult gof =
        chi_square_gof(counts, oracle_probabilities(weights).probabilities());
    if (gof.p_value > 1e-4) ++passing;
  }
  c.pass = passing >= 48;
  c.detail = std::to_string(passing) + "/50 sets with p > 1e-4";
  const double seconds = std::chrono::duration<double>(Clock::now() - begin).count();
  if (seconds > 120.0) {
    c.pass = false;
    c.detail += "; exceeded 2 min budget";
  }
  report(std::move(c), begin);
}

// Criterion 2: the decay experiment completes all steps with a flat
// Jensen-Shannon divergence at the noise floor.
void criterion_decay() {
  const auto begin = Clock::now();
  Criterion c{"decay-flat-divergence"};
  DecayConfig cfg;  // defaults: 100 items, 100 steps, 1e5 draws per step
  cfg.seed = 2;
  const std::vector<DecayRow> rows = run_decay(cfg);

  const bool completed = rows.size() == cfg.steps;
  double max_jsd = 0.0;
  for (const DecayRow& r : rows) max_jsd = std::max(max_jsd, r.jsd);

  // Least-squares slope of jsd against step, with its standard error.
  const double n = static_cast<double>(rows.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const DecayRow& r : rows) {
    mean_x += static_cast<double>(r.step);
    mean_y += r.jsd;
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const DecayRow& r : rows) {
    const double dx = static_cast<double>(r.step) - mean_x;
    sxx += dx * dx;
    sxy += dx * (r.jsd - mean_y);
  }
  const double slope = sxy / sxx;
  double ss_resid = 0.0;
  for (const DecayRow& r : rows) {
    const double fit = mean_y + slope * (static_cast<double>(r.step) - mean_x);
    ss_resid += (r.jsd - fit) * (r.jsd - fit);
  }
  const double slope_se = std::sqrt(ss_resid / (n - 2.0) / sxx);

  const bool slope_flat = std::fabs(slope) <= 3.0 * slope_se;
  const bool noise_floor = max_jsd < 3e-3;
  c.pass = completed && slope_flat && noise_floor;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "steps=%zu/100, slope=%.2e (se %.2e), max jsd=%.2e",
                rows.size(), slope, slope_se, max_jsd);
  c.detail = buf;
  const double seconds = std::chrono::duration<double>(Clock::now() - begin).count();
  if (seconds > 60.0) {
    c.pass = false;
    c.detail += "; exceeded 1 min budget";
  }
  report(std::move(c), begin);
}

// Criterion 3: incremental state equals a from-scratch recomputation after
// 1e5 mixed updates, for ten seeds.
void criterion_incremental_equivalence() {
  const auto begin = Clock::now();
  Criterion c{"incremental-vs-scratch"};
  for (uint64_t seed = 1; seed <= 10 && c.pass; ++seed) {
    std::mt19937_64 gen(31337 + seed);
    Sampler s(512);
    for (int op = 1; op <= 100000; ++op) {
      const uint64_t j = gen() % 512;
      if (s.live_count() > 0 && gen() % 3 == 0) {
        s.update(j, 0.0);
      } else {
        s.update(j, positive_weight(gen, static_cast<int>(gen())));
      }
      if (op % 20000 == 0 || op == 100000) {
        const AuditResult audit = audit_state(s);
        if (!audit.ok) {
          c.pass = false;
          c.detail = "seed " + std::to_string(seed) + ": " + audit.message;
          break;
        }
      }
    }
  }
  if (c.pass) c.detail = "10 seeds, 1e5 updates each, audits exact";
  const double seconds = std::chrono::duration<double>(Clock::now() - begin).count();
  if (seconds > 30.0) {
    c.pass = false;
    c.detail += "; exceeded 30 s budget";
  }
  report(std::move(c), begin);
}

// Criteria 4 and 5 share one adversarial fuzz: safety and goodness brackets
// for every shift event, plus repair equivalence and the touched-level bound.
void criterion_shift_brackets_and_repair() {
  const auto begin4 = Clock::now();
  Criterion c4{"shift-policy-brackets"};
  Criterion c5{"repair-bound-and-equality"};

  std::mt19937_64 gen(424242);
  Mt19937Source rng(515151);
  Sampler s(128);
  const uint128 good = uint128(1) << s.params().good_exponent;
  const uint128 strong_lo = uint128(1) << s.params().strong_exponent;
  const uint128 strong_hi = uint128(64 + 10) << s.params().strong_exponent;

  uint64_t shift_events = 0;
  uint64_t lazy_events = 0;
  uint64_t eager_events = 0;
  int max_touched = 0;
  bool eager_seen_this_op = false;

  s.set_shift_hook([&](const ShiftEvent& ev) {
    ++shift_events;
    max_touched = std::max(max_touched, ev.levels_touched);
    if (ev.levels_touched > 128 && c5.pass) {
      c5.pass = false;
      c5.detail = "repair touched " + std::to_string(ev.levels_touched) + " levels";
    }
    // Repaired summaries must equal a recomputation from the exact sums.
    for (int lvl = kLevelMin; lvl <= kLevelMax && c5.pass; ++lvl) {
      const LevelRecord& rec = s.level(lvl);
      const auto expect = bucket_approx(rec.sum, lvl, ev.new_shift);
      if (!expect || *expect != rec.approx) {
        c5.pass = false;
        c5.detail = "bucket mismatch at level " + std::to_string(lvl) +
                    " after shift to " + std::to_string(ev.new_shift);
      }
    }
    switch (ev.kind) {
      case ShiftKind::kLazyIncrease:
        ++lazy_events;
        if ((s.total_approx() < strong_lo || s.total_approx() >= strong_hi) &&
            c4.pass) {
          c4.pass = false;
          c4.detail = "lazy increase outside [2^46, 74*2^46)";
        }
        break;
      case ShiftKind::kLevelOverflow:
      case ShiftKind::kGlobalOverflow:
        eager_seen_this_op = true;
        ++eager_events;
        break;
      case ShiftKind::kInit:
        break;
    }
  });

  // Index 127 is a spike slot: a huge weight far above everything else
  // forces an eager decrease on insertion, and deleting it collapses the
  // mass so the next draw forces a lazy increase. The remaining indices
  // churn over the whole double range.
  for (int op = 0; op < 1000000 && c4.pass && c5.pass; ++op) {
    eager_seen_this_op = false;
    if (op % 20 == 10) {
      s.update(127, std::ldexp(1.5, 1000 + op / 10 % 23));
    } else if (op % 20 == 19) {
      s.update(127, 0.0);
    } else {
      const uint64_t j = gen() % 127;
      const int action = static_cast<int>(gen() % 8);
      if (action == 0 && s.live_count() > 0) {
        s.update(j, 0.0);
      } else if (action == 1) {
        s.update(j, 1e300 * std::ldexp(1.0, -static_cast<int>(gen() % 32)));
      } else if (action == 2) {
        s.update(j, 1e-300 * std::ldexp(1.0, static_cast<int>(gen() % 32)));
      } else {
        s.update(j, positive_weight(gen, static_cast<int>(gen())));
      }
    }
    if (s.total_approx() >= kTwoPow64) {
      c4.pass = false;
      c4.detail = "total approximate mass overflowed after an update";
      break;
    }
    if (eager_seen_this_op && s.total_approx() < good) {
      c4.pass = false;
      c4.detail = "eager decrease finished below 2^32";
      break;
    }
    if (s.live_count() > 0 && (op % 20 == 0 || gen() % 32 == 0)) s.sample(rng);
  }
  if (c4.pass && (lazy_events < 1000 || eager_events < 1000)) {
    c4.pass = false;
    c4.detail = "fuzz exercised too few shift events (" +
                std::to_string(lazy_events) + " lazy, " +
                std::to_string(eager_events) + " eager)";
  }

  if (c4.pass)
    c4.detail = "1e6 adversarial ops, " + std::to_string(lazy_events) +
                " lazy raises, " + std::to_string(eager_events) +
                " eager decreases, all brackets exact";
  const double seconds = std::chrono::duration<double>(Clock::now() - begin4).count();
  if (seconds > 60.0) {
    c4.pass = false;
    c4.detail += "; exceeded 1 min budget";
  }
  report(std::move(c4), begin4);

  if (c5.pass) {
    if (shift_events < 100) {
      c5.pass = false;
      c5.detail = "fuzz produced only " + std::to_string(shift_events) + " shifts";
    } else {
      c5.detail = std::to_string(shift_events) +
                  " shift changes, max touched=" + std::to_string(max_touched) +
                  " (bound 128), all equal full recompute";
    }
  }
  report(std::move(c5), begin4);
}

// Criterion 6: refinement-path entries over ten million draws at a barely
// good shift stay within 10x the expected count.
void criterion_slow_path_rarity() {
  const auto begin = Clock::now();
  Criterion c{"slow-path-rarity"};

  // 1000 half-Gaussian weights plus a heavy sentinel that pins the shift;
  // deleting the sentinel leaves the mass just above 2^32 (good, not
  // strongly good), the regime the 2^-20 bound speaks about.
  std::mt19937_64 gen(616161);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> weights(1000);
  double total = 0.0;
  for (double& w : weights) {
    do {
      w = std::fabs(normal(gen));
    } while (w == 0.0);
    total += w;
  }
  Sampler s(1001);
  s.update(1000, 100.0 * total);  // sentinel fixes the initial shift
  for (uint64_t j = 0; j < 1000; ++j) s.update(j, weights[j]);
  s.update(1000, 0.0);

  const uint128 mass = s.total_approx();
  const bool good_not_strong =
      mass >= (uint128(1) << 32) && mass < (uint128(1) << 40);

  s.stats() = SamplerStats{};
  Mt19937Source rng(626262);
  for (int i = 0; i < 10000000; ++i) s.sample(rng);

  const uint64_t refines = s.stats().refine_entries;
  c.pass = good_not_strong && refines <= 100;
  c.detail = "refinement entries=" + std::to_string(refines) +
             " over 1e7 draws (bound 100)" +
             (good_not_strong ? "" : "; shift regime not as expected");
  // Mean restarts per call < 1e-5 at a good shift (restarts only follow
  // refinement entries).
  if (s.stats().level_restarts > 100) {
    c.pass = false;
    c.detail += "; restarts=" + std::to_string(s.stats().level_restarts);
  }
  report(std::move(c), begin);
}

// Criterion 7: worst-case intra-level geometry (2^k + 1 equal significands)
// keeps the mean proposal count within sampling slack of the bound 4.
void criterion_intra_proposals() {
  const auto begin = Clock::now();
  Criterion c{"intra-level-proposals"};
  const std::vector<double> weights(1025, 1.0);  // one level, B = 2048
  Sampler s = Sampler::from_weights(weights);
  Mt19937Source rng(737373);
  s.stats() = SamplerStats{};
  const uint64_t draws = 1000000;
  for (uint64_t i = 0; i < draws; ++i) s.sample(rng);
  const double mean = static_cast<double>(s.stats().intra_proposals) /
                      static_cast<double>(draws);
  c.pass = mean <= 4.05;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "mean proposals=%.4f (expected 3.996, bound 4.05)",
                mean);
  c.detail = buf;
  report(std::move(c), begin);
}

// Criterion 8: bulk sampling on the exact (1/4, 1/4, 1/2) fixture.
void criterion_bulk() {
  const auto begin = Clock::now();
  Criterion c{"bulk-equivalence"};
  const std::vector<double> weights = {1.0, 1.0, 2.0};
  Sampler s = Sampler::from_weights(weights);
  Mt19937Source rng(848484);

  const uint64_t draws = 1000000;
  const std::vector<uint64_t> batch = s.sample_many(draws, rng);

  std::vector<uint64_t> counts(3, 0);
  for (uint64_t j : batch) ++counts[j];
  const std::vector<double> probs = {0.25, 0.25, 0.5};
  const GofResult gof = chi_square_gof(counts, probs);

  bool widths_ok = true;
  const auto scaled = scaled_level_weights(s);
  WideUint suffix;
  for (auto it = scaled.rbegin(); it != scaled.rend(); ++it) {
    widths_ok = widths_ok && it->weight.bit_length() < 2226;
    suffix += it->weight;
    widths_ok = widths_ok && suffix.bit_length() < 2226;
  }

  c.pass = batch.size() == draws && gof.p_value > 1e-4 && widths_ok;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "m=%zu, chi2 p=%.4f, widths<2226: %s",
                batch.size(), gof.p_value, widths_ok ? "yes" : "no");
  c.detail = buf;
  report(std::move(c), begin);
}

// Criterion 9 (informational): static-scenario medians at n=1e3 and n=1e6
// within one order of magnitude.
void criterion_performance_trend() {
  const auto begin = Clock::now();
  Criterion c{"performance-trend"};
  c.informational = true;
  BenchConfig cfg;
  cfg.scenario = BenchScenario::kStatic;
  cfg.sizes = {1000, 10000, 100000, 1000000};
  cfg.repeats = 5;
  cfg.seed = 9;
  const std::vector<BenchRow> rows = run_bench(cfg);
  std::printf("    scenario,size,median_ns_per_iter\n");
  for (const BenchRow& r : rows)
    std::printf("    %s,%llu,%.1f\n", r.scenario.c_str(),
                static_cast<unsigned long long>(r.size), r.median_ns_per_iter);
  const double ratio = rows.back().median_ns_per_iter / rows.front().median_ns_per_iter;
  c.pass = ratio <= 10.0;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "1e6/1e3 median ratio=%.2f (bound 10)", ratio);
  c.detail = buf;
  report(std::move(c), begin);
}

}  // namespace

int main() {
  std::printf("EBUS acceptance suite\n");
  criterion_exactness();
  criterion_decay();
  criterion_incremental_equivalence();
  criterion_shift_brackets_and_repair();
  criterion_slow_path_rarity();
  criterion_intra_proposals();
  criterion_bulk();
  criterion_performance_trend();

  int hard_failures = 0;
  for (const Criterion& c : g_results)
    if (!c.pass && !c.informational) ++hard_failures;
  const int hard_total =
      static_cast<int>(g_results.size()) -
      static_cast<int>(std::count_if(g_results.begin(), g_results.end(),
                                     [](const Criterion& c) { return c.informational; }));
  std::printf("RESULT: %d/%d hard criteria passed%s\n", hard_total - hard_failures,
              hard_total, hard_failures == 0 ? "" : " -- FAILURES PRESENT");
  return hard_failures == 0 ? 0 : 1;
}
