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

#include <cstdint>
#include <string>
#include <vector>

namespace ebus {

/// Weight-decay accuracy experiment: n items start at (2 + i/10000)^1000 and
/// each step divides every weight by its base, flattening the distribution.
/// Per step the empirical distribution of draws_per_step samples is compared
/// against the stored weights: Jensen-Shannon divergence against the
/// double-normalized weights, and a chi-square p-value against the exact
/// integer probabilities.
struct DecayConfig {
  uint64_t items = 100;
  uint64_t steps = 100;
  uint64_t draws_per_step = 100000;
  uint64_t seed = 1;
};

struct DecayRow {
  uint64_t step;
  double jsd;
  double chi2_p;
};

std::vector<DecayRow> run_decay(const DecayConfig& cfg);

enum class BenchScenario { kStatic, kFixed, kDecreasing, kIncreasing };

const char* scenario_name(BenchScenario s);
bool parse_scenario(const std::string& name, BenchScenario& out);

/// Latency benchmarks over half-Gaussian weights. One iteration is one
/// sample, plus one update for the dynamic scenarios: fixed re-weights a
/// random index, decreasing deletes until a tenth of the initial size
/// remains, increasing appends until ten times the initial size. Reported
/// value is the median per-iteration time over `repeats` timed repetitions
/// (warmup excluded); repeats == 0 picks 50 below one million elements and
/// 5 at or above.
struct BenchConfig {
  BenchScenario scenario = BenchScenario::kStatic;
  std::vector<uint64_t> sizes = {1000, 10000, 100000};
  int repeats = 0;  // 0 = per-size default
  uint64_t seed = 1;
};

struct BenchRow {
  std::string scenario;
  uint64_t size;
  double median_ns_per_iter;
};

std::vector<BenchRow> run_bench(const BenchConfig& cfg);

/// Self-check suites: decode round-trips, incremental-vs-scratch state
/// equivalence, shift-policy safety and goodness brackets under adversarial
/// updates, repair equivalence and its touched-level bound, refinement digit
/// streams against a wide-integer oracle, and statistical exactness.
struct SuiteResult {
  std::string name;
  uint64_t checks = 0;
  uint64_t failures = 0;
  std::string first_failure;
};

struct SelftestReport {
  std::vector<SuiteResult> suites;
  bool passed() const {
    for (const auto& s : suites)
      if (s.failures != 0) return false;
    return true;
  }
};

SelftestReport run_selftest(uint64_t seed);

}  // namespace ebus
