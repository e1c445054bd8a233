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

#include "ebus/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ebus/rng.hpp"
#include "ebus/sampler.hpp"
#include "ebus/stats.hpp"

namespace ebus {

namespace {

inline void do_not_optimize(uint64_t v) { asm volatile("" : : "r"(v)); }

double half_gaussian(std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  double w;
  do {
    w = std::fabs(normal(gen));
  } while (w == 0.0);
  return w;
}

using Clock = std::chrono::steady_clock;

double elapsed_ns(Clock::time_point begin, Clock::time_point end) {
  return std::chrono::duration<double, std::nano>(end - begin).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int default_repeats(uint64_t size) { return size < 1000000 ? 50 : 5; }

// One timed repetition; returns ns per iteration.
double run_scenario_once(BenchScenario scenario, uint64_t size, Sampler& s,
                         Mt19937Source& rng, std::mt19937_64& gen) {
  const auto begin = Clock::now();
  switch (scenario) {
    case BenchScenario::kStatic: {
      for (uint64_t i = 0; i < size; ++i) do_not_optimize(s.sample(rng));
      const auto end = Clock::now();
      return elapsed_ns(begin, end) / static_cast<double>(size);
    }
    case BenchScenario::kFixed: {
      std::uniform_int_distribution<uint64_t> pick(0, size - 1);
      for (uint64_t i = 0; i < size; ++i) {
        do_not_optimize(s.sample(rng));
        s.update(pick(gen), half_gaussian(gen));
      }
      const auto end = Clock::now();
      return elapsed_ns(begin, end) / static_cast<double>(size);
    }
    case BenchScenario::kDecreasing: {
      std::vector<uint64_t> alive(size);
      for (uint64_t i = 0; i < size; ++i) alive[i] = i;
      const uint64_t floor_size = size / 10;
      const auto inner_begin = Clock::now();
      uint64_t iters = 0;
      while (alive.size() > floor_size) {
        do_not_optimize(s.sample(rng));
        std::uniform_int_distribution<size_t> pick(0, alive.size() - 1);
        const size_t at = pick(gen);
        s.update(alive[at], 0.0);
        alive[at] = alive.back();
        alive.pop_back();
        ++iters;
      }
      const auto end = Clock::now();
      return elapsed_ns(inner_begin, end) / static_cast<double>(iters);
    }
    case BenchScenario::kIncreasing: {
      const uint64_t target = size * 10;
      uint64_t iters = 0;
      while (s.live_count() < target) {
        do_not_optimize(s.sample(rng));
        s.update(s.capacity(), half_gaussian(gen));
        ++iters;
      }
      const auto end = Clock::now();
      return elapsed_ns(begin, end) / static_cast<double>(iters);
    }
  }
  return 0.0;
}

Sampler build_half_gaussian_sampler(uint64_t size, std::mt19937_64& gen) {
  std::vector<double> weights(size);
  for (double& w : weights) w = half_gaussian(gen);
  return Sampler::from_weights(weights);
}

}  // namespace

const char* scenario_name(BenchScenario s) {
  switch (s) {
    case BenchScenario::kStatic: return "static";
    case BenchScenario::kFixed: return "fixed";
    case BenchScenario::kDecreasing: return "decreasing";
    case BenchScenario::kIncreasing: return "increasing";
  }
  return "?";
}

bool parse_scenario(const std::string& name, BenchScenario& out) {
  if (name == "static") out = BenchScenario::kStatic;
  else if (name == "fixed") out = BenchScenario::kFixed;
  else if (name == "decreasing") out = BenchScenario::kDecreasing;
  else if (name == "increasing") out = BenchScenario::kIncreasing;
  else return false;
  return true;
}

std::vector<DecayRow> run_decay(const DecayConfig& cfg) {
  if (cfg.items < 2) throw std::invalid_argument("ebus: decay needs at least 2 items");
  if (cfg.steps < 1 || cfg.draws_per_step < 1)
    throw std::invalid_argument("ebus: decay needs at least one step and one draw");

  const auto n = static_cast<size_t>(cfg.items);
  std::vector<double> bases(n);
  std::vector<double> weights(n);
  for (size_t i = 0; i < n; ++i) {
    bases[i] = 2.0 + static_cast<double>(i + 1) / 10000.0;
    weights[i] = std::pow(bases[i], 1000.0);
  }

  Sampler s = Sampler::from_weights(weights);
  Mt19937Source rng(cfg.seed);

  std::vector<DecayRow> rows;
  rows.reserve(cfg.steps);
  std::vector<uint64_t> counts(n);
  std::vector<double> empirical(n);
  std::vector<double> theory(n);

  for (uint64_t step = 1; step <= cfg.steps; ++step) {
    for (size_t i = 0; i < n; ++i) {
      weights[i] /= bases[i];
      s.update(i, weights[i]);
    }

    std::fill(counts.begin(), counts.end(), uint64_t(0));
    for (uint64_t d = 0; d < cfg.draws_per_step; ++d) ++counts[s.sample(rng)];

    double total = 0.0;
    for (double w : weights) total += w;
    for (size_t i = 0; i < n; ++i) {
      theory[i] = weights[i] / total;
      empirical[i] = static_cast<double>(counts[i]) /
                     static_cast<double>(cfg.draws_per_step);
    }

    const GofResult gof =
        chi_square_gof(counts, oracle_probabilities(weights).probabilities());
    rows.push_back({step, js_divergence(empirical, theory), gof.p_value});
  }
  return rows;
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  std::vector<BenchRow> rows;
  for (uint64_t size : cfg.sizes) {
    if (size < 10) throw std::invalid_argument("ebus: benchmark sizes must be at least 10");
    const int repeats = cfg.repeats > 0 ? cfg.repeats : default_repeats(size);
    std::mt19937_64 gen(cfg.seed ^ (size * 0x9e3779b97f4a7c15ull));
    Mt19937Source rng(cfg.seed + size);

    std::vector<double> per_rep;
    per_rep.reserve(static_cast<size_t>(repeats));
    const bool rebuild_each_rep = cfg.scenario == BenchScenario::kDecreasing ||
                                  cfg.scenario == BenchScenario::kIncreasing;

    Sampler shared(0);
    if (!rebuild_each_rep) shared = build_half_gaussian_sampler(size, gen);

    for (int rep = -1; rep < repeats; ++rep) {  // rep -1 is the warmup pass
      Sampler fresh(0);
      Sampler& s = rebuild_each_rep
                       ? (fresh = build_half_gaussian_sampler(size, gen), fresh)
                       : shared;
      const double ns = run_scenario_once(cfg.scenario, size, s, rng, gen);
      if (rep >= 0) per_rep.push_back(ns);
    }
    rows.push_back({scenario_name(cfg.scenario), size, median(per_rep)});
  }
  return rows;
}

}  // namespace ebus
