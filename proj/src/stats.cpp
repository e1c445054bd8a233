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

#include "ebus/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ebus/check.hpp"
#include "ebus/float_decode.hpp"

namespace ebus {

namespace {

// Regularized lower incomplete gamma P(a, x) by its power series; valid and
// fast for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < 1000; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by modified Lentz continued
// fraction; valid and fast for x >= a + 1.
double gamma_q_cf(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double regularized_gamma_q(double a, double x) {
  EBUS_CHECK(a > 0.0 && x >= 0.0);
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

}  // namespace

double chi_square_p_value(double statistic, double dof) {
  if (dof <= 0.0) return statistic <= 0.0 ? 1.0 : 0.0;
  if (statistic <= 0.0) return 1.0;
  return regularized_gamma_q(dof / 2.0, statistic / 2.0);
}

GofResult chi_square_gof(std::span<const uint64_t> counts,
                         std::span<const double> probs, double min_expected) {
  if (counts.size() != probs.size())
    throw std::invalid_argument("ebus: observed/expected length mismatch");
  const double draws = static_cast<double>(
      std::accumulate(counts.begin(), counts.end(), uint64_t(0)));

  // Pool cells with small expectation, smallest first, until each pooled
  // group meets the threshold; a short final group merges into its
  // predecessor.
  std::vector<size_t> order(counts.size());
  std::iota(order.begin(), order.end(), size_t(0));
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return probs[a] < probs[b];
  });

  std::vector<std::pair<double, double>> groups;  // (expected, observed)
  double exp_acc = 0.0;
  double obs_acc = 0.0;
  for (size_t idx : order) {
    if (probs[idx] < 0.0) throw std::invalid_argument("ebus: negative probability");
    exp_acc += draws * probs[idx];
    obs_acc += static_cast<double>(counts[idx]);
    if (exp_acc >= min_expected) {
      groups.emplace_back(exp_acc, obs_acc);
      exp_acc = 0.0;
      obs_acc = 0.0;
    }
  }
  if (exp_acc > 0.0 || obs_acc > 0.0) {
    if (groups.empty()) {
      groups.emplace_back(exp_acc, obs_acc);
    } else {
      groups.back().first += exp_acc;
      groups.back().second += obs_acc;
    }
  }

  GofResult out;
  out.dof = static_cast<int>(groups.size()) - 1;
  if (out.dof < 1) return out;  // vacuous: p = 1
  for (const auto& [expected, observed] : groups) {
    const double diff = observed - expected;
    out.statistic += diff * diff / expected;
  }
  out.p_value = chi_square_p_value(out.statistic, out.dof);
  return out;
}

double js_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    throw std::invalid_argument("ebus: distribution length mismatch");
  double sp = 0.0;
  double sq = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0)
      throw std::invalid_argument("ebus: negative distribution entry");
    sp += p[i];
    sq += q[i];
  }
  if (std::fabs(sp - 1.0) > 1e-12 || std::fabs(sq - 1.0) > 1e-12)
    throw std::invalid_argument("ebus: distributions must sum to 1");

  // 0 * log 0 := 0; log base 2 bounds the result by 1.
  double acc = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) acc += 0.5 * p[i] * std::log2(p[i] / m);
    if (q[i] > 0.0) acc += 0.5 * q[i] * std::log2(q[i] / m);
  }
  return std::max(0.0, acc);
}

std::vector<double> OracleDistribution::probabilities() const {
  std::vector<double> out;
  out.reserve(numerators.size());
  for (const WideUint& num : numerators) out.push_back(wide_ratio(num, denominator));
  return out;
}

OracleDistribution oracle_probabilities(std::span<const double> weights) {
  int lowest = kLevelMax + 1;
  bool any = false;
  for (size_t i = 0; i < weights.size(); ++i) {
    switch (classify(weights[i])) {
      case WeightClass::kInvalid:
        throw std::invalid_argument("ebus: invalid weight at index " + std::to_string(i));
      case WeightClass::kZero:
        break;
      case WeightClass::kPositive:
        lowest = std::min(lowest, decode(weights[i]).level);
        any = true;
        break;
    }
  }
  if (!any) throw std::invalid_argument("ebus: all weights are zero");

  OracleDistribution out;
  out.numerators.reserve(weights.size());
  for (double w : weights) {
    WideUint num;
    if (classify(w) == WeightClass::kPositive) {
      const DecodedWeight d = decode(w);
      num = WideUint(d.sig);
      num <<= static_cast<unsigned>(d.level - lowest);
    }
    out.denominator += num;
    out.numerators.push_back(std::move(num));
  }
  return out;
}

}  // namespace ebus
