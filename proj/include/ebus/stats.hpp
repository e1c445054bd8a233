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
#include <span>
#include <vector>

#include "ebus/wide_uint.hpp"

namespace ebus {

/// Upper-tail probability of a chi-square variable: Q(dof/2, x/2) via the
/// regularized incomplete gamma function (series + continued fraction).
double chi_square_p_value(double statistic, double dof);

struct GofResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson goodness-of-fit of observed counts against expected probabilities.
/// Cells whose expected count falls below `min_expected` are pooled (smallest
/// first) so the chi-square approximation stays valid; with fewer than two
/// pooled cells the test is vacuous and reports p = 1.
GofResult chi_square_gof(std::span<const uint64_t> counts,
                         std::span<const double> probs,
                         double min_expected = 5.0);

/// Jensen-Shannon divergence in bits, in [0, 1]. Both arguments must be
/// distributions of equal length (nonnegative, summing to 1 within 1e-12).
double js_divergence(std::span<const double> p, std::span<const double> q);

/// Exact sampling probabilities of a weight vector, as integer ratios: each
/// numerator is the weight's normalized significand scaled by its exponent
/// relative to the lowest occupied level, and the common denominator is
/// their sum. Brute force over the decoded representation; shares nothing
/// with the sampler beyond decode itself.
struct OracleDistribution {
  std::vector<WideUint> numerators;  // zero for zero weights
  WideUint denominator;
  std::vector<double> probabilities() const;
};

OracleDistribution oracle_probabilities(std::span<const double> weights);

}  // namespace ebus
