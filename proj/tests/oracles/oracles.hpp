// Copyright 2026 The Mockboard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Deliberately naive reference computations. They share no code with the
// library and favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

namespace mbtest::oracle {

/// answers[i] is the chosen option for keyed question i (nullopt = skipped).
inline int grade(const std::vector<std::optional<int>>& answers, const std::vector<int>& key) {
  int raw = 0;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (answers[i].has_value() && *answers[i] == key[i]) raw = raw + 1;
  }
  return raw;
}

/// Fraction raw/total against rate_num/rate_den, both reduced, compared by
/// cross multiplication in 128-bit integers.
inline bool passes(long raw, long total, long rate_num, long rate_den) {
  // raw/total >= rate / 100  <=>  raw * 100 * rate_den >= rate_num * total
  const long g1 = std::gcd(raw, total) == 0 ? 1 : std::gcd(raw, total);
  const __int128 lhs = static_cast<__int128>(raw / g1) * 100 * rate_den;
  const __int128 rhs = static_cast<__int128>(rate_num) * (total / g1);
  return lhs >= rhs;
}

/// Weighted score in tenths, half up, by walking t upward while the exact
/// value v = raw * weight_h / (10 * total) is at least t + 1/2.
inline long weighted_tenths(long raw, long total, long weight_hundredths) {
  const long num = raw * weight_hundredths;
  const long den = 10 * total;
  long t = 0;
  while (2 * num >= (2 * t + 1) * den) ++t;
  return t;
}

inline double difficulty(const std::vector<std::pair<std::optional<int>, int>>& responses) {
  int right = 0;
  for (const auto& [chosen, correct] : responses) {
    if (chosen && *chosen == correct) ++right;
  }
  return static_cast<double>(right) / static_cast<double>(responses.size());
}

struct Member {
  std::uint64_t id;
  int total;
  bool correct;
};

inline double discrimination(std::vector<Member> cohort) {
  std::stable_sort(cohort.begin(), cohort.end(), [](const Member& a, const Member& b) {
    if (a.total != b.total) return a.total > b.total;
    return a.id < b.id;
  });
  const std::size_t n = cohort.size();
  const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.27 * n)));
  double upper = 0, lower = 0;
  for (std::size_t i = 0; i < k; ++i) upper += cohort[i].correct ? 1 : 0;
  for (std::size_t i = n - k; i < n; ++i) lower += cohort[i].correct ? 1 : 0;
  return upper / k - lower / k;
}

}  // namespace mbtest::oracle
