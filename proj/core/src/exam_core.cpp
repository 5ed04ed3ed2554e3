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

#include "mockboard/exam_core.hpp"

#include <algorithm>
#include <numeric>

#include "mockboard/error.hpp"
#include "mockboard/splitmix64.hpp"

namespace mockboard::core {

int grade(const AnswerMap& answers, const AnswerMap& key) {
  int raw = 0;
  for (const auto& [question, chosen] : answers) {
    auto it = key.find(question);
    if (it == key.end()) {
      throw Error(ErrorCode::UnknownQuestion,
                  "answer for question " + std::to_string(question.value) + " is not keyed");
    }
    if (it->second == chosen) ++raw;
  }
  return raw;
}

Points weighted_score(int raw, int total, Percent weight) {
  if (total <= 0) throw Error(ErrorCode::DegenerateExam, "exam has no questions");
  // tenths = raw * (weight_hundredths / 100) * 10 / total, rounded half up
  const std::int64_t num = std::int64_t{raw} * weight.hundredths();
  const std::int64_t den = std::int64_t{total} * 10;
  return Points{(2 * num + den) / (2 * den)};
}

Outcome subject_outcome(int raw, int total, Percent passing_rate) {
  if (total <= 0) throw Error(ErrorCode::DegenerateExam, "exam has no questions");
  // 100 * raw / total >= rate_hundredths / 100
  return std::int64_t{raw} * 10000 >= passing_rate.hundredths() * std::int64_t{total}
             ? Outcome::Passed
             : Outcome::Failed;
}

OverallRating overall_rating(std::span<const SubjectResult> parts, Percent threshold) {
  std::int64_t weight_sum = 0;
  for (const auto& p : parts) weight_sum += p.weight.hundredths();
  if (weight_sum > Percent::whole(100).hundredths()) {
    throw Error(ErrorCode::WeightOverflow, "subject weights sum to " +
                                               Percent::from_hundredths(weight_sum).compact() +
                                               "%, above 100%");
  }
  OverallRating result;
  bool every_subject_passed = true;
  for (const auto& p : parts) {
    result.rating.tenths += weighted_score(p.raw, p.total, p.weight).tenths;
    if (subject_outcome(p.raw, p.total, p.passing_rate) != Outcome::Passed) {
      every_subject_passed = false;
    }
  }
  // rating is in tenths of a point, threshold in hundredths of a percent
  const bool above = result.rating.tenths * 10 >= threshold.hundredths();
  result.outcome =
      (!parts.empty() && above && every_subject_passed) ? Outcome::Passed : Outcome::Failed;
  return result;
}

Presentation presentation_order(std::span<const std::size_t> choice_counts,
                                std::uint64_t seed) {
  SplitMix64 rng(seed);
  Presentation p;
  p.question_order.resize(choice_counts.size());
  std::iota(p.question_order.begin(), p.question_order.end(), std::size_t{0});
  shuffle(std::span{p.question_order}, rng);

  p.choice_order.reserve(choice_counts.size());
  for (std::size_t count : choice_counts) {
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(std::span{order}, rng);
    p.choice_order.push_back(std::move(order));
  }
  return p;
}

std::vector<std::size_t> invert(std::span<const std::size_t> permutation) {
  std::vector<std::size_t> inverse(permutation.size());
  for (std::size_t i = 0; i < permutation.size(); ++i) inverse[permutation[i]] = i;
  return inverse;
}

std::int64_t remaining_seconds(Instant now, Instant started_at, int duration_minutes) {
  if (now < started_at) throw Error(ErrorCode::ClockSkew, "now precedes attempt start");
  const Instant deadline = started_at + std::chrono::minutes{duration_minutes};
  return std::max<std::int64_t>(0, (deadline - now).count());
}

double difficulty_index(std::span<const ItemResponse> responses) {
  if (responses.empty()) throw Error(ErrorCode::NoData, "no responses for item");
  const auto correct = std::count_if(responses.begin(), responses.end(), [](const auto& r) {
    return r.chosen && *r.chosen == r.correct;
  });
  return static_cast<double>(correct) / static_cast<double>(responses.size());
}

std::size_t extreme_group_size(std::size_t n) {
  return std::max<std::size_t>(1, (27 * n + 50) / 100);
}

double discrimination_index(std::span<const ExamineeItemResult> cohort) {
  if (cohort.size() < 2) throw Error(ErrorCode::NoData, "discrimination needs two examinees");
  std::vector<ExamineeItemResult> ranked(cohort.begin(), cohort.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.total_raw != b.total_raw) return a.total_raw > b.total_raw;
    return a.examinee < b.examinee;
  });
  const std::size_t k = extreme_group_size(ranked.size());
  const auto upper = std::count_if(ranked.begin(), ranked.begin() + k,
                                   [](const auto& r) { return r.correct; });
  const auto lower = std::count_if(ranked.end() - k, ranked.end(),
                                   [](const auto& r) { return r.correct; });
  return static_cast<double>(upper - lower) / static_cast<double>(k);
}

bool validate_student_number(std::string_view s) {
  if (s.size() != 9 || s[4] != '-') return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i == 4) continue;
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

}  // namespace mockboard::core
