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

// Pure assessment logic: grading, weighting, outcomes, presentation order,
// timing arithmetic and item analysis. Nothing here touches storage, the
// network or the wall clock, and every function is safe to call from any
// thread.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mockboard/types.hpp"

namespace mockboard::core {

using AnswerMap = std::map<QuestionId, std::size_t>;

/// Number of answers equal to the key. Unanswered questions score zero.
/// Throws Error{UnknownQuestion} for an answer whose question is not keyed.
int grade(const AnswerMap& answers, const AnswerMap& key);

/// (raw / total) * weight rendered to tenths, round half up, computed in
/// exact integer arithmetic. Throws Error{DegenerateExam} when total == 0.
Points weighted_score(int raw, int total, Percent weight);

/// Passed iff 100 * raw / total >= passing_rate, compared exactly.
Outcome subject_outcome(int raw, int total, Percent passing_rate);

struct SubjectResult {
  int raw = 0;
  int total = 0;
  Percent weight;
  Percent passing_rate;
};

struct OverallRating {
  Points rating;
  Outcome outcome = Outcome::Failed;
};

/// Sum of per-subject weighted scores. Passed requires rating >= threshold
/// and every subject passed; an empty list is Failed with rating 0.0.
/// Throws Error{WeightOverflow} when the weights add up to more than 100.
OverallRating overall_rating(std::span<const SubjectResult> parts,
                             Percent threshold = Percent::whole(75));

/// Display arrangement of one attempt.
///
/// `question_order[d]` is the authored index of the question shown at
/// display position d. `choice_order[q][d]` is the authored choice index
/// shown at display position d of authored question q.
struct Presentation {
  std::vector<std::size_t> question_order;
  std::vector<std::vector<std::size_t>> choice_order;
};

/// Deterministic in (choice_counts, seed): questions are shuffled first,
/// then each question's choices in authored order, all from one SplitMix64
/// stream seeded with `seed`.
Presentation presentation_order(std::span<const std::size_t> choice_counts, std::uint64_t seed);

/// Inverse of a display->authored permutation.
std::vector<std::size_t> invert(std::span<const std::size_t> permutation);

/// Whole seconds left on the clock, clamped at zero.
/// Throws Error{ClockSkew} when now < started_at.
std::int64_t remaining_seconds(Instant now, Instant started_at, int duration_minutes);

struct ItemResponse {
  std::optional<std::size_t> chosen;
  std::size_t correct = 0;
};

/// Proportion of responses that chose the correct option.
/// Throws Error{NoData} for an empty list.
double difficulty_index(std::span<const ItemResponse> responses);

struct ExamineeItemResult {
  AccountId examinee;
  int total_raw = 0;
  bool correct = false;
};

/// Size of each extreme group: max(1, round-half-up(0.27 n)).
std::size_t extreme_group_size(std::size_t n);

/// Upper-27% minus lower-27% proportion correct. Examinees are ranked by
/// total raw score descending, ties by examinee id ascending.
/// Throws Error{NoData} for fewer than two examinees.
double discrimination_index(std::span<const ExamineeItemResult> cohort);

/// Exactly four digits, a hyphen, four digits ("2018-0001").
bool validate_student_number(std::string_view s);

}  // namespace mockboard::core
