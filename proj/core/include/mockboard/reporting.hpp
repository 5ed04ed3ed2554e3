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

// Derived, read-only documents: certificates, grade reports and item
// analysis. Nothing here mutates the store.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mockboard/exam_core.hpp"
#include "mockboard/store.hpp"
#include "mockboard/types.hpp"

namespace mockboard::reporting {

/// "13.5 of 15%"
std::string score_text(Points weighted, Percent weight);

struct CertificateRow {
  ExamId exam_id;
  std::string exam_name;
  int attempt_no = 1;
  Instant finalized_at{};
  int raw = 0;
  int total = 0;
  Points weighted;
  Percent weight;
  Percent passing_rate;
  Outcome outcome = Outcome::Failed;

  std::string score() const { return score_text(weighted, weight); }
};

struct Certificate {
  AccountId examinee_id;
  std::string examinee_name;
  std::string student_number;
  std::string course_name;
  std::optional<std::string> major_name;
  /// One row per exam with a finalized attempt (the latest one), in exam
  /// authoring order.
  std::vector<CertificateRow> rows;
  Points overall_rating;
  Outcome overall_outcome = Outcome::Failed;
  Percent threshold;
  Instant issued_at{};
};

/// Throws UnknownExaminee, NotVerified, WeightOverflow.
Certificate build_certificate(const Store& store, AccountId examinee, Percent threshold,
                              Instant issued_at);

/// Self-contained printable HTML page (inline styles, no external assets).
std::string render_certificate_html(const Certificate& cert);

struct GradeRow {
  AccountId examinee_id;
  std::string examinee_name;
  std::string student_number;
  int attempt_no = 1;
  int raw = 0;
  int total = 0;
  Points weighted;
  Percent weight;
  Outcome outcome = Outcome::Failed;
  Instant started_at{};
  Instant submitted_at{};

  bool operator==(const GradeRow&) const = default;
};

struct GradeReport {
  ExamId exam_id;
  std::string exam_name;
  /// One row per finalized attempt, in attempt order.
  std::vector<GradeRow> rows;
};

/// Throws UnknownExam.
GradeReport grade_report(const Store& store, ExamId exam);

/// Fixed header, comma separated, CRLF, RFC 4180 quoting.
inline constexpr std::string_view kGradeReportHeader =
    "examinee_id,examinee,student_number,attempt,raw,total,weighted,weight,outcome,started_at,"
    "submitted_at";
std::string grade_report_csv(const GradeReport& report);
/// Inverse of grade_report_csv. Throws SchemaError.
std::vector<GradeRow> parse_grade_report_csv(std::string_view text);

/// Flag thresholds from classical test theory rules of thumb.
inline constexpr double kMinDifficulty = 0.2;
inline constexpr double kMaxDifficulty = 0.9;
inline constexpr double kMinDiscrimination = 0.2;

struct CohortMember {
  AccountId examinee;
  int total_raw = 0;
  const core::AnswerMap* answers = nullptr;
};

/// Statistics for one question over a cohort (one entry per examinee).
/// Discrimination is present only for cohorts of two or more.
/// Throws NoData for an empty cohort.
ItemStats compute_item_stats(const Question& question, std::span<const CohortMember> cohort);

/// difficulty outside [0.2, 0.9] or discrimination below 0.2.
bool needs_review(const ItemStats& stats);

struct ItemReportRow {
  QuestionId question_id;
  std::size_t position = 0;  // 1-based authored position
  std::string stem_excerpt;
  std::optional<std::string> category;
  std::size_t correct_index = 0;
  std::optional<ItemStats> stats;  // absent without finalized attempts
  bool flagged = false;
};

struct ItemAnalysisReport {
  ExamId exam_id;
  std::string exam_name;
  /// Examinees contributing (their latest finalized attempt).
  std::size_t cohort_size = 0;
  std::vector<ItemReportRow> items;
};

/// Throws UnknownExam.
ItemAnalysisReport item_analysis_report(const Store& store, ExamId exam);

/// At most `max_chars` UTF-8 code points, "..." appended when cut.
std::string excerpt(std::string_view text, std::size_t max_chars = 60);

}  // namespace mockboard::reporting
