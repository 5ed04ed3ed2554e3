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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mockboard/time.hpp"

namespace mockboard {

/// Opaque, strongly typed identifier. Ids are allocated by the store from a
/// single counter, so they are unique across entity kinds as well.
template <class Tag>
struct Id {
  std::uint64_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::uint64_t v) : value(v) {}
  constexpr auto operator<=>(const Id&) const = default;
};

using AccountId = Id<struct AccountTag>;
using CourseId = Id<struct CourseTag>;
using MajorId = Id<struct MajorTag>;
using ExamId = Id<struct ExamTag>;
using QuestionId = Id<struct QuestionTag>;
using AttemptId = Id<struct AttemptTag>;
using AnnouncementId = Id<struct AnnouncementTag>;

/// A percentage carried as integer hundredths ("75.00" -> 7500) so that
/// boundary comparisons never touch floating point.
class Percent {
 public:
  constexpr Percent() = default;
  static constexpr Percent from_hundredths(std::int64_t h) { return Percent{h}; }
  static constexpr Percent whole(std::int64_t p) { return Percent{p * 100}; }

  /// Accepts "75", "75.5", "75.00"; at most two decimals, non-negative.
  static std::optional<Percent> parse(std::string_view text);
  /// Nearest hundredth of a JSON-style number; nullopt for NaN/negative.
  static std::optional<Percent> from_double(double value);

  constexpr std::int64_t hundredths() const { return hundredths_; }
  double as_double() const { return static_cast<double>(hundredths_) / 100.0; }

  /// Two decimals: "75.00".
  std::string str() const;
  /// Shortest exact form: "75", "12.5", "33.33".
  std::string compact() const;

  constexpr auto operator<=>(const Percent&) const = default;

 private:
  constexpr explicit Percent(std::int64_t h) : hundredths_(h) {}
  std::int64_t hundredths_ = 0;
};

/// Weighted points at one-decimal display precision ("13.5").
struct Points {
  std::int64_t tenths = 0;

  std::string str() const;
  constexpr auto operator<=>(const Points&) const = default;
};

enum class Outcome { InProgress, Passed, Failed };
enum class Role { Admin, Examinee };
enum class AccountStatus { Pending, Verified, Disabled };

/// Per-exam state on the examinee dashboard.
enum class ExamStatus { Locked, TakeExam, Retake, ViewCertificate };

std::string_view to_string(Outcome o);
std::string_view to_string(Role r);
std::string_view to_string(AccountStatus s);
std::string_view to_string(ExamStatus s);
std::optional<Outcome> parse_outcome(std::string_view s);
std::optional<Role> parse_role(std::string_view s);
std::optional<AccountStatus> parse_account_status(std::string_view s);

struct ExamineeProfile {
  std::string student_number;
  std::string last_name;
  std::string first_name;
  std::string middle_name;
  std::string address;
  std::string contact_number;
  Date birthdate{};
  CourseId course_id;
  std::optional<MajorId> major_id;
  bool terms_accepted = false;

  /// "Dela Cruz, Juan Santos"
  std::string display_name() const;
};

struct Account {
  AccountId id;
  std::string username;
  std::string password_digest;
  Role role = Role::Examinee;
  AccountStatus status = AccountStatus::Pending;
  std::optional<CourseId> scope_course_id;
  std::optional<ExamineeProfile> profile;
  Instant created_at{};
};

struct Major {
  MajorId id;
  std::string name;
};

struct Course {
  CourseId id;
  std::string name;
  std::vector<Major> majors;
  std::string created_by;
  Instant created_at{};
  std::optional<Instant> updated_at;

  bool has_major(MajorId m) const;
};

struct Exam {
  ExamId id;
  CourseId course_id;
  std::optional<MajorId> major_id;
  std::string name;
  std::string instructions;
  Date exam_date{};
  std::optional<Date> reexam_date;
  int duration_minutes = 60;
  Percent passing_rate = Percent::whole(75);
  Percent weight = Percent::whole(100);
  std::vector<QuestionId> question_ids;
  Instant created_at{};
  std::optional<Instant> updated_at;
};

struct Question {
  QuestionId id;
  ExamId exam_id;
  std::string stem;
  std::vector<std::string> choices;
  std::size_t correct_index = 0;
  std::optional<std::string> category;
};

struct Attempt {
  AttemptId id;
  ExamId exam_id;
  AccountId examinee_id;
  int attempt_no = 1;
  std::uint64_t seed = 0;
  Instant started_at{};
  Instant deadline{};
  std::optional<Instant> submitted_at;
  /// question -> chosen choice, in authored choice order
  std::map<QuestionId, std::size_t> answers;
  int raw_score = 0;
  /// Question count the attempt was graded against; 0 until finalized.
  int total_questions = 0;
  Points weighted_score;
  Outcome outcome = Outcome::InProgress;

  bool finalized() const { return submitted_at.has_value(); }
};

struct Announcement {
  AnnouncementId id;
  std::string body;
  std::string author;
  Instant created_at{};
};

struct ItemStats {
  QuestionId question_id;
  std::size_t n_responses = 0;
  double difficulty = 0.0;
  std::optional<double> discrimination;
  std::vector<std::size_t> choice_distribution;
};

/// True for strings that are empty or whitespace only.
bool is_blank(std::string_view s);

}  // namespace mockboard
