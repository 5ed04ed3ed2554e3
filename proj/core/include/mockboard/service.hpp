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

#include <chrono>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mockboard/error.hpp"
#include "mockboard/reporting.hpp"
#include "mockboard/store.hpp"
#include "mockboard/time.hpp"
#include "mockboard/types.hpp"

namespace mockboard {

struct ServiceOptions {
  Percent overall_threshold = Percent::whole(75);
  std::chrono::seconds token_ttl = std::chrono::hours{8};
};

/// An authenticated bearer-token session.
struct Session {
  std::string token;
  AccountId account_id;
  std::string username;
  Role role = Role::Examinee;
  std::optional<CourseId> scope_course_id;
  Instant issued_at{};
  Instant expires_at{};
};

struct Registration {
  std::string username;
  std::string password;
  std::string student_number;
  std::string last_name;
  std::string first_name;
  std::string middle_name;
  std::string address;
  std::string contact_number;
  std::string birthdate;  // YYYY-MM-DD
  std::optional<CourseId> course_id;
  std::optional<MajorId> major_id;
  bool terms_accepted = false;
};

inline constexpr std::size_t kMinPasswordLength = 6;

/// Exam authoring form. Missing required fields are validation errors;
/// weight defaults to 100 only when the course has no other exam.
struct ExamInput {
  std::optional<CourseId> course_id;
  std::optional<MajorId> major_id;
  std::optional<std::string> name;
  std::string instructions;
  std::optional<Date> exam_date;
  std::optional<Date> reexam_date;
  std::optional<int> duration_minutes;
  std::optional<Percent> passing_rate;
  std::optional<Percent> weight;
  /// Parse problems found by the transport layer, merged into the report.
  FieldErrors field_errors;
};

struct ExamResult {
  Exam exam;
  std::vector<std::string> warnings;
};

struct QuestionInput {
  std::string stem;
  std::vector<std::string> choices;
  std::optional<std::size_t> correct_index;
  std::optional<std::string> category;
};

struct PresentedQuestion {
  QuestionId question_id;
  std::size_t number = 0;  // 1-based display position
  std::string stem;
  std::optional<std::string> category;
  /// Choice texts in display order.
  std::vector<std::string> choices;
  /// choice_order[display] = authored index. Answers are sent back in
  /// authored indices.
  std::vector<std::size_t> choice_order;
  /// Saved selection, authored index.
  std::optional<std::size_t> selected;
};

/// What an examinee sees while an attempt runs. Never carries answer keys.
struct AttemptView {
  AttemptId attempt_id;
  ExamId exam_id;
  std::string exam_name;
  std::string instructions;
  int attempt_no = 1;
  int duration_minutes = 0;
  Instant started_at{};
  Instant deadline{};
  std::int64_t remaining_seconds = 0;
  std::vector<PresentedQuestion> questions;
};

struct AnswerAck {
  AttemptId attempt_id;
  QuestionId question_id;
  std::size_t choice = 0;
  std::int64_t remaining_seconds = 0;
  Instant deadline{};
};

struct ResultView {
  AttemptId attempt_id;
  ExamId exam_id;
  std::string exam_name;
  int attempt_no = 1;
  int raw = 0;
  int total = 0;
  int answered = 0;
  Points weighted;
  Percent weight;
  Percent passing_rate;
  Outcome outcome = Outcome::Failed;
  Instant started_at{};
  Instant submitted_at{};

  std::string score() const { return reporting::score_text(weighted, weight); }
};

struct DashboardRow {
  ExamId exam_id;
  std::string name;
  int duration_minutes = 0;
  Percent passing_rate;
  Percent weight;
  Date exam_date{};
  std::optional<Date> reexam_date;
  std::size_t total_questions = 0;
  ExamStatus status = ExamStatus::Locked;
  std::optional<AttemptId> attempt_id;
};

struct Dashboard {
  AccountId examinee_id;
  std::string name;
  std::string student_number;
  std::string course_name;
  std::optional<std::string> major_name;
  std::vector<DashboardRow> exams;
  std::vector<Announcement> announcements;
};

/// "H:MM" rendering of a duration in minutes.
std::string format_time_limit(int minutes);

/// The exam service: authentication, the verification workflow, exam
/// lifecycle with server-side timing, and the admin surface. All deadline
/// decisions read the injected clock; no caller-supplied time is used.
/// Thread-safe.
class ExamService {
 public:
  ExamService(Store& store, const Clock& clock, ServiceOptions options = {});

  Store& store() { return store_; }
  const Clock& clock() const { return clock_; }
  const ServiceOptions& options() const { return options_; }

  // -- authentication --
  Account register_examinee(const Registration& form);
  Session login(const std::string& username, const std::string& password);
  void logout(const std::string& token);
  /// Throws Unauthorized for unknown/expired tokens or disabled accounts.
  Session authenticate(const std::string& token);

  // -- examinee --
  Dashboard dashboard(const Session& s);
  AttemptView start_attempt(const Session& s, ExamId exam);
  AttemptView attempt_view(const Session& s, AttemptId attempt);
  AnswerAck record_answer(const Session& s, AttemptId attempt, QuestionId question,
                          std::size_t choice);
  ResultView submit_attempt(const Session& s, AttemptId attempt);
  ResultView result(const Session& s, AttemptId attempt);
  /// Examinees get their own; admins must name an examinee in scope.
  reporting::Certificate certificate(const Session& s, std::optional<AccountId> examinee);

  // -- shared --
  std::vector<Course> list_courses() const;
  std::vector<Announcement> list_announcements() const;

  // -- admin --
  Course create_course(const Session& s, const std::string& name,
                       const std::vector<std::string>& majors);
  Course update_course(const Session& s, CourseId id, const std::string& name,
                       const std::vector<Major>& majors);
  void delete_course(const Session& s, CourseId id);

  std::vector<Exam> list_exams(const Session& s, std::optional<CourseId> course);
  Exam get_exam(const Session& s, ExamId id);
  ExamResult create_exam(const Session& s, const ExamInput& input);
  ExamResult update_exam(const Session& s, ExamId id, const ExamInput& input);
  void delete_exam(const Session& s, ExamId id);

  std::vector<Question> list_questions(const Session& s, ExamId exam);
  Question create_question(const Session& s, ExamId exam, const QuestionInput& input);
  Question update_question(const Session& s, ExamId exam, QuestionId id,
                           const QuestionInput& input);
  void delete_question(const Session& s, ExamId exam, QuestionId id);

  std::vector<Account> list_accounts(const Session& s, std::optional<AccountStatus> status);
  Account verify_examinee(const Session& s, AccountId id);
  Account disable_account(const Session& s, AccountId id);

  Announcement post_announcement(const Session& s, const std::string& body);
  void delete_announcement(const Session& s, AnnouncementId id);

  reporting::GradeReport grade_report(const Session& s, ExamId exam);
  reporting::ItemAnalysisReport item_analysis(const Session& s, ExamId exam);

 private:
  void require_admin(const Session& s) const;
  void require_examinee(const Session& s) const;
  void require_scope(const Session& s, CourseId course) const;
  Exam scoped_exam(const Session& s, ExamId id) const;
  Attempt owned_attempt(const Session& s, AttemptId id) const;
  void finalize_expired(AccountId examinee, Instant now);
  AttemptView make_view(const Attempt& a, Instant now) const;
  ResultView make_result(const Attempt& a) const;
  Exam exam_from_input(const ExamInput& input, std::optional<ExamId> existing) const;
  std::vector<std::string> weight_warnings(const Exam& exam) const;

  Store& store_;
  const Clock& clock_;
  ServiceOptions options_;
  std::string dummy_digest_;

  std::mutex sessions_mu_;
  std::map<std::string, Session> sessions_;
};

}  // namespace mockboard
