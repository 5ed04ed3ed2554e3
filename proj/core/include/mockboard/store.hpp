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
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "mockboard/types.hpp"

namespace mockboard {

class Journal;

namespace detail {
struct StoreState;
struct AttemptSlot;
}  // namespace detail

struct StoreOptions {
  std::filesystem::path data_dir;
  /// Answers are accepted until deadline + grace.
  std::chrono::seconds grace{30};
  /// Offset used to turn instants into calendar dates for scheduling.
  std::chrono::minutes utc_offset{0};
  /// Journal records between automatic snapshots; 0 disables.
  std::size_t snapshot_every = 5000;
  /// fdatasync before acknowledging. Only benchmarks turn this off.
  bool sync = true;
};

struct EligibleExam {
  Exam exam;
  ExamStatus status = ExamStatus::Locked;
  /// Most recent attempt at this exam, in any state.
  std::optional<Attempt> latest_attempt;
};

enum class Table { Accounts, Courses, Exams, Questions, Attempts, Announcements };
std::optional<Table> parse_table(std::string_view name);

/// Durable single-node persistence.
///
/// State lives in memory and every mutation is written to an append-only
/// journal in the data directory before it is applied and acknowledged;
/// snapshots compact the journal. Opening a directory replays snapshot then
/// journal. One process at a time may hold a data directory open.
///
/// Thread safety: any number of concurrent readers. Mutations of courses,
/// exams, questions, accounts and announcements are serialized. Answer
/// writes and finalization lock only their own attempt, so distinct
/// attempts proceed in parallel.
class Store {
 public:
  explicit Store(StoreOptions options);
  ~Store();

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  const StoreOptions& options() const { return options_; }

  /// True when no entity of any kind has been stored.
  bool empty() const;

  // -- accounts --
  /// Assigns id and created_at. Throws DuplicateKey, ForeignKeyMissing,
  /// ValidationFailed.
  Account create_account(Account draft, Instant now);
  Account set_account_status(AccountId id, AccountStatus status);
  std::optional<Account> account(AccountId id) const;
  std::optional<Account> account_by_username(std::string_view username) const;
  std::vector<Account> accounts(std::optional<AccountStatus> status = std::nullopt) const;
  /// Refused (DeleteRestricted) while the account owns attempts.
  void delete_account(AccountId id);

  // -- courses --
  Course create_course(std::string name, const std::vector<std::string>& majors,
                       std::string created_by, Instant now);
  /// Majors with a zero id are added; omitted majors are removed (refused
  /// while referenced by an exam or examinee).
  Course update_course(CourseId id, std::string name, std::vector<Major> majors, Instant now);
  std::optional<Course> course(CourseId id) const;
  std::vector<Course> courses() const;
  void delete_course(CourseId id);

  // -- exams --
  /// Validates the authoring invariants; question_ids in the draft are ignored.
  Exam create_exam(Exam draft, Instant now);
  /// Replaces authoring fields; the question list is kept.
  Exam update_exam(const Exam& exam, Instant now);
  std::optional<Exam> exam(ExamId id) const;
  std::vector<Exam> exams(std::optional<CourseId> course = std::nullopt) const;
  /// Cascades to questions and unfinished attempts. Refused
  /// (DeleteRestricted) once any attempt has been finalized.
  void delete_exam(ExamId id);

  // -- questions --
  /// Appends to the exam's question list. ExamInUse once attempts exist.
  Question create_question(Question draft);
  /// All-or-nothing: either every question is stored or none is.
  std::vector<Question> create_questions(ExamId exam, std::vector<Question> drafts);
  Question update_question(const Question& question);
  std::optional<Question> question(QuestionId id) const;
  /// In the exam's authored order.
  std::vector<Question> questions(ExamId exam) const;
  void delete_question(QuestionId id);

  // -- announcements --
  Announcement create_announcement(std::string body, std::string author, Instant now);
  /// Newest first.
  std::vector<Announcement> announcements() const;
  void delete_announcement(AnnouncementId id);

  // -- attempts --
  /// deadline = started_at + exam duration. At most one attempt per
  /// (examinee, exam, attempt_no); attempt 2 requires attempt 1 Failed.
  Attempt create_attempt(ExamId exam, AccountId examinee, int attempt_no, std::uint64_t seed,
                         Instant started_at);
  std::optional<Attempt> attempt(AttemptId id) const;
  std::vector<Attempt> attempts_for_exam(ExamId exam) const;
  std::vector<Attempt> attempts_for_examinee(AccountId examinee) const;

  /// Upserts one answer (authored choice index) if `at` is within
  /// deadline + grace. Past that the attempt is finalized and Expired is
  /// thrown. Also throws UnknownAttempt, UnknownQuestion, AlreadyFinalized,
  /// ValidationFailed (choice out of range).
  void record_answer(AttemptId id, QuestionId question, std::size_t choice, Instant at);

  /// Grades the saved answers and seals the attempt with
  /// submitted_at = min(at, deadline). Idempotent: later calls return the
  /// stored record unchanged.
  Attempt finalize_attempt(AttemptId id, Instant at);

  /// Exams offered to the examinee's course (and major, when both set) with
  /// their dashboard status at `now`. Throws UnknownAccount, NotVerified.
  std::vector<EligibleExam> eligible_exams(AccountId examinee, Instant now) const;

  // -- maintenance --
  /// Writes a snapshot and empties the journal.
  void compact();
  /// CSV dump of one table, header row first.
  std::string export_csv(Table table) const;
  std::uint64_t last_seq() const;

 private:
  void load();
  void write_snapshot_locked();
  void maybe_compact();
  Attempt finalize_slot_locked(detail::AttemptSlot& slot, Instant at);
  std::shared_ptr<detail::AttemptSlot> slot(AttemptId id) const;

  StoreOptions options_;
  int lock_fd_ = -1;
  std::unique_ptr<Journal> journal_;
  std::unique_ptr<detail::StoreState> state_;
  mutable std::shared_mutex mu_;
};

}  // namespace mockboard
