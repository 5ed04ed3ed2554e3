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

#include "mockboard/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "codec.hpp"
#include "mockboard/csv.hpp"
#include "mockboard/error.hpp"
#include "mockboard/exam_core.hpp"
#include "mockboard/journal.hpp"

namespace mockboard {

using nlohmann::json;

namespace detail {

struct AttemptSlot {
  std::mutex mu;
  Attempt data;
};

struct StoreState {
  std::map<AccountId, Account> accounts;
  std::map<CourseId, Course> courses;
  std::map<ExamId, Exam> exams;
  std::map<QuestionId, Question> questions;
  std::map<AttemptId, std::shared_ptr<AttemptSlot>> attempts;
  std::map<AnnouncementId, Announcement> announcements;

  std::map<std::string, AccountId> by_username;  // lowercased
  std::map<std::string, AccountId> by_student_number;
  std::map<AccountId, std::vector<AttemptId>> attempts_by_examinee;
  std::map<ExamId, std::vector<AttemptId>> attempts_by_exam;

  std::uint64_t next_id = 1;

  std::uint64_t take_id() { return next_id++; }
  void saw_id(std::uint64_t id) { next_id = std::max(next_id, id + 1); }
};

}  // namespace detail

using detail::AttemptSlot;
using detail::StoreState;

namespace {

constexpr const char* kJournalFile = "journal.log";
constexpr const char* kSnapshotFile = "snapshot.json";
constexpr const char* kLockFile = "LOCK";

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

void erase_id(std::vector<AttemptId>& ids, AttemptId id) {
  ids.erase(std::remove(ids.begin(), ids.end(), id), ids.end());
}

// ---- applying journal records ------------------------------------------
//
// Every mutation, live or replayed, goes through apply_record(). The live path
// validates first, appends the record, then applies it under the lock that
// covers the touched entities.

void index_account(StoreState& s, const Account& a) {
  s.by_username[lower(a.username)] = a.id;
  if (a.profile) s.by_student_number[a.profile->student_number] = a.id;
}

void unindex_account(StoreState& s, const Account& a) {
  s.by_username.erase(lower(a.username));
  if (a.profile) s.by_student_number.erase(a.profile->student_number);
}

void put_attempt(StoreState& s, Attempt a) {
  s.saw_id(a.id.value);
  auto it = s.attempts.find(a.id);
  if (it != s.attempts.end()) {
    it->second->data = std::move(a);
    return;
  }
  auto slot = std::make_shared<AttemptSlot>();
  s.attempts_by_examinee[a.examinee_id].push_back(a.id);
  s.attempts_by_exam[a.exam_id].push_back(a.id);
  const AttemptId id = a.id;
  slot->data = std::move(a);
  s.attempts.emplace(id, std::move(slot));
}

void put_question(StoreState& s, Question q) {
  s.saw_id(q.id.value);
  auto& exam = s.exams.at(q.exam_id);
  if (!s.questions.count(q.id)) exam.question_ids.push_back(q.id);
  s.questions[q.id] = std::move(q);
}

void drop_attempt(StoreState& s, AttemptId id) {
  auto it = s.attempts.find(id);
  if (it == s.attempts.end()) return;
  erase_id(s.attempts_by_examinee[it->second->data.examinee_id], id);
  s.attempts.erase(it);
}

void apply_record(StoreState& s, const json& rec) {
  const std::string& op = rec.at("op").get_ref<const std::string&>();
  if (op == "answer") {
    auto& slot = s.attempts.at(rec.at("attempt").get<AttemptId>());
    slot->data.answers[rec.at("question").get<QuestionId>()] = rec.at("choice").get<std::size_t>();
  } else if (op == "put_attempt") {
    put_attempt(s, rec.at("data").get<Attempt>());
  } else if (op == "put_account") {
    auto a = rec.at("data").get<Account>();
    s.saw_id(a.id.value);
    if (auto it = s.accounts.find(a.id); it != s.accounts.end()) unindex_account(s, it->second);
    index_account(s, a);
    s.accounts[a.id] = std::move(a);
  } else if (op == "del_account") {
    const auto id = rec.at("id").get<AccountId>();
    if (auto it = s.accounts.find(id); it != s.accounts.end()) {
      unindex_account(s, it->second);
      s.accounts.erase(it);
    }
    s.attempts_by_examinee.erase(id);
  } else if (op == "put_course") {
    auto c = rec.at("data").get<Course>();
    s.saw_id(c.id.value);
    for (const auto& m : c.majors) s.saw_id(m.id.value);
    s.courses[c.id] = std::move(c);
  } else if (op == "del_course") {
    s.courses.erase(rec.at("id").get<CourseId>());
  } else if (op == "put_exam") {
    auto e = rec.at("data").get<Exam>();
    s.saw_id(e.id.value);
    s.exams[e.id] = std::move(e);
  } else if (op == "del_exam") {
    const auto id = rec.at("id").get<ExamId>();
    if (auto it = s.exams.find(id); it != s.exams.end()) {
      for (auto q : it->second.question_ids) s.questions.erase(q);
      s.exams.erase(it);
    }
    if (auto it = s.attempts_by_exam.find(id); it != s.attempts_by_exam.end()) {
      for (auto a : it->second) drop_attempt(s, a);
      s.attempts_by_exam.erase(it);
    }
  } else if (op == "put_question") {
    put_question(s, rec.at("data").get<Question>());
  } else if (op == "put_questions") {
    for (const auto& q : rec.at("data")) put_question(s, q.get<Question>());
  } else if (op == "del_question") {
    const auto id = rec.at("id").get<QuestionId>();
    if (auto it = s.questions.find(id); it != s.questions.end()) {
      auto& ids = s.exams.at(it->second.exam_id).question_ids;
      ids.erase(std::remove(ids.begin(), ids.end(), id), ids.end());
      s.questions.erase(it);
    }
  } else if (op == "put_announcement") {
    auto a = rec.at("data").get<Announcement>();
    s.saw_id(a.id.value);
    s.announcements[a.id] = std::move(a);
  } else if (op == "del_announcement") {
    s.announcements.erase(rec.at("id").get<AnnouncementId>());
  } else {
    throw Error(ErrorCode::StorageFailure, "unknown journal op '" + op + "'");
  }
}

void commit(Journal& journal, StoreState& s, const json& rec) {
  journal.append(rec.dump());
  apply_record(s, rec);
}

// ---- validation ---------------------------------------------------------

[[noreturn]] void invalid(FieldErrors fields) {
  std::string msg = "validation failed:";
  for (const auto& [k, v] : fields) msg += " " + k + " (" + v + ");";
  throw Error(ErrorCode::ValidationFailed, msg, std::move(fields));
}

void validate_exam_fields(const Exam& e) {
  FieldErrors f;
  if (is_blank(e.name)) f["name"] = "exam name is required";
  if (!e.exam_date.ok()) f["exam_date"] = "examination date is invalid";
  if (e.duration_minutes < 1) f["duration_minutes"] = "time limit must be at least 1 minute";
  if (e.passing_rate <= Percent{} || e.passing_rate > Percent::whole(100)) {
    f["passing_rate"] = "passing rate must be in (0, 100]";
  }
  if (e.weight <= Percent{} || e.weight > Percent::whole(100)) {
    f["weight"] = "weight must be in (0, 100]";
  }
  if (e.reexam_date && std::chrono::sys_days{*e.reexam_date} < std::chrono::sys_days{e.exam_date}) {
    f["reexam_date"] = "re-examination date precedes the examination date";
  }
  if (!f.empty()) invalid(std::move(f));
}

void check_exam_refs(const StoreState& s, const Exam& e) {
  auto course = s.courses.find(e.course_id);
  if (course == s.courses.end()) {
    throw Error(ErrorCode::ForeignKeyMissing, "course " + std::to_string(e.course_id.value) +
                                                  " does not exist", {{"course_id", "unknown course"}});
  }
  if (e.major_id && !course->second.has_major(*e.major_id)) {
    throw Error(ErrorCode::ForeignKeyMissing, "major is not offered by the course",
                {{"major_id", "unknown major for this course"}});
  }
}

Question normalized_question(Question q) {
  FieldErrors f;
  if (is_blank(q.stem)) f["stem"] = "question text is required";
  if (q.choices.size() < 2 || q.choices.size() > 5) {
    f["choices"] = "a question needs 2 to 5 choices";
  } else if (std::any_of(q.choices.begin(), q.choices.end(),
                         [](const std::string& c) { return is_blank(c); })) {
    f["choices"] = "choices must not be blank";
  }
  if (q.correct_index >= q.choices.size()) f["correct_index"] = "correct answer must be one of the choices";
  if (!f.empty()) invalid(std::move(f));
  if (q.category && is_blank(*q.category)) q.category.reset();
  return q;
}

void check_account(const StoreState& s, const Account& a, std::optional<AccountId> self) {
  FieldErrors f;
  if (is_blank(a.username)) {
    f["username"] = "username is required";
  } else if (std::any_of(a.username.begin(), a.username.end(),
                         [](unsigned char c) { return std::isspace(c); })) {
    f["username"] = "username must not contain spaces";
  }
  if (a.password_digest.empty()) f["password"] = "password digest missing";
  if (a.role == Role::Examinee && !a.profile) f["profile"] = "examinees need a student profile";
  if (a.role == Role::Admin && a.profile) f["profile"] = "admins have no student profile";
  if (a.role == Role::Examinee && a.scope_course_id) f["scope_course_id"] = "only admins are scoped";
  if (a.profile) {
    if (!core::validate_student_number(a.profile->student_number)) {
      f["student_number"] = "format must be YYYY-XXXX";
    }
    if (!a.profile->terms_accepted) f["terms_accepted"] = "terms and conditions must be accepted";
  }
  if (!f.empty()) invalid(std::move(f));

  if (auto it = s.by_username.find(lower(a.username));
      it != s.by_username.end() && it->second != self) {
    throw Error(ErrorCode::DuplicateKey, "username '" + a.username + "' is taken",
                {{"username", "already registered"}});
  }
  if (a.profile) {
    if (auto it = s.by_student_number.find(a.profile->student_number);
        it != s.by_student_number.end() && it->second != self) {
      throw Error(ErrorCode::DuplicateKey,
                  "student number " + a.profile->student_number + " is already registered",
                  {{"student_number", "already registered"}});
    }
    auto course = s.courses.find(a.profile->course_id);
    if (course == s.courses.end()) {
      throw Error(ErrorCode::ForeignKeyMissing, "course does not exist",
                  {{"course_id", "unknown course"}});
    }
    if (a.profile->major_id && !course->second.has_major(*a.profile->major_id)) {
      throw Error(ErrorCode::ForeignKeyMissing, "major is not offered by the course",
                  {{"major_id", "unknown major for this course"}});
    }
  }
  if (a.scope_course_id && !s.courses.count(*a.scope_course_id)) {
    throw Error(ErrorCode::ForeignKeyMissing, "scope course does not exist",
                {{"scope_course_id", "unknown course"}});
  }
}

bool exam_has_attempts(const StoreState& s, ExamId id) {
  auto it = s.attempts_by_exam.find(id);
  return it != s.attempts_by_exam.end() && !it->second.empty();
}

void fsync_dir(const std::filesystem::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (fd >= 0) {
    ::fsync(fd);
    ::close(fd);
  }
}

}  // namespace

std::optional<Table> parse_table(std::string_view name) {
  const std::string n = lower(name);
  if (n == "accounts") return Table::Accounts;
  if (n == "courses") return Table::Courses;
  if (n == "exams") return Table::Exams;
  if (n == "questions") return Table::Questions;
  if (n == "attempts") return Table::Attempts;
  if (n == "announcements") return Table::Announcements;
  return std::nullopt;
}

// ---- lifecycle ------------------------------------------------------------

Store::Store(StoreOptions options)
    : options_(std::move(options)), state_(std::make_unique<StoreState>()) {
  std::error_code ec;
  std::filesystem::create_directories(options_.data_dir, ec);
  if (ec) {
    throw Error(ErrorCode::StorageFailure,
                "cannot create data directory " + options_.data_dir.string() + ": " + ec.message());
  }
  const auto lock_path = options_.data_dir / kLockFile;
  lock_fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (lock_fd_ < 0) {
    throw Error(ErrorCode::StorageFailure, "data directory " + options_.data_dir.string() +
                                               " is not writable: " + std::strerror(errno));
  }
  if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(lock_fd_);
    throw Error(ErrorCode::StorageFailure,
                "data directory " + options_.data_dir.string() + " is in use by another process");
  }
  try {
    load();
  } catch (...) {
    ::close(lock_fd_);
    throw;
  }
}

Store::~Store() {
  journal_.reset();
  if (lock_fd_ >= 0) ::close(lock_fd_);
}

void Store::load() {
  std::uint64_t snapshot_seq = 0;
  const auto snap_path = options_.data_dir / kSnapshotFile;
  if (std::filesystem::exists(snap_path)) {
    std::ifstream in(snap_path);
    json snap;
    try {
      in >> snap;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::StorageFailure, "corrupt snapshot " + snap_path.string() + ": " + e.what());
    }
    auto& s = *state_;
    snapshot_seq = snap.at("seq").get<std::uint64_t>();
    for (const auto& c : snap.at("courses")) apply_record(s, json{{"op", "put_course"}, {"data", c}});
    for (const auto& a : snap.at("accounts")) apply_record(s, json{{"op", "put_account"}, {"data", a}});
    for (const auto& e : snap.at("exams")) {
      auto exam = e.get<Exam>();
      auto ids = exam.question_ids;
      exam.question_ids.clear();
      apply_record(s, json{{"op", "put_exam"}, {"data", exam}});
      s.exams.at(exam.id).question_ids = std::move(ids);
    }
    for (const auto& q : snap.at("questions")) {
      auto question = q.get<Question>();
      s.saw_id(question.id.value);
      s.questions[question.id] = std::move(question);
    }
    for (const auto& a : snap.at("attempts")) apply_record(s, json{{"op", "put_attempt"}, {"data", a}});
    for (const auto& a : snap.at("announcements")) {
      apply_record(s, json{{"op", "put_announcement"}, {"data", a}});
    }
    s.next_id = std::max(s.next_id, snap.at("next_id").get<std::uint64_t>());
  }

  journal_ = std::make_unique<Journal>(options_.data_dir / kJournalFile, options_.sync);
  journal_->set_seq_floor(snapshot_seq);
  for (const auto& rec : journal_->recovered()) {
    if (rec.seq <= snapshot_seq) continue;
    try {
      apply_record(*state_, json::parse(rec.payload));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::StorageFailure,
                  "journal record " + std::to_string(rec.seq) + " is unreadable: " + e.what());
    }
  }
  journal_->release_recovered();
}

void Store::write_snapshot_locked() {
  const auto& s = *state_;
  json snap;
  snap["seq"] = journal_->last_seq();
  snap["next_id"] = s.next_id;
  json& accounts = snap["accounts"] = json::array();
  for (const auto& [id, a] : s.accounts) accounts.push_back(a);
  json& courses = snap["courses"] = json::array();
  for (const auto& [id, c] : s.courses) courses.push_back(c);
  json& exams = snap["exams"] = json::array();
  for (const auto& [id, e] : s.exams) exams.push_back(e);
  json& questions = snap["questions"] = json::array();
  for (const auto& [id, q] : s.questions) questions.push_back(q);
  json& attempts = snap["attempts"] = json::array();
  for (const auto& [id, slot] : s.attempts) attempts.push_back(slot->data);
  json& announcements = snap["announcements"] = json::array();
  for (const auto& [id, a] : s.announcements) announcements.push_back(a);

  const auto final_path = options_.data_dir / kSnapshotFile;
  const auto tmp_path = options_.data_dir / (std::string(kSnapshotFile) + ".tmp");
  const std::string body = snap.dump();
  const int fd = ::open(tmp_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(ErrorCode::StorageFailure, "cannot write snapshot: " + std::string(std::strerror(errno)));
  std::size_t off = 0;
  while (off < body.size()) {
    const ssize_t w = ::write(fd, body.data() + off, body.size() - off);
    if (w < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      throw Error(ErrorCode::StorageFailure, "cannot write snapshot: " + std::string(std::strerror(errno)));
    }
    off += static_cast<std::size_t>(w);
  }
  if (options_.sync) ::fsync(fd);
  ::close(fd);
  std::filesystem::rename(tmp_path, final_path);
  if (options_.sync) fsync_dir(options_.data_dir);
  // Records up to the snapshot's seq are now redundant; replay skips them
  // even if we crash before the reset lands.
  journal_->reset();
}

void Store::compact() {
  std::unique_lock lock(mu_);
  write_snapshot_locked();
}

void Store::maybe_compact() {
  if (options_.snapshot_every == 0) return;
  if (journal_->records_since_reset() < options_.snapshot_every) return;
  std::unique_lock lock(mu_);
  if (journal_->records_since_reset() >= options_.snapshot_every) write_snapshot_locked();
}

std::uint64_t Store::last_seq() const { return journal_->last_seq(); }

bool Store::empty() const {
  std::shared_lock lock(mu_);
  const auto& s = *state_;
  return s.accounts.empty() && s.courses.empty() && s.exams.empty() && s.questions.empty() &&
         s.attempts.empty() && s.announcements.empty();
}

// ---- accounts -------------------------------------------------------------

Account Store::create_account(Account draft, Instant now) {
  {
    std::unique_lock lock(mu_);
    auto& s = *state_;
    check_account(s, draft, std::nullopt);
    draft.id = AccountId{s.take_id()};
    draft.created_at = now;
    commit(*journal_, s, json{{"op", "put_account"}, {"data", draft}});
  }
  maybe_compact();
  return draft;
}

Account Store::set_account_status(AccountId id, AccountStatus status) {
  Account a;
  {
    std::unique_lock lock(mu_);
    auto& s = *state_;
    auto it = s.accounts.find(id);
    if (it == s.accounts.end()) throw Error(ErrorCode::UnknownAccount, "no such account");
    a = it->second;
    if (a.status == status) return a;
    a.status = status;
    commit(*journal_, s, json{{"op", "put_account"}, {"data", a}});
  }
  maybe_compact();
  return a;
}

std::optional<Account> Store::account(AccountId id) const {
  std::shared_lock lock(mu_);
  auto it = state_->accounts.find(id);
  if (it == state_->accounts.end()) return std::nullopt;
  return it->second;
}

std::optional<Account> Store::account_by_username(std::string_view username) const {
  std::shared_lock lock(mu_);
  auto it = state_->by_username.find(lower(username));
  if (it == state_->by_username.end()) return std::nullopt;
  return state_->accounts.at(it->second);
}

std::vector<Account> Store::accounts(std::optional<AccountStatus> status) const {
  std::shared_lock lock(mu_);
  std::vector<Account> out;
  for (const auto& [id, a] : state_->accounts) {
    if (!status || a.status == *status) out.push_back(a);
  }
  return out;
}

void Store::delete_account(AccountId id) {
  {
    std::unique_lock lock(mu_);
    auto& s = *state_;
    if (!s.accounts.count(id)) throw Error(ErrorCode::UnknownAccount, "no such account");
    if (auto it = s.attempts_by_examinee.find(id);
        it != s.attempts_by_examinee.end() && !it->second.empty()) {
      throw Error(ErrorCode::DeleteRestricted, "account has exam attempts");
    }
    commit(*journal_, s, json{{"op", "del_account"}, {"id", id}});
  }
  maybe_compact();
}

// ---- courses --------------------------------------------------------------

namespace {

void check_course_name(const StoreState& s, const std::string& name, std::optional<CourseId> self) {
  if (is_blank(name)) invalid({{"name", "course name is required"}});
  for (const auto& [id, c] : s.courses) {
    if (id != self && lower(trim(c.name)) == lower(trim(name))) {
      throw Error(ErrorCode::DuplicateKey, "course '" + name + "' already exists",
                  {{"name", "already exists"}});
    }
  }
}

void check_major_names(const std::vector<Major>& majors) {
  std::set<std::string> seen;
  for (const auto& m : majors) {
    if (is_blank(m.name)) invalid({{"majors", "major names must not be blank"}});
    if (!seen.insert(lower(trim(m.name))).second) {
      throw Error(ErrorCode::DuplicateKey, "major '" + m.name + "' listed twice",
                  {{"majors", "duplicate major"}});
    }
  }
}

}  // namespace

Course Store::create_course(std::string name, const std::vector<std::string>& majors,
                            std::string created_by, Instant now) {
  Course c;
  {
    std::unique_lock lock(mu_);
    auto& s = *state_;
    name = trim(name);
    check_course_name(s, name, std::nullopt);
    c.name = std::move(name);
    for (const auto& m : majors) c.majors.push_back({MajorId{}, trim(m)});
    check_major_names(c.majors);
    c.id = CourseId{s.take_id()};
    for (auto& m : c.majors) m.id = MajorId{s.take_id()};
    c.created_by = std::move(created_by);
    c.created_at = now;
    commit(*journal_, s, json{{"op", "put_course"}, {"data", c}});
  }
  maybe_compact();
  return c;
}

Course Store::update_course(CourseId id, std::string name, std::vector<Major> majors, Instant now) {
  Course c;
  {
    std::unique_lock lock(mu_);
    auto& s = *state_;
    auto it = s.courses.find(id);
    if (it == s.courses.end()) throw Error(ErrorCode::UnknownCourse, "no such course");
    name = trim(name);
    check_course_name(s, name, id);
    for (auto& m : majors) m.name = trim(m.name);
    check_major_names(majors);
    c = it->second;
    for (const auto& m : majors) {
      if (m.id != MajorId{} && !c.has_major(m.id)) {
        throw Error(ErrorCode::ForeignKeyMissing, "major does not belong to this course",
                    {{"majors", "unknown major id"}});
      }
    }
    for (const auto& old : c.majors) {
      const bool kept = std::any_of(majors.begin(), majors.end(),
                                    [&](const Major& m) { return m.id == old.id; });
      if (kept) continue;
      for (const auto& [eid, e] : s.exams) {
        if (e.major_id == old.id) {
          throw Error(ErrorCode::DeleteRestricted, "major '" + old.name + "' is used by an exam");
        }
      }
      for (const auto& [aid, a] : s.accounts) {
        if (a.profile && a.profile->major_id == old.id) {
          throw Error(ErrorCode::DeleteRestricted, "major '" + old.name + "' has examinees");
        }
      }
    }
    for (auto& m : majors) {
      if (m.id == MajorId{}) m.id = MajorId{s.take_id()};
    }
    c.name = std::move(name);
    c.majors = std::move(majors);
    c.updated_at = now;
    commit(*journal_, s, json{{"op", "put_course"}, {"data", c}});
  }
  maybe_compact();
  return c;
}

std::optional<Course> Store::course(CourseId id) const {
  std::shared_lock lock(mu_);
  auto it = state_->courses.find(id);
  if (it == state_->courses.end()) return std::nullopt;
  return it->second;
}

std::vector<Course> Store::courses() const {
  std::shared_lock lock(mu_);
  std::vector<Course> out;
  for (const auto& [id, c] : state_->courses) out.push_back(c);
  return out;
}

void Store::delete_course(CourseId id) {
  {
    std::unique_lock lock(mu_);
    auto& s = *state_;
    if (!s.courses.count(id)) throw Error(ErrorCode::UnknownCourse, "no such course");
    for (const auto& [eid, e] : s.exams) {
      if (e.course_id == id) throw Error(ErrorCode::DeleteRestricted, "course has exams");
    }
    for (const auto& [aid, a] : s.accounts) {
      if ((a.profile && a.profile->course_id == id) || a.scope_course_id == id) {
        throw Error(ErrorCode::DeleteRestricted, "course has accounts");
      }
    }
    commit(*journal_, s, json{{"op", "del_course"}, {"id", id}});
  }
  maybe_compact();
}

// ---- exams ----------------------------------------------------------------

Exam Store::create_exam(Exam draft, Instant now) {
  {
    std::unique_lock lock(mu_);
    auto& s = *state_;
    draft.name = trim(draft.name);
    validate_exam_fields(draft);
    check_exam_refs(s, draft);
    draft.id = ExamId{s.take_id()};
    draft.question_ids.clear();
    draft.created_at = now;
    draft.updated_at.reset();
    commit(*journal_, s, json{{"op", "put_exam"}, {"data", draft}});
  }
  maybe_compact();
  return draft;
}

Exam Store::update_exam(const Exam& exam, Instant now) {
  Exam e = exam;
  {
    std::unique_lock lock(mu_);
    auto& s = *state_;
    auto it = s.exams.find(exam.id);
    if (it == s.exams.end()) throw Error(ErrorCode::UnknownExam, "no such exam");
    e.name = trim(e.name);
    validate_exam_fields(e);
    check_exam_refs(s, e);
    if (exam_has_attempts(s, e.id) &&
        (e.course_id != it->second.course_id || e.major_id != it->second.major_id)) {
      throw Error(ErrorCode::ExamInUse, "cannot move an exam that has attempts to another program");
    }
    e.question_ids = it->second.question_ids;
    e.created_at = it->second.created_at;
    e.updated_at = now;
    commit(*journal_, s, json{{"op", "put_exam"}, {"data", e}});
  }
  maybe_compact();
  return e;
}

std::optional<Exam> Store::exam(ExamId id) const {
  std::shared_lock lock(mu_);
  auto it = state_->exams.find(id);
  if (it == state_->exams.end()) return std::nullopt;
  return it->second;
}

std::vector<Exam> Store::exams(std::optional<CourseId> course) const {
  std::shared_lock lock(mu_);
  std::vector<Exam> out;
  for (const auto& [id, e] : state_->exams) {
    if (!course || e.course_id == *course) out.push_back(e);
  }
  return out;
}

void Store::delete_exam(ExamId id) {
  {
    std::unique_lock lock(mu_);
    auto& s = *state_;
    if (!s.exams.count(id)) throw Error(ErrorCode::UnknownExam, "no such exam");
    if (auto it = s.attempts_by_exam.find(id); it != s.attempts_by_exam.end()) {
      for (auto aid : it->second) {
        if (s.attempts.at(aid)->data.finalized()) {
          throw Error(ErrorCode::DeleteRestricted, "exam has finalized attempts");
        }
      }
    }
    commit(*journal_, s, json{{"op", "del_exam"}, {"id", id}});
  }
  maybe_compact();
}

// ---- questions ------------------------------------------------------------

Question Store::create_question(Question draft) {
  auto created = create_questions(draft.exam_id, {std::move(draft)});
  return created.front();
}

std::vector<Question> Store::create_questions(ExamId exam, std::vector<Question> drafts) {
  {
    std::unique_lock lock(mu_);
    auto& s = *state_;
    if (!s.exams.count(exam)) {
      throw Error(ErrorCode::ForeignKeyMissing, "exam does not exist", {{"exam_id", "unknown exam"}});
    }
    if (exam_has_attempts(s, exam)) {
      throw Error(ErrorCode::ExamInUse, "exam already has attempts; its questions are frozen");
    }
    for (auto& q : drafts) {
      q.exam_id = exam;
      q = normalized_question(std::move(q));
    }
    for (auto& q : drafts) q.id = QuestionId{s.take_id()};
    if (drafts.size() == 1) {
      commit(*journal_, s, json{{"op", "put_question"}, {"data", drafts.front()}});
    } else if (!drafts.empty()) {
      commit(*journal_, s, json{{"op", "put_questions"}, {"data", drafts}});
    }
  }
  maybe_compact();
  return drafts;
}

Question Store::update_question(const Question& question) {
  Question q;
  {
    std::unique_lock lock(mu_);
    auto& s = *state_;
    auto it = s.questions.find(question.id);
    if (it == s.questions.end()) throw Error(ErrorCode::UnknownQuestion, "no such question");
    if (exam_has_attempts(s, it->second.exam_id)) {
      throw Error(ErrorCode::ExamInUse, "exam already has attempts; its questions are frozen");
    }
    q = question;
    q.exam_id = it->second.exam_id;
    q = normalized_question(std::move(q));
    commit(*journal_, s, json{{"op", "put_question"}, {"data", q}});
  }
  maybe_compact();
  return q;
}

std::optional<Question> Store::question(QuestionId id) const {
  std::shared_lock lock(mu_);
  auto it = state_->questions.find(id);
  if (it == state_->questions.end()) return std::nullopt;
  return it->second;
}

std::vector<Question> Store::questions(ExamId exam) const {
  std::shared_lock lock(mu_);
  std::vector<Question> out;
  auto it = state_->exams.find(exam);
  if (it == state_->exams.end()) return out;
  for (auto qid : it->second.question_ids) out.push_back(state_->questions.at(qid));
  return out;
}

void Store::delete_question(QuestionId id) {
  {
    std::unique_lock lock(mu_);
    auto& s = *state_;
    auto it = s.questions.find(id);
    if (it == s.questions.end()) throw Error(ErrorCode::UnknownQuestion, "no such question");
    if (exam_has_attempts(s, it->second.exam_id)) {
      throw Error(ErrorCode::DeleteRestricted, "exam already has attempts; its questions are frozen");
    }
    commit(*journal_, s, json{{"op", "del_question"}, {"id", id}});
  }
  maybe_compact();
}

// ---- announcements --------------------------------------------------------

Announcement Store::create_announcement(std::string body, std::string author, Instant now) {
  Announcement a;
  {
    std::unique_lock lock(mu_);
    auto& s = *state_;
    if (is_blank(body)) invalid({{"body", "announcement text is required"}});
    a.id = AnnouncementId{s.take_id()};
    a.body = trim(body);
    a.author = std::move(author);
    a.created_at = now;
    commit(*journal_, s, json{{"op", "put_announcement"}, {"data", a}});
  }
  maybe_compact();
  return a;
}

std::vector<Announcement> Store::announcements() const {
  std::shared_lock lock(mu_);
  std::vector<Announcement> out;
  for (const auto& [id, a] : state_->announcements) out.push_back(a);
  std::stable_sort(out.begin(), out.end(), [](const Announcement& a, const Announcement& b) {
    if (a.created_at != b.created_at) return a.created_at > b.created_at;
    return a.id > b.id;
  });
  return out;
}

void Store::delete_announcement(AnnouncementId id) {
  {
    std::unique_lock lock(mu_);
    auto& s = *state_;
    if (!s.announcements.count(id)) {
      throw Error(ErrorCode::UnknownAnnouncement, "no such announcement");
    }
    commit(*journal_, s, json{{"op", "del_announcement"}, {"id", id}});
  }
  maybe_compact();
}

// ---- attempts -------------------------------------------------------------

std::shared_ptr<AttemptSlot> Store::slot(AttemptId id) const {
  auto it = state_->attempts.find(id);
  if (it == state_->attempts.end()) {
    throw Error(ErrorCode::UnknownAttempt, "no such attempt " + std::to_string(id.value));
  }
  return it->second;
}

Attempt Store::create_attempt(ExamId exam_id, AccountId examinee, int attempt_no,
                              std::uint64_t seed, Instant started_at) {
  Attempt a;
  {
    std::unique_lock lock(mu_);
    auto& s = *state_;
    auto exam = s.exams.find(exam_id);
    if (exam == s.exams.end()) throw Error(ErrorCode::UnknownExam, "no such exam");
    auto account = s.accounts.find(examinee);
    if (account == s.accounts.end() || account->second.role != Role::Examinee) {
      throw Error(ErrorCode::UnknownAccount, "no such examinee");
    }
    if (exam->second.question_ids.empty()) {
      throw Error(ErrorCode::DegenerateExam, "exam has no questions yet");
    }
    if (attempt_no != 1 && attempt_no != 2) {
      invalid({{"attempt_no", "attempt number must be 1 or 2"}});
    }
    const Attempt* first = nullptr;
    if (auto it = s.attempts_by_examinee.find(examinee); it != s.attempts_by_examinee.end()) {
      for (auto aid : it->second) {
        const Attempt& other = s.attempts.at(aid)->data;
        if (other.exam_id != exam_id) continue;
        if (other.attempt_no == attempt_no) {
          throw Error(ErrorCode::DuplicateKey, "attempt " + std::to_string(attempt_no) +
                                                   " already exists for this exam");
        }
        if (other.attempt_no == 1) first = &other;
      }
    }
    if (attempt_no == 2 && (!first || first->outcome != Outcome::Failed)) {
      invalid({{"attempt_no", "a retake requires a failed first attempt"}});
    }
    a.id = AttemptId{s.take_id()};
    a.exam_id = exam_id;
    a.examinee_id = examinee;
    a.attempt_no = attempt_no;
    a.seed = seed;
    a.started_at = started_at;
    a.deadline = started_at + std::chrono::minutes{exam->second.duration_minutes};
    commit(*journal_, s, json{{"op", "put_attempt"}, {"data", a}});
  }
  maybe_compact();
  return a;
}

std::optional<Attempt> Store::attempt(AttemptId id) const {
  std::shared_lock lock(mu_);
  auto it = state_->attempts.find(id);
  if (it == state_->attempts.end()) return std::nullopt;
  std::lock_guard slot_lock(it->second->mu);
  return it->second->data;
}

std::vector<Attempt> Store::attempts_for_exam(ExamId exam) const {
  std::shared_lock lock(mu_);
  std::vector<Attempt> out;
  auto it = state_->attempts_by_exam.find(exam);
  if (it == state_->attempts_by_exam.end()) return out;
  for (auto aid : it->second) {
    auto& slot = *state_->attempts.at(aid);
    std::lock_guard slot_lock(slot.mu);
    out.push_back(slot.data);
  }
  return out;
}

std::vector<Attempt> Store::attempts_for_examinee(AccountId examinee) const {
  std::shared_lock lock(mu_);
  std::vector<Attempt> out;
  auto it = state_->attempts_by_examinee.find(examinee);
  if (it == state_->attempts_by_examinee.end()) return out;
  for (auto aid : it->second) {
    auto& slot = *state_->attempts.at(aid);
    std::lock_guard slot_lock(slot.mu);
    out.push_back(slot.data);
  }
  return out;
}

Attempt Store::finalize_slot_locked(AttemptSlot& slot, Instant at) {
  if (slot.data.finalized()) return slot.data;
  const auto& s = *state_;
  const Exam& exam = s.exams.at(slot.data.exam_id);
  core::AnswerMap key;
  for (auto qid : exam.question_ids) key[qid] = s.questions.at(qid).correct_index;

  Attempt a = slot.data;
  const int total = static_cast<int>(key.size());
  a.raw_score = core::grade(a.answers, key);
  a.total_questions = total;
  a.weighted_score = core::weighted_score(a.raw_score, total, exam.weight);
  a.outcome = core::subject_outcome(a.raw_score, total, exam.passing_rate);
  a.submitted_at = std::max(a.started_at, std::min(at, a.deadline));
  commit(*journal_, *state_, json{{"op", "put_attempt"}, {"data", a}});
  return a;
}

void Store::record_answer(AttemptId id, QuestionId question, std::size_t choice, Instant at) {
  bool expired = false;
  {
    std::shared_lock lock(mu_);
    auto s = slot(id);
    std::lock_guard slot_lock(s->mu);
    const Attempt& a = s->data;
    if (a.finalized()) throw Error(ErrorCode::AlreadyFinalized, "attempt is already submitted");
    if (at > a.deadline + options_.grace) {
      finalize_slot_locked(*s, at);
      expired = true;
    } else {
      const Exam& exam = state_->exams.at(a.exam_id);
      if (std::find(exam.question_ids.begin(), exam.question_ids.end(), question) ==
          exam.question_ids.end()) {
        throw Error(ErrorCode::UnknownQuestion, "question is not part of this exam");
      }
      if (choice >= state_->questions.at(question).choices.size()) {
        invalid({{"choice", "choice index out of range"}});
      }
      commit(*journal_, *state_,
             json{{"op", "answer"}, {"attempt", id}, {"question", question}, {"choice", choice}});
    }
  }
  maybe_compact();
  if (expired) throw Error(ErrorCode::Expired, "time is up; the attempt has been submitted");
}

Attempt Store::finalize_attempt(AttemptId id, Instant at) {
  Attempt a;
  {
    std::shared_lock lock(mu_);
    auto s = slot(id);
    std::lock_guard slot_lock(s->mu);
    a = finalize_slot_locked(*s, at);
  }
  maybe_compact();
  return a;
}

std::vector<EligibleExam> Store::eligible_exams(AccountId examinee, Instant now) const {
  std::shared_lock lock(mu_);
  const auto& s = *state_;
  auto acc = s.accounts.find(examinee);
  if (acc == s.accounts.end() || acc->second.role != Role::Examinee || !acc->second.profile) {
    throw Error(ErrorCode::UnknownAccount, "no such examinee");
  }
  if (acc->second.status != AccountStatus::Verified) {
    throw Error(ErrorCode::NotVerified, "examinee is not verified");
  }
  const ExamineeProfile& profile = *acc->second.profile;
  const auto today = std::chrono::sys_days{date_of(now, options_.utc_offset)};

  std::map<ExamId, std::vector<Attempt>> mine;
  if (auto it = s.attempts_by_examinee.find(examinee); it != s.attempts_by_examinee.end()) {
    for (auto aid : it->second) {
      auto& slot = *s.attempts.at(aid);
      std::lock_guard slot_lock(slot.mu);
      mine[slot.data.exam_id].push_back(slot.data);
    }
  }

  std::vector<EligibleExam> out;
  for (const auto& [id, exam] : s.exams) {
    if (exam.course_id != profile.course_id) continue;
    if (exam.major_id && profile.major_id && exam.major_id != profile.major_id) continue;

    EligibleExam row{exam, ExamStatus::Locked, std::nullopt};
    const Attempt* first = nullptr;
    const Attempt* second = nullptr;
    if (auto it = mine.find(id); it != mine.end()) {
      for (const auto& a : it->second) (a.attempt_no == 1 ? first : second) = &a;
    }
    if (second) row.latest_attempt = *second;
    else if (first) row.latest_attempt = *first;

    if (!first) {
      const bool open = !exam.question_ids.empty() && today >= std::chrono::sys_days{exam.exam_date};
      row.status = open ? ExamStatus::TakeExam : ExamStatus::Locked;
    } else if (!first->finalized()) {
      row.status = ExamStatus::TakeExam;
    } else if (second) {
      row.status = second->finalized() ? ExamStatus::ViewCertificate : ExamStatus::Retake;
    } else if (first->outcome == Outcome::Failed && exam.reexam_date &&
               today >= std::chrono::sys_days{*exam.reexam_date}) {
      row.status = ExamStatus::Retake;
    } else {
      row.status = ExamStatus::ViewCertificate;
    }
    out.push_back(std::move(row));
  }
  return out;
}

// ---- CSV export -----------------------------------------------------------

std::string Store::export_csv(Table table) const {
  std::shared_lock lock(mu_);
  const auto& s = *state_;
  csv::Writer w;
  auto opt_date = [](const std::optional<Date>& d) { return d ? format_date(*d) : std::string{}; };
  auto opt_instant = [](const std::optional<Instant>& t) {
    return t ? format_instant(*t) : std::string{};
  };
  auto id = [](auto v) { return std::to_string(v.value); };

  switch (table) {
    case Table::Accounts:
      w.row({"id", "username", "password_digest", "role", "status", "scope_course_id",
             "student_number", "last_name", "first_name", "middle_name", "address",
             "contact_number", "birthdate", "course_id", "major_id", "terms_accepted",
             "created_at"});
      for (const auto& [k, a] : s.accounts) {
        const auto* p = a.profile ? &*a.profile : nullptr;
        w.row({id(a.id), a.username, a.password_digest, std::string(to_string(a.role)),
               std::string(to_string(a.status)), a.scope_course_id ? id(*a.scope_course_id) : "",
               p ? p->student_number : "", p ? p->last_name : "", p ? p->first_name : "",
               p ? p->middle_name : "", p ? p->address : "", p ? p->contact_number : "",
               p ? format_date(p->birthdate) : "", p ? id(p->course_id) : "",
               p && p->major_id ? id(*p->major_id) : "",
               p ? (p->terms_accepted ? "true" : "false") : "", format_instant(a.created_at)});
      }
      break;
    case Table::Courses:
      w.row({"id", "name", "majors", "created_by", "created_at", "updated_at"});
      for (const auto& [k, c] : s.courses) {
        std::string majors;
        for (const auto& m : c.majors) {
          if (!majors.empty()) majors += ";";
          majors += id(m.id) + ":" + m.name;
        }
        w.row({id(c.id), c.name, majors, c.created_by, format_instant(c.created_at),
               opt_instant(c.updated_at)});
      }
      break;
    case Table::Exams:
      w.row({"id", "course_id", "major_id", "name", "instructions", "exam_date", "reexam_date",
             "duration_minutes", "passing_rate", "weight", "question_count", "created_at",
             "updated_at"});
      for (const auto& [k, e] : s.exams) {
        w.row({id(e.id), id(e.course_id), e.major_id ? id(*e.major_id) : "", e.name,
               e.instructions, format_date(e.exam_date), opt_date(e.reexam_date),
               std::to_string(e.duration_minutes), e.passing_rate.str(), e.weight.str(),
               std::to_string(e.question_ids.size()), format_instant(e.created_at),
               opt_instant(e.updated_at)});
      }
      break;
    case Table::Questions:
      w.row({"id", "exam_id", "position", "stem", "choice_a", "choice_b", "choice_c", "choice_d",
             "choice_e", "correct_index", "category"});
      for (const auto& [eid, e] : s.exams) {
        for (std::size_t pos = 0; pos < e.question_ids.size(); ++pos) {
          const auto& q = s.questions.at(e.question_ids[pos]);
          csv::Row row{id(q.id), id(q.exam_id), std::to_string(pos + 1), q.stem};
          for (std::size_t c = 0; c < 5; ++c) row.push_back(c < q.choices.size() ? q.choices[c] : "");
          row.push_back(std::to_string(q.correct_index));
          row.push_back(q.category.value_or(""));
          w.row(row);
        }
      }
      break;
    case Table::Attempts:
      w.row({"id", "exam_id", "examinee_id", "attempt_no", "seed", "started_at", "deadline",
             "submitted_at", "answers", "raw_score", "total_questions", "weighted_score",
             "outcome"});
      for (const auto& [k, slot] : s.attempts) {
        std::lock_guard slot_lock(slot->mu);
        const auto& a = slot->data;
        std::string answers;
        for (const auto& [q, c] : a.answers) {
          if (!answers.empty()) answers += ";";
          answers += id(q) + "=" + std::to_string(c);
        }
        w.row({id(a.id), id(a.exam_id), id(a.examinee_id), std::to_string(a.attempt_no),
               std::to_string(a.seed), format_instant(a.started_at), format_instant(a.deadline),
               opt_instant(a.submitted_at), answers, std::to_string(a.raw_score),
               std::to_string(a.total_questions), a.weighted_score.str(),
               std::string(to_string(a.outcome))});
      }
      break;
    case Table::Announcements:
      w.row({"id", "body", "author", "created_at"});
      for (const auto& [k, a] : s.announcements) {
        w.row({id(a.id), a.body, a.author, format_instant(a.created_at)});
      }
      break;
  }
  return w.take();
}

}  // namespace mockboard
