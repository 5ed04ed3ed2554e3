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

#include "mockboard/service.hpp"

#include <algorithm>
#include <cstdio>

#include "mockboard/error.hpp"
#include "mockboard/exam_core.hpp"
#include "mockboard/password.hpp"

namespace mockboard {

std::string format_time_limit(int minutes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%d:%02d", minutes / 60, minutes % 60);
  return buf;
}

ExamService::ExamService(Store& store, const Clock& clock, ServiceOptions options)
    : store_(store),
      clock_(clock),
      options_(options),
      dummy_digest_(crypto::hash_password(crypto::random_token())) {}

// ---- authorization helpers --------------------------------------------------

void ExamService::require_admin(const Session& s) const {
  if (s.role != Role::Admin) throw Error(ErrorCode::Forbidden, "administrator access required");
}

void ExamService::require_examinee(const Session& s) const {
  if (s.role != Role::Examinee) throw Error(ErrorCode::Forbidden, "examinee access required");
}

void ExamService::require_scope(const Session& s, CourseId course) const {
  require_admin(s);
  if (s.scope_course_id && *s.scope_course_id != course) {
    throw Error(ErrorCode::Forbidden, "outside this administrator's program");
  }
}

Exam ExamService::scoped_exam(const Session& s, ExamId id) const {
  require_admin(s);
  auto exam = store_.exam(id);
  if (!exam) throw Error(ErrorCode::UnknownExam, "no such exam");
  require_scope(s, exam->course_id);
  return *exam;
}

Attempt ExamService::owned_attempt(const Session& s, AttemptId id) const {
  require_examinee(s);
  auto a = store_.attempt(id);
  if (!a) throw Error(ErrorCode::UnknownAttempt, "no such attempt");
  if (a->examinee_id != s.account_id) throw Error(ErrorCode::Forbidden, "not your attempt");
  return *a;
}

// ---- authentication -------------------------------------------------------

Account ExamService::register_examinee(const Registration& form) {
  FieldErrors f;
  auto required = [&](const std::string& value, const char* field, const char* label) {
    if (is_blank(value)) f[field] = std::string(label) + " is required";
  };
  required(form.username, "username", "username");
  required(form.last_name, "last_name", "last name");
  required(form.first_name, "first_name", "first name");
  required(form.middle_name, "middle_name", "middle name");
  required(form.address, "address", "address");
  required(form.contact_number, "contact_number", "contact number");
  if (form.password.size() < kMinPasswordLength) {
    f["password"] = "password must have at least " + std::to_string(kMinPasswordLength) +
                    " characters";
  }
  if (!core::validate_student_number(form.student_number)) {
    f["student_number"] = "format must be YYYY-XXXX";
  }
  auto birthdate = parse_date(form.birthdate);
  if (!birthdate) f["birthdate"] = "birthdate must be a date (YYYY-MM-DD)";
  if (!form.terms_accepted) f["terms_accepted"] = "you must agree to the terms and conditions";

  std::optional<Course> course;
  if (!form.course_id) {
    f["course_id"] = "select a course";
  } else {
    course = store_.course(*form.course_id);
    if (!course) f["course_id"] = "unknown course";
  }
  if (course) {
    if (course->majors.empty() && form.major_id) {
      f["major_id"] = "this course has no majors";
    } else if (!course->majors.empty()) {
      if (!form.major_id) f["major_id"] = "select a major";
      else if (!course->has_major(*form.major_id)) f["major_id"] = "unknown major for this course";
    }
  }
  if (!f.empty()) {
    throw Error(ErrorCode::ValidationFailed, "registration form has errors", std::move(f));
  }

  Account a;
  a.username = form.username;
  a.password_digest = crypto::hash_password(form.password);
  a.role = Role::Examinee;
  a.status = AccountStatus::Pending;
  ExamineeProfile p;
  p.student_number = form.student_number;
  p.last_name = form.last_name;
  p.first_name = form.first_name;
  p.middle_name = form.middle_name;
  p.address = form.address;
  p.contact_number = form.contact_number;
  p.birthdate = *birthdate;
  p.course_id = *form.course_id;
  p.major_id = form.major_id;
  p.terms_accepted = true;
  a.profile = std::move(p);
  return store_.create_account(std::move(a), clock_.now());
}

Session ExamService::login(const std::string& username, const std::string& password) {
  auto account = store_.account_by_username(username);
  if (!account) {
    // Same work as a real check so timing does not reveal unknown users.
    crypto::verify_password(password, dummy_digest_);
    throw Error(ErrorCode::BadCredentials, "invalid username or password");
  }
  if (!crypto::verify_password(password, account->password_digest)) {
    throw Error(ErrorCode::BadCredentials, "invalid username or password");
  }
  if (account->status == AccountStatus::Pending) {
    throw Error(ErrorCode::AwaitingVerification,
                "your registration is waiting for an administrator's verification");
  }
  if (account->status == AccountStatus::Disabled) {
    throw Error(ErrorCode::Disabled, "this account has been disabled");
  }
  const Instant now = clock_.now();
  Session s;
  s.token = crypto::random_token();
  s.account_id = account->id;
  s.username = account->username;
  s.role = account->role;
  s.scope_course_id = account->scope_course_id;
  s.issued_at = now;
  s.expires_at = now + options_.token_ttl;

  std::lock_guard lock(sessions_mu_);
  std::erase_if(sessions_, [&](const auto& kv) { return kv.second.expires_at <= now; });
  sessions_[s.token] = s;
  return s;
}

void ExamService::logout(const std::string& token) {
  std::lock_guard lock(sessions_mu_);
  sessions_.erase(token);
}

Session ExamService::authenticate(const std::string& token) {
  Session s;
  {
    std::lock_guard lock(sessions_mu_);
    auto it = sessions_.find(token);
    if (it == sessions_.end()) throw Error(ErrorCode::Unauthorized, "missing or unknown token");
    if (it->second.expires_at <= clock_.now()) {
      sessions_.erase(it);
      throw Error(ErrorCode::Unauthorized, "session expired; log in again");
    }
    s = it->second;
  }
  auto account = store_.account(s.account_id);
  if (!account || account->status != AccountStatus::Verified) {
    logout(token);
    throw Error(ErrorCode::Unauthorized, "account is no longer active");
  }
  s.scope_course_id = account->scope_course_id;
  return s;
}

// ---- examinee flow --------------------------------------------------------

void ExamService::finalize_expired(AccountId examinee, Instant now) {
  const auto grace = store_.options().grace;
  for (const auto& a : store_.attempts_for_examinee(examinee)) {
    if (!a.finalized() && now > a.deadline + grace) store_.finalize_attempt(a.id, now);
  }
}

Dashboard ExamService::dashboard(const Session& s) {
  require_examinee(s);
  const Instant now = clock_.now();
  finalize_expired(s.account_id, now);
  auto account = store_.account(s.account_id);
  if (!account || !account->profile) throw Error(ErrorCode::UnknownExaminee, "no such examinee");

  Dashboard d;
  d.examinee_id = s.account_id;
  d.name = account->profile->display_name();
  d.student_number = account->profile->student_number;
  if (auto course = store_.course(account->profile->course_id)) {
    d.course_name = course->name;
    for (const auto& m : course->majors) {
      if (account->profile->major_id == m.id) d.major_name = m.name;
    }
  }
  for (auto& row : store_.eligible_exams(s.account_id, now)) {
    DashboardRow r;
    r.exam_id = row.exam.id;
    r.name = row.exam.name;
    r.duration_minutes = row.exam.duration_minutes;
    r.passing_rate = row.exam.passing_rate;
    r.weight = row.exam.weight;
    r.exam_date = row.exam.exam_date;
    r.reexam_date = row.exam.reexam_date;
    r.total_questions = row.exam.question_ids.size();
    r.status = row.status;
    if (row.latest_attempt) r.attempt_id = row.latest_attempt->id;
    d.exams.push_back(std::move(r));
  }
  d.announcements = store_.announcements();
  return d;
}

AttemptView ExamService::make_view(const Attempt& a, Instant now) const {
  auto exam = store_.exam(a.exam_id);
  if (!exam) throw Error(ErrorCode::UnknownExam, "exam no longer exists");
  const auto questions = store_.questions(a.exam_id);

  AttemptView v;
  v.attempt_id = a.id;
  v.exam_id = a.exam_id;
  v.exam_name = exam->name;
  v.instructions = exam->instructions;
  v.attempt_no = a.attempt_no;
  v.duration_minutes = exam->duration_minutes;
  v.started_at = a.started_at;
  v.deadline = a.deadline;
  v.remaining_seconds = core::remaining_seconds(std::max(now, a.started_at), a.started_at,
                                                exam->duration_minutes);

  std::vector<std::size_t> counts;
  counts.reserve(questions.size());
  for (const auto& q : questions) counts.push_back(q.choices.size());
  const auto order = core::presentation_order(counts, a.seed);

  for (std::size_t d = 0; d < order.question_order.size(); ++d) {
    const std::size_t qi = order.question_order[d];
    const Question& q = questions[qi];
    PresentedQuestion pq;
    pq.question_id = q.id;
    pq.number = d + 1;
    pq.stem = q.stem;
    pq.category = q.category;
    pq.choice_order = order.choice_order[qi];
    for (std::size_t authored : pq.choice_order) pq.choices.push_back(q.choices[authored]);
    if (auto it = a.answers.find(q.id); it != a.answers.end()) pq.selected = it->second;
    v.questions.push_back(std::move(pq));
  }
  return v;
}

ResultView ExamService::make_result(const Attempt& a) const {
  auto exam = store_.exam(a.exam_id);
  if (!exam) throw Error(ErrorCode::UnknownExam, "exam no longer exists");
  ResultView r;
  r.attempt_id = a.id;
  r.exam_id = a.exam_id;
  r.exam_name = exam->name;
  r.attempt_no = a.attempt_no;
  r.raw = a.raw_score;
  r.total = a.total_questions;
  r.answered = static_cast<int>(a.answers.size());
  r.weighted = a.weighted_score;
  r.weight = exam->weight;
  r.passing_rate = exam->passing_rate;
  r.outcome = a.outcome;
  r.started_at = a.started_at;
  r.submitted_at = a.submitted_at.value_or(a.started_at);
  return r;
}

AttemptView ExamService::start_attempt(const Session& s, ExamId exam_id) {
  require_examinee(s);
  const Instant now = clock_.now();
  finalize_expired(s.account_id, now);
  if (!store_.exam(exam_id)) throw Error(ErrorCode::UnknownExam, "no such exam");

  const auto rows = store_.eligible_exams(s.account_id, now);
  auto row = std::find_if(rows.begin(), rows.end(),
                          [&](const EligibleExam& r) { return r.exam.id == exam_id; });
  if (row == rows.end()) throw Error(ErrorCode::Forbidden, "this exam is not offered to your program");

  switch (row->status) {
    case ExamStatus::Locked:
      throw Error(ErrorCode::NotOpen, "this exam opens on " + format_date(row->exam.exam_date));
    case ExamStatus::ViewCertificate:
      throw Error(ErrorCode::AlreadyTaken, "this exam has already been taken");
    case ExamStatus::TakeExam:
    case ExamStatus::Retake:
      break;
  }
  const int attempt_no = row->status == ExamStatus::Retake ? 2 : 1;
  if (row->latest_attempt && !row->latest_attempt->finalized() &&
      row->latest_attempt->attempt_no == attempt_no) {
    return make_view(*row->latest_attempt, now);  // resume
  }
  try {
    auto a = store_.create_attempt(exam_id, s.account_id, attempt_no, crypto::random_u64(), now);
    return make_view(a, now);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DuplicateKey) throw;
    // A concurrent start won the race; resume that attempt.
    for (const auto& a : store_.attempts_for_examinee(s.account_id)) {
      if (a.exam_id == exam_id && a.attempt_no == attempt_no && !a.finalized()) {
        return make_view(a, now);
      }
    }
    throw Error(ErrorCode::AlreadyTaken, "this exam has already been taken");
  }
}

AttemptView ExamService::attempt_view(const Session& s, AttemptId id) {
  const Attempt a = owned_attempt(s, id);
  const Instant now = clock_.now();
  if (a.finalized()) throw Error(ErrorCode::AlreadyFinalized, "attempt is already submitted");
  if (now > a.deadline + store_.options().grace) {
    store_.finalize_attempt(id, now);
    throw Error(ErrorCode::Expired, "time is up; the attempt has been submitted");
  }
  return make_view(a, now);
}

AnswerAck ExamService::record_answer(const Session& s, AttemptId id, QuestionId question,
                                     std::size_t choice) {
  const Attempt a = owned_attempt(s, id);
  const Instant now = clock_.now();
  store_.record_answer(id, question, choice, now);
  auto exam = store_.exam(a.exam_id);
  AnswerAck ack;
  ack.attempt_id = id;
  ack.question_id = question;
  ack.choice = choice;
  ack.deadline = a.deadline;
  ack.remaining_seconds =
      core::remaining_seconds(std::max(now, a.started_at), a.started_at, exam->duration_minutes);
  return ack;
}

ResultView ExamService::submit_attempt(const Session& s, AttemptId id) {
  owned_attempt(s, id);
  return make_result(store_.finalize_attempt(id, clock_.now()));
}

ResultView ExamService::result(const Session& s, AttemptId id) {
  Attempt a = owned_attempt(s, id);
  if (!a.finalized()) {
    const Instant now = clock_.now();
    if (now <= a.deadline + store_.options().grace) {
      throw Error(ErrorCode::NotFinalized, "attempt is still in progress");
    }
    a = store_.finalize_attempt(id, now);
  }
  return make_result(a);
}

reporting::Certificate ExamService::certificate(const Session& s,
                                                std::optional<AccountId> examinee) {
  AccountId target = s.account_id;
  if (s.role == Role::Admin) {
    if (!examinee) {
      throw Error(ErrorCode::ValidationFailed, "examinee_id is required",
                  {{"examinee_id", "required for administrators"}});
    }
    auto acc = store_.account(*examinee);
    if (!acc || !acc->profile) throw Error(ErrorCode::UnknownExaminee, "no such examinee");
    require_scope(s, acc->profile->course_id);
    target = *examinee;
  } else if (examinee && *examinee != s.account_id) {
    throw Error(ErrorCode::Forbidden, "examinees may only view their own certificate");
  }
  const Instant now = clock_.now();
  finalize_expired(target, now);
  return reporting::build_certificate(store_, target, options_.overall_threshold, now);
}

// ---- shared ----------------------------------------------------------------

std::vector<Course> ExamService::list_courses() const { return store_.courses(); }

std::vector<Announcement> ExamService::list_announcements() const {
  return store_.announcements();
}

// ---- admin: courses ---------------------------------------------------------

Course ExamService::create_course(const Session& s, const std::string& name,
                                  const std::vector<std::string>& majors) {
  require_admin(s);
  if (s.scope_course_id) {
    throw Error(ErrorCode::Forbidden, "program administrators cannot create programs");
  }
  return store_.create_course(name, majors, s.username, clock_.now());
}

Course ExamService::update_course(const Session& s, CourseId id, const std::string& name,
                                  const std::vector<Major>& majors) {
  require_scope(s, id);
  return store_.update_course(id, name, majors, clock_.now());
}

void ExamService::delete_course(const Session& s, CourseId id) {
  require_admin(s);
  if (s.scope_course_id) {
    throw Error(ErrorCode::Forbidden, "program administrators cannot delete programs");
  }
  store_.delete_course(id);
}

// ---- admin: exams ------------------------------------------------------------

std::vector<Exam> ExamService::list_exams(const Session& s, std::optional<CourseId> course) {
  require_admin(s);
  if (s.scope_course_id) {
    if (course && *course != *s.scope_course_id) {
      throw Error(ErrorCode::Forbidden, "outside this administrator's program");
    }
    course = s.scope_course_id;
  }
  return store_.exams(course);
}

Exam ExamService::get_exam(const Session& s, ExamId id) { return scoped_exam(s, id); }

Exam ExamService::exam_from_input(const ExamInput& in, std::optional<ExamId> existing) const {
  FieldErrors f = in.field_errors;
  if (!in.course_id && !f.count("course_id")) f["course_id"] = "select a course";
  if ((!in.name || is_blank(*in.name)) && !f.count("name")) f["name"] = "exam name is required";
  if (!in.exam_date && !f.count("exam_date")) f["exam_date"] = "examination date is required";
  if (!in.duration_minutes && !f.count("duration_minutes")) {
    f["duration_minutes"] = "time limit is required";
  }
  if (!in.passing_rate && !f.count("passing_rate")) f["passing_rate"] = "passing rate is required";

  Exam e;
  if (in.course_id) e.course_id = *in.course_id;
  e.major_id = in.major_id;
  if (in.name) e.name = *in.name;
  e.instructions = in.instructions;
  if (in.exam_date) e.exam_date = *in.exam_date;
  e.reexam_date = in.reexam_date;
  if (in.duration_minutes) e.duration_minutes = *in.duration_minutes;
  if (in.passing_rate) e.passing_rate = *in.passing_rate;

  if (in.weight) {
    e.weight = *in.weight;
  } else if (in.course_id && !f.count("weight")) {
    bool others = false;
    for (const auto& other : store_.exams(*in.course_id)) {
      if (other.id != existing) others = true;
    }
    if (others) f["weight"] = "weight is required when the course has several exams";
    else e.weight = Percent::whole(100);
  }
  if (!f.empty()) throw Error(ErrorCode::ValidationFailed, "exam form has errors", std::move(f));
  return e;
}

std::vector<std::string> ExamService::weight_warnings(const Exam& exam) const {
  std::int64_t total = 0;
  for (const auto& e : store_.exams(exam.course_id)) total += e.weight.hundredths();
  std::vector<std::string> warnings;
  if (total > Percent::whole(100).hundredths()) {
    warnings.push_back("exam weights for this course add up to " +
                       Percent::from_hundredths(total).compact() + "%, more than 100%");
  }
  return warnings;
}

ExamResult ExamService::create_exam(const Session& s, const ExamInput& input) {
  require_admin(s);
  if (input.course_id) require_scope(s, *input.course_id);
  Exam e = exam_from_input(input, std::nullopt);
  ExamResult r{store_.create_exam(std::move(e), clock_.now()), {}};
  r.warnings = weight_warnings(r.exam);
  return r;
}

ExamResult ExamService::update_exam(const Session& s, ExamId id, const ExamInput& input) {
  scoped_exam(s, id);
  if (input.course_id) require_scope(s, *input.course_id);
  Exam e = exam_from_input(input, id);
  e.id = id;
  ExamResult r{store_.update_exam(e, clock_.now()), {}};
  r.warnings = weight_warnings(r.exam);
  return r;
}

void ExamService::delete_exam(const Session& s, ExamId id) {
  scoped_exam(s, id);
  store_.delete_exam(id);
}

// ---- admin: questions --------------------------------------------------------

namespace {

Question question_from_input(const QuestionInput& in, ExamId exam) {
  if (!in.correct_index) {
    throw Error(ErrorCode::ValidationFailed, "question has errors",
                {{"correct_index", "mark the correct answer"}});
  }
  Question q;
  q.exam_id = exam;
  q.stem = in.stem;
  q.choices = in.choices;
  q.correct_index = *in.correct_index;
  q.category = in.category;
  return q;
}

}  // namespace

std::vector<Question> ExamService::list_questions(const Session& s, ExamId exam) {
  scoped_exam(s, exam);
  return store_.questions(exam);
}

Question ExamService::create_question(const Session& s, ExamId exam, const QuestionInput& input) {
  scoped_exam(s, exam);
  return store_.create_question(question_from_input(input, exam));
}

Question ExamService::update_question(const Session& s, ExamId exam, QuestionId id,
                                      const QuestionInput& input) {
  scoped_exam(s, exam);
  auto existing = store_.question(id);
  if (!existing || existing->exam_id != exam) {
    throw Error(ErrorCode::UnknownQuestion, "no such question in this exam");
  }
  Question q = question_from_input(input, exam);
  q.id = id;
  return store_.update_question(q);
}

void ExamService::delete_question(const Session& s, ExamId exam, QuestionId id) {
  scoped_exam(s, exam);
  auto existing = store_.question(id);
  if (!existing || existing->exam_id != exam) {
    throw Error(ErrorCode::UnknownQuestion, "no such question in this exam");
  }
  store_.delete_question(id);
}

// ---- admin: accounts ---------------------------------------------------------

std::vector<Account> ExamService::list_accounts(const Session& s,
                                                std::optional<AccountStatus> status) {
  require_admin(s);
  auto all = store_.accounts(status);
  if (s.scope_course_id) {
    std::erase_if(all, [&](const Account& a) {
      return !a.profile || a.profile->course_id != *s.scope_course_id;
    });
  }
  return all;
}

Account ExamService::verify_examinee(const Session& s, AccountId id) {
  require_admin(s);
  auto acc = store_.account(id);
  if (!acc) throw Error(ErrorCode::UnknownAccount, "no such account");
  if (acc->role != Role::Examinee || !acc->profile) {
    throw Error(ErrorCode::ValidationFailed, "only examinee registrations are verified",
                {{"account_id", "not an examinee"}});
  }
  require_scope(s, acc->profile->course_id);
  return store_.set_account_status(id, AccountStatus::Verified);
}

Account ExamService::disable_account(const Session& s, AccountId id) {
  require_admin(s);
  auto acc = store_.account(id);
  if (!acc) throw Error(ErrorCode::UnknownAccount, "no such account");
  if (acc->id == s.account_id) {
    throw Error(ErrorCode::ValidationFailed, "cannot disable your own account",
                {{"account_id", "self"}});
  }
  if (acc->profile) require_scope(s, acc->profile->course_id);
  else if (s.scope_course_id) throw Error(ErrorCode::Forbidden, "outside this administrator's program");
  auto updated = store_.set_account_status(id, AccountStatus::Disabled);
  std::lock_guard lock(sessions_mu_);
  std::erase_if(sessions_, [&](const auto& kv) { return kv.second.account_id == id; });
  return updated;
}

// ---- admin: announcements & reports -----------------------------------------

Announcement ExamService::post_announcement(const Session& s, const std::string& body) {
  require_admin(s);
  return store_.create_announcement(body, s.username, clock_.now());
}

void ExamService::delete_announcement(const Session& s, AnnouncementId id) {
  require_admin(s);
  store_.delete_announcement(id);
}

reporting::GradeReport ExamService::grade_report(const Session& s, ExamId exam) {
  scoped_exam(s, exam);
  return reporting::grade_report(store_, exam);
}

reporting::ItemAnalysisReport ExamService::item_analysis(const Session& s, ExamId exam) {
  scoped_exam(s, exam);
  return reporting::item_analysis_report(store_, exam);
}

}  // namespace mockboard
