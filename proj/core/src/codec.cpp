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

#include "codec.hpp"

#include "mockboard/error.hpp"

namespace mockboard {

using nlohmann::json;

namespace codec {

json instant(Instant t) { return format_instant(t); }

Instant instant(const json& j) {
  auto t = parse_instant(j.get<std::string>());
  if (!t) throw Error(ErrorCode::StorageFailure, "bad instant in store: " + j.dump());
  return *t;
}

json date(Date d) { return format_date(d); }

Date date(const json& j) {
  auto d = parse_date(j.get<std::string>());
  if (!d) throw Error(ErrorCode::StorageFailure, "bad date in store: " + j.dump());
  return *d;
}

}  // namespace codec

namespace {

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
std::optional<T> get_optional(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

std::optional<Instant> get_optional_instant(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return codec::instant(*it);
}

}  // namespace

void to_json(json& j, const ExamineeProfile& p) {
  j = json{{"student_number", p.student_number},
           {"last_name", p.last_name},
           {"first_name", p.first_name},
           {"middle_name", p.middle_name},
           {"address", p.address},
           {"contact_number", p.contact_number},
           {"birthdate", codec::date(p.birthdate)},
           {"course_id", p.course_id},
           {"terms_accepted", p.terms_accepted}};
  put_optional(j, "major_id", p.major_id);
}

void from_json(const json& j, ExamineeProfile& p) {
  p.student_number = j.at("student_number").get<std::string>();
  p.last_name = j.at("last_name").get<std::string>();
  p.first_name = j.at("first_name").get<std::string>();
  p.middle_name = j.at("middle_name").get<std::string>();
  p.address = j.at("address").get<std::string>();
  p.contact_number = j.at("contact_number").get<std::string>();
  p.birthdate = codec::date(j.at("birthdate"));
  p.course_id = j.at("course_id").get<CourseId>();
  p.major_id = get_optional<MajorId>(j, "major_id");
  p.terms_accepted = j.at("terms_accepted").get<bool>();
}

void to_json(json& j, const Account& a) {
  j = json{{"id", a.id},
           {"username", a.username},
           {"password_digest", a.password_digest},
           {"role", to_string(a.role)},
           {"status", to_string(a.status)},
           {"created_at", codec::instant(a.created_at)}};
  put_optional(j, "scope_course_id", a.scope_course_id);
  put_optional(j, "profile", a.profile);
}

void from_json(const json& j, Account& a) {
  a.id = j.at("id").get<AccountId>();
  a.username = j.at("username").get<std::string>();
  a.password_digest = j.at("password_digest").get<std::string>();
  a.role = parse_role(j.at("role").get<std::string>()).value();
  a.status = parse_account_status(j.at("status").get<std::string>()).value();
  a.created_at = codec::instant(j.at("created_at"));
  a.scope_course_id = get_optional<CourseId>(j, "scope_course_id");
  a.profile = get_optional<ExamineeProfile>(j, "profile");
}

void to_json(json& j, const Course& c) {
  json majors = json::array();
  for (const auto& m : c.majors) majors.push_back({{"id", m.id}, {"name", m.name}});
  j = json{{"id", c.id},
           {"name", c.name},
           {"majors", std::move(majors)},
           {"created_by", c.created_by},
           {"created_at", codec::instant(c.created_at)}};
  if (c.updated_at) j["updated_at"] = codec::instant(*c.updated_at);
}

void from_json(const json& j, Course& c) {
  c.id = j.at("id").get<CourseId>();
  c.name = j.at("name").get<std::string>();
  c.majors.clear();
  for (const auto& m : j.at("majors")) {
    c.majors.push_back({m.at("id").get<MajorId>(), m.at("name").get<std::string>()});
  }
  c.created_by = j.at("created_by").get<std::string>();
  c.created_at = codec::instant(j.at("created_at"));
  c.updated_at = get_optional_instant(j, "updated_at");
}

void to_json(json& j, const Exam& e) {
  j = json{{"id", e.id},
           {"course_id", e.course_id},
           {"name", e.name},
           {"instructions", e.instructions},
           {"exam_date", codec::date(e.exam_date)},
           {"duration_minutes", e.duration_minutes},
           {"passing_rate", e.passing_rate.hundredths()},
           {"weight", e.weight.hundredths()},
           {"question_ids", e.question_ids},
           {"created_at", codec::instant(e.created_at)}};
  put_optional(j, "major_id", e.major_id);
  if (e.reexam_date) j["reexam_date"] = codec::date(*e.reexam_date);
  if (e.updated_at) j["updated_at"] = codec::instant(*e.updated_at);
}

void from_json(const json& j, Exam& e) {
  e.id = j.at("id").get<ExamId>();
  e.course_id = j.at("course_id").get<CourseId>();
  e.major_id = get_optional<MajorId>(j, "major_id");
  e.name = j.at("name").get<std::string>();
  e.instructions = j.at("instructions").get<std::string>();
  e.exam_date = codec::date(j.at("exam_date"));
  e.reexam_date = std::nullopt;
  if (auto it = j.find("reexam_date"); it != j.end()) e.reexam_date = codec::date(*it);
  e.duration_minutes = j.at("duration_minutes").get<int>();
  e.passing_rate = Percent::from_hundredths(j.at("passing_rate").get<std::int64_t>());
  e.weight = Percent::from_hundredths(j.at("weight").get<std::int64_t>());
  e.question_ids = j.at("question_ids").get<std::vector<QuestionId>>();
  e.created_at = codec::instant(j.at("created_at"));
  e.updated_at = get_optional_instant(j, "updated_at");
}

void to_json(json& j, const Question& q) {
  j = json{{"id", q.id},
           {"exam_id", q.exam_id},
           {"stem", q.stem},
           {"choices", q.choices},
           {"correct_index", q.correct_index}};
  put_optional(j, "category", q.category);
}

void from_json(const json& j, Question& q) {
  q.id = j.at("id").get<QuestionId>();
  q.exam_id = j.at("exam_id").get<ExamId>();
  q.stem = j.at("stem").get<std::string>();
  q.choices = j.at("choices").get<std::vector<std::string>>();
  q.correct_index = j.at("correct_index").get<std::size_t>();
  q.category = get_optional<std::string>(j, "category");
}

void to_json(json& j, const Attempt& a) {
  json answers = json::array();
  for (const auto& [q, c] : a.answers) answers.push_back({q.value, c});
  j = json{{"id", a.id},
           {"exam_id", a.exam_id},
           {"examinee_id", a.examinee_id},
           {"attempt_no", a.attempt_no},
           {"seed", a.seed},
           {"started_at", codec::instant(a.started_at)},
           {"deadline", codec::instant(a.deadline)},
           {"answers", std::move(answers)},
           {"raw_score", a.raw_score},
           {"total_questions", a.total_questions},
           {"weighted_tenths", a.weighted_score.tenths},
           {"outcome", to_string(a.outcome)}};
  if (a.submitted_at) j["submitted_at"] = codec::instant(*a.submitted_at);
}

void from_json(const json& j, Attempt& a) {
  a.id = j.at("id").get<AttemptId>();
  a.exam_id = j.at("exam_id").get<ExamId>();
  a.examinee_id = j.at("examinee_id").get<AccountId>();
  a.attempt_no = j.at("attempt_no").get<int>();
  a.seed = j.at("seed").get<std::uint64_t>();
  a.started_at = codec::instant(j.at("started_at"));
  a.deadline = codec::instant(j.at("deadline"));
  a.submitted_at = get_optional_instant(j, "submitted_at");
  a.answers.clear();
  for (const auto& pair : j.at("answers")) {
    a.answers[QuestionId{pair.at(0).get<std::uint64_t>()}] = pair.at(1).get<std::size_t>();
  }
  a.raw_score = j.at("raw_score").get<int>();
  a.total_questions = j.at("total_questions").get<int>();
  a.weighted_score = Points{j.at("weighted_tenths").get<std::int64_t>()};
  a.outcome = parse_outcome(j.at("outcome").get<std::string>()).value();
}

void to_json(json& j, const Announcement& a) {
  j = json{{"id", a.id},
           {"body", a.body},
           {"author", a.author},
           {"created_at", codec::instant(a.created_at)}};
}

void from_json(const json& j, Announcement& a) {
  a.id = j.at("id").get<AnnouncementId>();
  a.body = j.at("body").get<std::string>();
  a.author = j.at("author").get<std::string>();
  a.created_at = codec::instant(j.at("created_at"));
}

}  // namespace mockboard
