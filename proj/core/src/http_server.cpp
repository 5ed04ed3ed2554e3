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

#include "mockboard/http_server.hpp"

#include <sys/socket.h>

#include <charconv>
#include <chrono>
#include <cstdio>

// A whole examination room connects at once when an exam opens.
#define CPPHTTPLIB_LISTEN_BACKLOG 1024
#include <httplib.h>
#include <iostream>
#include <json.hpp>
#include <mutex>
#include <stdexcept>

#include "mockboard/reporting.hpp"

namespace mockboard {

using nlohmann::json;

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ValidationFailed:
    case ErrorCode::SchemaError:
    case ErrorCode::ForeignKeyMissing:
      return 400;
    case ErrorCode::BadCredentials:
    case ErrorCode::Unauthorized:
      return 401;
    case ErrorCode::Forbidden:
    case ErrorCode::AwaitingVerification:
    case ErrorCode::Disabled:
    case ErrorCode::NotVerified:
      return 403;
    case ErrorCode::UnknownQuestion:
    case ErrorCode::UnknownAttempt:
    case ErrorCode::UnknownAccount:
    case ErrorCode::UnknownExam:
    case ErrorCode::UnknownExaminee:
    case ErrorCode::UnknownCourse:
    case ErrorCode::UnknownAnnouncement:
    case ErrorCode::NotFound:
    case ErrorCode::NoData:
      return 404;
    case ErrorCode::DuplicateKey:
    case ErrorCode::DeleteRestricted:
    case ErrorCode::ExamInUse:
    case ErrorCode::AlreadyTaken:
    case ErrorCode::AlreadyFinalized:
    case ErrorCode::NotOpen:
    case ErrorCode::NotFinalized:
    case ErrorCode::DegenerateExam:
    case ErrorCode::WeightOverflow:
    case ErrorCode::NonEmptyStore:
      return 409;
    case ErrorCode::Expired:
      return 410;
    case ErrorCode::ClockSkew:
    case ErrorCode::StorageFailure:
      return 500;
  }
  return 500;
}

namespace {

// ---- presentation ------------------------------------------------------------

template <class Tag>
json id_or_null(const std::optional<Id<Tag>>& id) {
  return id ? json(id->value) : json(nullptr);
}

json opt_date(const std::optional<Date>& d) { return d ? json(format_date(*d)) : json(nullptr); }
json opt_instant(const std::optional<Instant>& t) {
  return t ? json(format_instant(*t)) : json(nullptr);
}
json opt_string(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

json account_json(const Account& a) {
  json j{{"id", a.id.value},
         {"username", a.username},
         {"role", to_string(a.role)},
         {"status", to_string(a.status)},
         {"scope_course_id", id_or_null(a.scope_course_id)},
         {"created_at", format_instant(a.created_at)},
         {"profile", nullptr}};
  if (a.profile) {
    const auto& p = *a.profile;
    j["profile"] = {{"student_number", p.student_number},
                    {"name", p.display_name()},
                    {"last_name", p.last_name},
                    {"first_name", p.first_name},
                    {"middle_name", p.middle_name},
                    {"address", p.address},
                    {"contact_number", p.contact_number},
                    {"birthdate", format_date(p.birthdate)},
                    {"course_id", p.course_id.value},
                    {"major_id", id_or_null(p.major_id)}};
  }
  return j;
}

json course_json(const Course& c) {
  json majors = json::array();
  for (const auto& m : c.majors) majors.push_back({{"id", m.id.value}, {"name", m.name}});
  return {{"id", c.id.value},
          {"name", c.name},
          {"majors", majors},
          {"created_by", c.created_by},
          {"created_at", format_instant(c.created_at)},
          {"updated_at", opt_instant(c.updated_at)}};
}

json exam_json(const Exam& e) {
  return {{"id", e.id.value},
          {"course_id", e.course_id.value},
          {"major_id", id_or_null(e.major_id)},
          {"name", e.name},
          {"instructions", e.instructions},
          {"exam_date", format_date(e.exam_date)},
          {"reexam_date", opt_date(e.reexam_date)},
          {"duration_minutes", e.duration_minutes},
          {"time_limit", format_time_limit(e.duration_minutes)},
          {"passing_rate", e.passing_rate.str()},
          {"weight", e.weight.str()},
          {"total_questions", e.question_ids.size()},
          {"created_at", format_instant(e.created_at)},
          {"updated_at", opt_instant(e.updated_at)}};
}

json question_json(const Question& q) {
  return {{"id", q.id.value},
          {"exam_id", q.exam_id.value},
          {"stem", q.stem},
          {"choices", q.choices},
          {"correct_index", q.correct_index},
          {"category", opt_string(q.category)}};
}

json announcement_json(const Announcement& a) {
  return {{"id", a.id.value},
          {"body", a.body},
          {"author", a.author},
          {"created_at", format_instant(a.created_at)}};
}

json announcements_json(const std::vector<Announcement>& list) {
  json arr = json::array();
  for (const auto& a : list) arr.push_back(announcement_json(a));
  return arr;
}

// Deliberately carries no correct answers.
json attempt_view_json(const AttemptView& v) {
  json qs = json::array();
  for (const auto& q : v.questions) {
    qs.push_back({{"question_id", q.question_id.value},
                  {"number", q.number},
                  {"stem", q.stem},
                  {"category", opt_string(q.category)},
                  {"choices", q.choices},
                  {"choice_order", q.choice_order},
                  {"selected", q.selected ? json(*q.selected) : json(nullptr)}});
  }
  return {{"attempt_id", v.attempt_id.value},
          {"exam_id", v.exam_id.value},
          {"exam_name", v.exam_name},
          {"instructions", v.instructions},
          {"attempt_no", v.attempt_no},
          {"duration_minutes", v.duration_minutes},
          {"started_at", format_instant(v.started_at)},
          {"deadline", format_instant(v.deadline)},
          {"remaining_seconds", v.remaining_seconds},
          {"questions", qs}};
}

json result_json(const ResultView& r) {
  return {{"attempt_id", r.attempt_id.value},
          {"exam_id", r.exam_id.value},
          {"exam_name", r.exam_name},
          {"attempt_no", r.attempt_no},
          {"raw", r.raw},
          {"total", r.total},
          {"answered", r.answered},
          {"weighted", r.weighted.str()},
          {"weight", r.weight.compact()},
          {"score", r.score()},
          {"passing_rate", r.passing_rate.str()},
          {"outcome", to_string(r.outcome)},
          {"started_at", format_instant(r.started_at)},
          {"submitted_at", format_instant(r.submitted_at)}};
}

json dashboard_json(const Dashboard& d) {
  json rows = json::array();
  for (const auto& r : d.exams) {
    rows.push_back({{"exam_id", r.exam_id.value},
                    {"name", r.name},
                    {"duration_minutes", r.duration_minutes},
                    {"time_limit", format_time_limit(r.duration_minutes)},
                    {"passing_rate", r.passing_rate.str()},
                    {"weight", r.weight.str()},
                    {"exam_date", format_date(r.exam_date)},
                    {"reexam_date", opt_date(r.reexam_date)},
                    {"total_questions", r.total_questions},
                    {"status", to_string(r.status)},
                    {"attempt_id", id_or_null(r.attempt_id)}});
  }
  return {{"examinee_id", d.examinee_id.value},
          {"name", d.name},
          {"student_number", d.student_number},
          {"course", d.course_name},
          {"major", opt_string(d.major_name)},
          {"exams", rows},
          {"announcements", announcements_json(d.announcements)}};
}

json certificate_json(const reporting::Certificate& c) {
  json rows = json::array();
  for (const auto& r : c.rows) {
    rows.push_back({{"exam_id", r.exam_id.value},
                    {"exam_name", r.exam_name},
                    {"attempt_no", r.attempt_no},
                    {"finalized_at", format_instant(r.finalized_at)},
                    {"raw", r.raw},
                    {"total", r.total},
                    {"weighted", r.weighted.str()},
                    {"weight", r.weight.compact()},
                    {"score", r.score()},
                    {"passing_rate", r.passing_rate.str()},
                    {"outcome", to_string(r.outcome)}});
  }
  return {{"examinee_id", c.examinee_id.value},
          {"examinee", c.examinee_name},
          {"student_number", c.student_number},
          {"course", c.course_name},
          {"major", opt_string(c.major_name)},
          {"rows", rows},
          {"overall_rating", c.overall_rating.str()},
          {"overall_outcome", to_string(c.overall_outcome)},
          {"threshold", c.threshold.str()},
          {"issued_at", format_instant(c.issued_at)}};
}

json grade_report_json(const reporting::GradeReport& g) {
  json rows = json::array();
  for (const auto& r : g.rows) {
    rows.push_back({{"examinee_id", r.examinee_id.value},
                    {"examinee", r.examinee_name},
                    {"student_number", r.student_number},
                    {"attempt_no", r.attempt_no},
                    {"raw", r.raw},
                    {"total", r.total},
                    {"weighted", r.weighted.str()},
                    {"weight", r.weight.compact()},
                    {"score", reporting::score_text(r.weighted, r.weight)},
                    {"outcome", to_string(r.outcome)},
                    {"started_at", format_instant(r.started_at)},
                    {"submitted_at", format_instant(r.submitted_at)}});
  }
  return {{"exam_id", g.exam_id.value}, {"exam_name", g.exam_name}, {"rows", rows}};
}

json item_report_json(const reporting::ItemAnalysisReport& r) {
  json items = json::array();
  for (const auto& it : r.items) {
    json stats = nullptr;
    if (it.stats) {
      stats = {{"n_responses", it.stats->n_responses},
               {"difficulty", it.stats->difficulty},
               {"discrimination", it.stats->discrimination ? json(*it.stats->discrimination)
                                                           : json(nullptr)},
               {"choice_distribution", it.stats->choice_distribution}};
    }
    items.push_back({{"question_id", it.question_id.value},
                     {"position", it.position},
                     {"stem_excerpt", it.stem_excerpt},
                     {"category", opt_string(it.category)},
                     {"correct_index", it.correct_index},
                     {"stats", stats},
                     {"flagged", it.flagged}});
  }
  return {{"exam_id", r.exam_id.value},
          {"exam_name", r.exam_name},
          {"cohort_size", r.cohort_size},
          {"items", items}};
}

// ---- request parsing ---------------------------------------------------------

json body_json(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::ValidationFailed, "request body must be a JSON object",
                {{"body", "malformed JSON"}});
  }
  return j;
}

std::uint64_t path_id(const httplib::Request& req, std::size_t index) {
  const std::string& s = req.matches[index];
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::NotFound, "malformed id in path");
  }
  return v;
}

std::optional<std::uint64_t> query_id(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  const std::string s = req.get_param_value(name);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::ValidationFailed, std::string("bad ") + name,
                {{name, "must be a numeric id"}});
  }
  return v;
}

std::string text_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw Error(ErrorCode::ValidationFailed, std::string(key) + " must be text",
                {{key, "must be text"}});
  }
  return it->get<std::string>();
}

// Optional numeric id; records a field error instead of throwing.
std::optional<std::uint64_t> id_field(const json& j, const char* key, FieldErrors& f) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (it->is_number_unsigned()) return it->get<std::uint64_t>();
  if (it->is_number_integer() && it->get<std::int64_t>() >= 0) return it->get<std::uint64_t>();
  f[key] = "must be an id";
  return std::nullopt;
}

std::optional<Percent> percent_field(const json& j, const char* key, FieldErrors& f) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  std::optional<Percent> p;
  if (it->is_string()) {
    if (is_blank(it->get<std::string>())) return std::nullopt;
    p = Percent::parse(it->get<std::string>());
  } else if (it->is_number()) {
    p = Percent::from_double(it->get<double>());
  }
  if (!p) f[key] = "must be a percentage with at most two decimals";
  return p;
}

std::optional<Date> date_field(const json& j, const char* key, FieldErrors& f) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) {
    if (is_blank(it->get<std::string>())) return std::nullopt;
    if (auto d = parse_date(it->get<std::string>())) return d;
  }
  f[key] = "must be a date (YYYY-MM-DD)";
  return std::nullopt;
}

std::optional<int> int_field(const json& j, const char* key, FieldErrors& f) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (it->is_number_integer()) {
    const auto v = it->get<std::int64_t>();
    if (v >= INT32_MIN && v <= INT32_MAX) return static_cast<int>(v);
  } else if (it->is_string()) {
    const std::string s = it->get<std::string>();
    if (is_blank(s)) return std::nullopt;
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size()) return v;
  }
  f[key] = "must be a whole number";
  return std::nullopt;
}

void throw_if(FieldErrors f, const char* what) {
  if (!f.empty()) throw Error(ErrorCode::ValidationFailed, what, std::move(f));
}

Registration registration_from(const json& j) {
  FieldErrors f;
  Registration r;
  r.username = text_field(j, "username");
  r.password = text_field(j, "password");
  r.student_number = text_field(j, "student_number");
  r.last_name = text_field(j, "last_name");
  r.first_name = text_field(j, "first_name");
  r.middle_name = text_field(j, "middle_name");
  r.address = text_field(j, "address");
  r.contact_number = text_field(j, "contact_number");
  r.birthdate = text_field(j, "birthdate");
  if (auto v = id_field(j, "course_id", f)) r.course_id = CourseId{*v};
  if (auto v = id_field(j, "major_id", f)) r.major_id = MajorId{*v};
  auto terms = j.find("terms_accepted");
  r.terms_accepted = terms != j.end() && terms->is_boolean() && terms->get<bool>();
  throw_if(std::move(f), "registration form has errors");
  return r;
}

ExamInput exam_input_from(const json& j) {
  ExamInput in;
  FieldErrors& f = in.field_errors;
  if (auto v = id_field(j, "course_id", f)) in.course_id = CourseId{*v};
  if (auto v = id_field(j, "major_id", f)) in.major_id = MajorId{*v};
  if (j.contains("name")) in.name = text_field(j, "name");
  in.instructions = text_field(j, "instructions");
  in.exam_date = date_field(j, "exam_date", f);
  in.reexam_date = date_field(j, "reexam_date", f);
  in.duration_minutes = int_field(j, "duration_minutes", f);
  in.passing_rate = percent_field(j, "passing_rate", f);
  in.weight = percent_field(j, "weight", f);
  return in;
}

QuestionInput question_input_from(const json& j) {
  FieldErrors f;
  QuestionInput in;
  in.stem = text_field(j, "stem");
  if (auto it = j.find("choices"); it != j.end() && !it->is_null()) {
    bool ok = it->is_array();
    if (ok) {
      for (const auto& c : *it) {
        if (!c.is_string()) ok = false;
        else in.choices.push_back(c.get<std::string>());
      }
    }
    if (!ok) f["choices"] = "must be a list of texts";
  }
  if (auto it = j.find("correct_index"); it != j.end() && !it->is_null()) {
    if (it->is_number_integer() && it->get<std::int64_t>() >= 0) {
      in.correct_index = it->get<std::size_t>();
    } else {
      f["correct_index"] = "must be a choice index";
    }
  }
  if (auto it = j.find("category"); it != j.end() && it->is_string() &&
                                    !is_blank(it->get<std::string>())) {
    in.category = it->get<std::string>();
  }
  throw_if(std::move(f), "question has errors");
  return in;
}

// Create takes ["A", "B"]; update also accepts [{"id": 5, "name": "A"}].
std::vector<Major> majors_from(const json& j) {
  std::vector<Major> out;
  auto it = j.find("majors");
  if (it == j.end() || it->is_null()) return out;
  if (!it->is_array()) {
    throw Error(ErrorCode::ValidationFailed, "majors must be a list", {{"majors", "must be a list"}});
  }
  for (const auto& m : *it) {
    if (m.is_string()) {
      out.push_back(Major{MajorId{}, m.get<std::string>()});
    } else if (m.is_object()) {
      FieldErrors f;
      Major major;
      if (auto v = id_field(m, "id", f)) major.id = MajorId{*v};
      major.name = text_field(m, "name");
      throw_if(std::move(f), "majors have errors");
      out.push_back(std::move(major));
    } else {
      throw Error(ErrorCode::ValidationFailed, "bad major entry", {{"majors", "bad entry"}});
    }
  }
  return out;
}

std::string bearer_token(const httplib::Request& req) {
  const std::string h = req.get_header_value("Authorization");
  constexpr std::string_view prefix = "Bearer ";
  if (h.size() <= prefix.size() || h.compare(0, prefix.size(), prefix) != 0) return {};
  return h.substr(prefix.size());
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message,
                const FieldErrors& fields = {}) {
  json f = json::object();
  for (const auto& [k, v] : fields) f[k] = v;
  send_json(res, http_status(code),
            {{"error", {{"code", code_name(code)}, {"message", message}, {"fields", f}}}});
}

thread_local std::chrono::steady_clock::time_point t_request_start;

}  // namespace

// ---- server ------------------------------------------------------------------

struct HttpServer::Impl {
  ExamService& service;
  HttpServerOptions options;
  httplib::Server server;
  std::mutex log_mu;
  int port = -1;

  Impl(ExamService& s, HttpServerOptions o) : service(s), options(std::move(o)) {}

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;
  using AuthedHandler =
      std::function<void(const Session&, const httplib::Request&, httplib::Response&)>;

  static Handler guarded(Handler h) {
    return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        h(req, res);
      } catch (const Error& e) {
        send_error(res, e.code(), e.what(), e.fields());
      } catch (const json::exception& e) {
        send_error(res, ErrorCode::ValidationFailed, e.what());
      } catch (const std::exception& e) {
        send_error(res, ErrorCode::StorageFailure, e.what());
      }
    };
  }

  Handler authed(AuthedHandler h) {
    return guarded([this, h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      const Session s = service.authenticate(bearer_token(req));
      h(s, req, res);
    });
  }

  static std::string path(std::string_view suffix) {
    return std::string(kApiPrefix) + std::string(suffix);
  }

  void log_line(const httplib::Request& req, const httplib::Response& res) {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              t_request_start)
                        .count();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", ms);
    std::string line = format_instant(SystemClock{}.now()) + " " + req.method + " " + req.path +
                       " " + std::to_string(res.status) + " " + buf + "ms";
    std::lock_guard lock(log_mu);
    if (options.log) options.log(line);
    else std::cerr << line << '\n';
  }

  void routes();
};

void HttpServer::Impl::routes() {
  auto& svr = server;
  auto& svc = service;

  svr.set_pre_routing_handler([](const httplib::Request&, httplib::Response&) {
    t_request_start = std::chrono::steady_clock::now();
    return httplib::Server::HandlerResponse::Unhandled;
  });
  svr.set_logger([this](const httplib::Request& req, const httplib::Response& res) {
    log_line(req, res);
  });
  svr.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    if (res.status == 404) send_error(res, ErrorCode::NotFound, "no such route");
    else send_error(res, ErrorCode::ValidationFailed, "request rejected");
    return httplib::Server::HandlerResponse::Handled;
  });

  svr.Get(path("/health"), guarded([&](const auto&, auto& res) {
            send_json(res, 200,
                      {{"status", "ok"}, {"time", format_instant(svc.clock().now())}});
          }));

  // -- authentication --
  svr.Post(path("/register"), guarded([&](const auto& req, auto& res) {
             send_json(res, 201, account_json(svc.register_examinee(registration_from(body_json(req)))));
           }));
  svr.Post(path("/login"), guarded([&](const auto& req, auto& res) {
             const json b = body_json(req);
             const Session s = svc.login(text_field(b, "username"), text_field(b, "password"));
             send_json(res, 200,
                       {{"token", s.token},
                        {"account_id", s.account_id.value},
                        {"username", s.username},
                        {"role", to_string(s.role)},
                        {"scope_course_id", id_or_null(s.scope_course_id)},
                        {"issued_at", format_instant(s.issued_at)},
                        {"expires_at", format_instant(s.expires_at)}});
           }));
  svr.Post(path("/logout"), authed([&](const Session& s, const auto&, auto& res) {
             svc.logout(s.token);
             res.status = 204;
           }));

  // -- examinee --
  svr.Get(path("/dashboard"), authed([&](const Session& s, const auto&, auto& res) {
            send_json(res, 200, dashboard_json(svc.dashboard(s)));
          }));
  svr.Post(path("/attempts"), authed([&](const Session& s, const auto& req, auto& res) {
             const json b = body_json(req);
             FieldErrors f;
             auto exam = id_field(b, "exam_id", f);
             if (!exam && f.empty()) f["exam_id"] = "required";
             throw_if(std::move(f), "exam_id is required");
             send_json(res, 201, attempt_view_json(svc.start_attempt(s, ExamId{*exam})));
           }));
  svr.Get(path(R"(/attempts/(\d+))"), authed([&](const Session& s, const auto& req, auto& res) {
            send_json(res, 200, attempt_view_json(svc.attempt_view(s, AttemptId{path_id(req, 1)})));
          }));
  svr.Put(path(R"(/attempts/(\d+)/answers/(\d+))"),
          authed([&](const Session& s, const auto& req, auto& res) {
            const json b = body_json(req);
            auto it = b.find("choice");
            if (it == b.end() || !it->is_number_integer() || it->get<std::int64_t>() < 0) {
              throw Error(ErrorCode::ValidationFailed, "choice is required",
                          {{"choice", "must be an authored choice index"}});
            }
            const auto ack = svc.record_answer(s, AttemptId{path_id(req, 1)},
                                               QuestionId{path_id(req, 2)}, it->get<std::size_t>());
            send_json(res, 200,
                      {{"attempt_id", ack.attempt_id.value},
                       {"question_id", ack.question_id.value},
                       {"choice", ack.choice},
                       {"remaining_seconds", ack.remaining_seconds},
                       {"deadline", format_instant(ack.deadline)}});
          }));
  svr.Post(path(R"(/attempts/(\d+)/submit)"),
           authed([&](const Session& s, const auto& req, auto& res) {
             send_json(res, 200, result_json(svc.submit_attempt(s, AttemptId{path_id(req, 1)})));
           }));
  svr.Get(path(R"(/attempts/(\d+)/result)"),
          authed([&](const Session& s, const auto& req, auto& res) {
            send_json(res, 200, result_json(svc.result(s, AttemptId{path_id(req, 1)})));
          }));
  svr.Get(path("/certificate"), authed([&](const Session& s, const auto& req, auto& res) {
            std::optional<AccountId> who;
            if (auto v = query_id(req, "examinee_id")) who = AccountId{*v};
            const auto cert = svc.certificate(s, who);
            if (req.get_param_value("format") == "html") {
              res.status = 200;
              res.set_content(reporting::render_certificate_html(cert), "text/html; charset=utf-8");
            } else {
              send_json(res, 200, certificate_json(cert));
            }
          }));

  // -- courses --
  svr.Get(path("/courses"), guarded([&](const auto&, auto& res) {
            json arr = json::array();
            for (const auto& c : svc.list_courses()) arr.push_back(course_json(c));
            send_json(res, 200, arr);
          }));
  svr.Post(path("/courses"), authed([&](const Session& s, const auto& req, auto& res) {
             const json b = body_json(req);
             std::vector<std::string> names;
             for (auto& m : majors_from(b)) names.push_back(std::move(m.name));
             send_json(res, 201, course_json(svc.create_course(s, text_field(b, "name"), names)));
           }));
  svr.Put(path(R"(/courses/(\d+))"), authed([&](const Session& s, const auto& req, auto& res) {
            const json b = body_json(req);
            send_json(res, 200,
                      course_json(svc.update_course(s, CourseId{path_id(req, 1)},
                                                    text_field(b, "name"), majors_from(b))));
          }));
  svr.Delete(path(R"(/courses/(\d+))"), authed([&](const Session& s, const auto& req, auto& res) {
               svc.delete_course(s, CourseId{path_id(req, 1)});
               res.status = 204;
             }));

  // -- exams --
  auto exam_result = [](const ExamResult& r) {
    json j = exam_json(r.exam);
    j["warnings"] = r.warnings;
    return j;
  };
  svr.Get(path("/exams"), authed([&](const Session& s, const auto& req, auto& res) {
            std::optional<CourseId> course;
            if (auto v = query_id(req, "course_id")) course = CourseId{*v};
            json arr = json::array();
            for (const auto& e : svc.list_exams(s, course)) arr.push_back(exam_json(e));
            send_json(res, 200, arr);
          }));
  svr.Get(path(R"(/exams/(\d+))"), authed([&](const Session& s, const auto& req, auto& res) {
            send_json(res, 200, exam_json(svc.get_exam(s, ExamId{path_id(req, 1)})));
          }));
  svr.Post(path("/exams"), authed([&, exam_result](const Session& s, const auto& req, auto& res) {
             send_json(res, 201, exam_result(svc.create_exam(s, exam_input_from(body_json(req)))));
           }));
  svr.Put(path(R"(/exams/(\d+))"),
          authed([&, exam_result](const Session& s, const auto& req, auto& res) {
            send_json(res, 200,
                      exam_result(svc.update_exam(s, ExamId{path_id(req, 1)},
                                                  exam_input_from(body_json(req)))));
          }));
  svr.Delete(path(R"(/exams/(\d+))"), authed([&](const Session& s, const auto& req, auto& res) {
               svc.delete_exam(s, ExamId{path_id(req, 1)});
               res.status = 204;
             }));

  // -- questions --
  svr.Get(path(R"(/exams/(\d+)/questions)"),
          authed([&](const Session& s, const auto& req, auto& res) {
            json arr = json::array();
            for (const auto& q : svc.list_questions(s, ExamId{path_id(req, 1)})) {
              arr.push_back(question_json(q));
            }
            send_json(res, 200, arr);
          }));
  svr.Post(path(R"(/exams/(\d+)/questions)"),
           authed([&](const Session& s, const auto& req, auto& res) {
             send_json(res, 201,
                       question_json(svc.create_question(s, ExamId{path_id(req, 1)},
                                                         question_input_from(body_json(req)))));
           }));
  svr.Put(path(R"(/exams/(\d+)/questions/(\d+))"),
          authed([&](const Session& s, const auto& req, auto& res) {
            send_json(res, 200,
                      question_json(svc.update_question(s, ExamId{path_id(req, 1)},
                                                        QuestionId{path_id(req, 2)},
                                                        question_input_from(body_json(req)))));
          }));
  svr.Delete(path(R"(/exams/(\d+)/questions/(\d+))"),
             authed([&](const Session& s, const auto& req, auto& res) {
               svc.delete_question(s, ExamId{path_id(req, 1)}, QuestionId{path_id(req, 2)});
               res.status = 204;
             }));

  // -- accounts --
  svr.Get(path("/accounts"), authed([&](const Session& s, const auto& req, auto& res) {
            std::optional<AccountStatus> status;
            if (req.has_param("status")) {
              status = parse_account_status(req.get_param_value("status"));
              if (!status) {
                throw Error(ErrorCode::ValidationFailed, "unknown status filter",
                            {{"status", "expected pending, verified or disabled"}});
              }
            }
            json arr = json::array();
            for (const auto& a : svc.list_accounts(s, status)) arr.push_back(account_json(a));
            send_json(res, 200, arr);
          }));
  svr.Post(path(R"(/accounts/(\d+)/verify)"),
           authed([&](const Session& s, const auto& req, auto& res) {
             send_json(res, 200, account_json(svc.verify_examinee(s, AccountId{path_id(req, 1)})));
           }));
  svr.Post(path(R"(/accounts/(\d+)/disable)"),
           authed([&](const Session& s, const auto& req, auto& res) {
             send_json(res, 200, account_json(svc.disable_account(s, AccountId{path_id(req, 1)})));
           }));

  // -- announcements --
  svr.Get(path("/announcements"), guarded([&](const auto&, auto& res) {
            send_json(res, 200, announcements_json(svc.list_announcements()));
          }));
  svr.Post(path("/announcements"), authed([&](const Session& s, const auto& req, auto& res) {
             send_json(res, 201,
                       announcement_json(svc.post_announcement(s, text_field(body_json(req), "body"))));
           }));
  svr.Delete(path(R"(/announcements/(\d+))"),
             authed([&](const Session& s, const auto& req, auto& res) {
               svc.delete_announcement(s, AnnouncementId{path_id(req, 1)});
               res.status = 204;
             }));

  // -- reports --
  svr.Get(path(R"(/reports/grades/(\d+)\.csv)"),
          authed([&](const Session& s, const auto& req, auto& res) {
            const auto report = svc.grade_report(s, ExamId{path_id(req, 1)});
            res.status = 200;
            res.set_header("Content-Disposition",
                           "attachment; filename=\"grades-" + std::to_string(report.exam_id.value) +
                               ".csv\"");
            res.set_content(reporting::grade_report_csv(report), "text/csv; charset=utf-8");
          }));
  svr.Get(path(R"(/reports/grades/(\d+))"),
          authed([&](const Session& s, const auto& req, auto& res) {
            send_json(res, 200, grade_report_json(svc.grade_report(s, ExamId{path_id(req, 1)})));
          }));
  svr.Get(path(R"(/reports/item-analysis/(\d+))"),
          authed([&](const Session& s, const auto& req, auto& res) {
            send_json(res, 200, item_report_json(svc.item_analysis(s, ExamId{path_id(req, 1)})));
          }));
}

HttpServer::HttpServer(ExamService& service, HttpServerOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {
  const int threads = std::max(1, impl_->options.threads);
  impl_->server.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  // Plain SO_REUSEADDR: a second server on a busy port must fail to bind.
  impl_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  impl_->server.set_keep_alive_max_count(1000);
  impl_->routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::bind() {
  if (impl_->port >= 0) return;
  const auto& o = impl_->options;
  if (o.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(o.host);
    if (impl_->port < 0) throw std::runtime_error("cannot listen on " + o.host);
  } else {
    if (!impl_->server.bind_to_port(o.host, o.port)) {
      throw std::runtime_error("cannot listen on " + o.host + ":" + std::to_string(o.port) +
                               " (address in use or not permitted)");
    }
    impl_->port = o.port;
  }
}

int HttpServer::port() const { return impl_->port; }

void HttpServer::run() {
  bind();
  impl_->server.listen_after_bind();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace mockboard
