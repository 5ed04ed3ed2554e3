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

#include "mockboard/ops/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <httplib.h>
#include <json.hpp>
#include <latch>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mockboard::ops {

using nlohmann::json;

namespace {

using SteadyClock = std::chrono::steady_clock;

const std::string kApi = "/mockboard/api";

class Api {
 public:
  Api(const std::string& server, std::chrono::seconds timeout) : client_(server) {
    client_.set_connection_timeout(timeout);
    client_.set_read_timeout(timeout);
    client_.set_write_timeout(timeout);
    client_.set_keep_alive(true);
  }

  void set_token(std::string token) { token_ = std::move(token); }

  json get(const std::string& path) { return check(client_.Get(kApi + path, headers()), path); }
  json post(const std::string& path, const json& body) {
    return check(client_.Post(kApi + path, headers(), body.dump(), "application/json"), path);
  }
  json put(const std::string& path, const json& body) {
    return check(client_.Put(kApi + path, headers(), body.dump(), "application/json"), path);
  }

 private:
  httplib::Headers headers() const {
    if (token_.empty()) return {};
    return {{"Authorization", "Bearer " + token_}};
  }

  static json check(const httplib::Result& res, const std::string& path) {
    if (!res) {
      throw std::runtime_error(path + ": connection failed (" + httplib::to_string(res.error()) +
                               ")");
    }
    json body = res->body.empty() ? json::object() : json::parse(res->body, nullptr, false);
    if (res->status >= 300) {
      std::string code = "HTTP " + std::to_string(res->status);
      if (body.is_object() && body.contains("error")) {
        code = body["error"].value("code", code) + ": " + body["error"].value("message", "");
      }
      throw std::runtime_error(path + ": " + code);
    }
    if (body.is_discarded()) throw std::runtime_error(path + ": malformed response");
    return body;
  }

  httplib::Client client_;
  std::string token_;
};

struct Key {
  std::uint64_t question_id;
  std::size_t correct;
  std::size_t choices;
};

double ms_between(SteadyClock::time_point a, SteadyClock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

}  // namespace

int SimulateReport::exit_code() const {
  if (mismatches > 0 || lost_answers > 0) return 2;
  if (!setup_error.empty() || failures > 0 || completed != requested) return 1;
  return 0;
}

std::string SimulateReport::to_json() const {
  json j{{"requested", requested},
         {"completed", completed},
         {"failures", failures},
         {"mismatches", mismatches},
         {"lost_answers", lost_answers},
         {"max_submit_ms", max_submit_ms},
         {"mean_submit_ms", mean_submit_ms},
         {"submit_wall_ms", submit_wall_ms},
         {"total_wall_ms", total_wall_ms},
         {"exit_code", exit_code()}};
  if (!setup_error.empty()) j["setup_error"] = setup_error;
  json runs = json::array();
  for (const auto& r : this->runs) {
    runs.push_back({{"index", r.index},
                    {"completed", r.completed},
                    {"error", r.error},
                    {"answered", r.answered},
                    {"expected_raw", r.expected_raw},
                    {"reported_raw", r.reported_raw},
                    {"score", r.score},
                    {"lost_answers", r.lost_answers},
                    {"submit_ms", r.submit_ms}});
  }
  j["runs"] = runs;
  return j.dump(2);
}

std::string SimulateReport::to_text() const {
  std::ostringstream out;
  char buf[160];
  if (!setup_error.empty()) out << "setup failed: " << setup_error << '\n';
  for (const auto& r : runs) {
    if (!r.error.empty()) out << "examinee " << r.index << ": " << r.error << '\n';
    else if (r.reported_raw != r.expected_raw) {
      out << "examinee " << r.index << ": expected raw " << r.expected_raw << ", server reported "
          << r.reported_raw << '\n';
    }
  }
  std::snprintf(buf, sizeof buf, "examinees   %d requested, %d completed, %d failed\n", requested,
                completed, failures);
  out << buf;
  std::snprintf(buf, sizeof buf, "integrity   %d mismatches, %d lost answers\n", mismatches,
                lost_answers);
  out << buf;
  std::snprintf(buf, sizeof buf, "submit      max %.1f ms, mean %.1f ms, phase wall %.1f ms\n",
                max_submit_ms, mean_submit_ms, submit_wall_ms);
  out << buf;
  std::snprintf(buf, sizeof buf, "total       %.1f ms\n", total_wall_ms);
  out << buf;
  return out.str();
}

SimulateReport simulate(const SimulateOptions& o) {
  SimulateReport report;
  report.requested = std::max(0, o.examinees);
  const auto t0 = SteadyClock::now();

  // -- setup: admin view of the exam, then registration and verification --
  std::vector<Key> keys;
  std::vector<std::pair<std::string, std::string>> credentials;  // username, password
  std::string run_tag;
  try {
    Api admin(o.server, o.timeout);
    const json session = admin.post("/login", {{"username", o.admin_username},
                                               {"password", o.admin_password}});
    admin.set_token(session.at("token").get<std::string>());

    const std::string exam_path = "/exams/" + std::to_string(o.exam_id);
    const json exam = admin.get(exam_path);
    for (const auto& q : admin.get(exam_path + "/questions")) {
      keys.push_back({q.at("id").get<std::uint64_t>(), q.at("correct_index").get<std::size_t>(),
                      q.at("choices").size()});
    }
    if (keys.empty()) throw std::runtime_error("exam " + std::to_string(o.exam_id) + " has no questions");

    const auto course_id = exam.at("course_id").get<std::uint64_t>();
    json major = exam.at("major_id");
    if (major.is_null()) {
      for (const auto& c : admin.get("/courses")) {
        if (c.at("id").get<std::uint64_t>() == course_id && !c.at("majors").empty()) {
          major = c.at("majors")[0].at("id");
        }
      }
    }

    std::mt19937_64 rng(o.seed ^ static_cast<std::uint64_t>(
                                     SteadyClock::now().time_since_epoch().count()));
    char tag[16];
    std::snprintf(tag, sizeof tag, "%08llx", static_cast<unsigned long long>(rng() & 0xffffffffu));
    run_tag = tag;

    Api anon(o.server, o.timeout);
    for (int i = 0; i < report.requested; ++i) {
      const std::string username = "sim-" + run_tag + "-" + std::to_string(i);
      const std::string password = "sim-" + run_tag;
      json account;
      for (int tries = 0;; ++tries) {
        char number[16];
        std::snprintf(number, sizeof number, "%04d-%04d", static_cast<int>(1000 + rng() % 9000),
                      static_cast<int>(rng() % 10000));
        try {
          account = anon.post("/register", {{"username", username},
                                            {"password", password},
                                            {"student_number", number},
                                            {"last_name", "Examinee"},
                                            {"first_name", "Virtual"},
                                            {"middle_name", std::to_string(i)},
                                            {"address", "Load test"},
                                            {"contact_number", "0000"},
                                            {"birthdate", "2000-01-01"},
                                            {"course_id", course_id},
                                            {"major_id", major},
                                            {"terms_accepted", true}});
          break;
        } catch (const std::runtime_error& e) {
          // Random student numbers can collide with earlier runs.
          if (tries >= 10 || std::string(e.what()).find("DUPLICATE_KEY") == std::string::npos) throw;
        }
      }
      admin.post("/accounts/" + std::to_string(account.at("id").get<std::uint64_t>()) + "/verify",
                 json::object());
      credentials.emplace_back(username, password);
    }
  } catch (const std::exception& e) {
    report.setup_error = e.what();
    report.failures = report.requested;
    report.total_wall_ms = ms_between(t0, SteadyClock::now());
    return report;
  }

  std::map<std::uint64_t, const Key*> key_of;
  for (const auto& k : keys) key_of[k.question_id] = &k;

  // -- concurrent take-exam flows --
  report.runs.resize(credentials.size());
  std::vector<SteadyClock::time_point> submit_start(credentials.size());
  std::vector<SteadyClock::time_point> submit_end(credentials.size());
  std::latch submit_gate(static_cast<std::ptrdiff_t>(credentials.size()));

  auto flow = [&](std::size_t i) {
    ExamineeRun& run = report.runs[i];
    run.index = static_cast<int>(i);
    std::mt19937_64 rng(o.seed * 0x9e3779b97f4a7c15ULL + i);
    Api api(o.server, o.timeout);
    std::uint64_t attempt = 0;
    std::map<std::uint64_t, std::size_t> sent;
    bool ready = false;
    try {
      const json session = api.post("/login", {{"username", credentials[i].first},
                                               {"password", credentials[i].second}});
      api.set_token(session.at("token").get<std::string>());
      const json view = api.post("/attempts", {{"exam_id", o.exam_id}});
      attempt = view.at("attempt_id").get<std::uint64_t>();

      const int n = static_cast<int>(keys.size());
      const int target = o.correct ? std::clamp(*o.correct, 0, n)
                                   : static_cast<int>(rng() % static_cast<std::uint64_t>(n + 1));
      std::vector<std::uint64_t> order;
      for (const auto& q : view.at("questions")) order.push_back(q.at("question_id").get<std::uint64_t>());
      std::vector<std::uint64_t> shuffled = order;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      std::map<std::uint64_t, bool> right;
      for (int k = 0; k < n; ++k) right[shuffled[k]] = k < target;

      const std::string base = "/attempts/" + std::to_string(attempt);
      for (std::uint64_t qid : order) {
        const Key& key = *key_of.at(qid);
        std::size_t choice = key.correct;
        if (!right[qid]) {
          choice = (key.correct + 1 + rng() % (key.choices - 1)) % key.choices;
        }
        api.put(base + "/answers/" + std::to_string(qid), {{"choice", choice}});
        sent[qid] = choice;
        if (choice == key.correct) ++run.expected_raw;
      }
      run.answered = static_cast<int>(sent.size());

      const json back = api.get(base);
      for (const auto& q : back.at("questions")) {
        const auto qid = q.at("question_id").get<std::uint64_t>();
        const auto it = sent.find(qid);
        if (it == sent.end()) continue;
        if (q.at("selected").is_null() || q.at("selected").get<std::size_t>() != it->second) {
          ++run.lost_answers;
        }
      }
      ready = true;
    } catch (const std::exception& e) {
      run.error = e.what();
    }

    submit_gate.arrive_and_wait();
    if (!ready) return;
    try {
      submit_start[i] = SteadyClock::now();
      const json result = api.post("/attempts/" + std::to_string(attempt) + "/submit", json::object());
      submit_end[i] = SteadyClock::now();
      run.submit_ms = ms_between(submit_start[i], submit_end[i]);
      run.reported_raw = result.at("raw").get<int>();
      run.score = result.at("score").get<std::string>();
      const int answered = result.at("answered").get<int>();
      if (answered < run.answered) run.lost_answers += run.answered - answered;
      run.completed = true;
    } catch (const std::exception& e) {
      run.error = e.what();
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(credentials.size());
  for (std::size_t i = 0; i < credentials.size(); ++i) threads.emplace_back(flow, i);
  for (auto& t : threads) t.join();

  std::optional<SteadyClock::time_point> first, last;
  double sum = 0.0;
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    const auto& r = report.runs[i];
    report.lost_answers += r.lost_answers;
    if (!r.completed) {
      ++report.failures;
      continue;
    }
    ++report.completed;
    if (r.reported_raw != r.expected_raw) ++report.mismatches;
    sum += r.submit_ms;
    report.max_submit_ms = std::max(report.max_submit_ms, r.submit_ms);
    if (!first || submit_start[i] < *first) first = submit_start[i];
    if (!last || submit_end[i] > *last) last = submit_end[i];
  }
  if (report.completed > 0) {
    report.mean_submit_ms = sum / report.completed;
    report.submit_wall_ms = ms_between(*first, *last);
  }
  report.total_wall_ms = ms_between(t0, SteadyClock::now());
  return report;
}

}  // namespace mockboard::ops
