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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <httplib.h>
#include <signal.h>

#include <chrono>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "mockboard/error.hpp"
#include "mockboard/exam_core.hpp"
#include "mockboard/http_server.hpp"
#include "mockboard/ops/seed_demo.hpp"
#include "mockboard/reporting.hpp"
#include "mockboard/service.hpp"
#include "mockboard/store.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mockboard;
using namespace std::chrono_literals;
using json = nlohmann::json;

namespace {

/// Thrown by a criterion to report the first discrepancy.
struct Failure {
  std::string why;
};

void expect(bool ok, const std::string& why) {
  if (!ok) throw Failure{why};
}

struct Criterion {
  std::string name;
  std::chrono::milliseconds limit;
  std::function<std::string()> body;  // returns a short detail string
};

const Instant kT0 = make_instant(2018, 11, 21, 8, 0, 0);

// -- criteria -----------------------------------------------------------------

std::string demo_certificate() {
  mbtest::TempDir dir;
  Store store(mbtest::options_for(dir.path(), false));
  const auto demo = ops::seed_demo(store);
  const auto cert = reporting::build_certificate(store, demo.examinee, Percent::whole(75),
                                                 make_instant(2018, 12, 1));
  const std::vector<std::string> want{"0.0 of 20% Failed", "6.0 of 20% Failed", "13.5 of 15% Passed"};
  expect(cert.rows.size() == want.size(), "expected 3 certificate rows, got " + std::to_string(cert.rows.size()));
  for (std::size_t i = 0; i < want.size(); ++i) {
    const std::string got = cert.rows[i].score() + " " + std::string(to_string(cert.rows[i].outcome));
    expect(got == want[i], "row " + std::to_string(i + 1) + ": \"" + got + "\" != \"" + want[i] + "\"");
  }
  expect(cert.overall_rating.str() == "19.5", "rating " + cert.overall_rating.str() + " != 19.5");
  return "rows match, rating " + cert.overall_rating.str();
}

std::string grading_oracle() {
  std::mt19937_64 rng(20181121);
  for (int c = 0; c < 10000; ++c) {
    const int n = 1 + static_cast<int>(rng() % 12);
    core::AnswerMap key;
    core::AnswerMap answers;
    std::vector<int> okey;
    std::vector<std::optional<int>> oans;
    for (int q = 0; q < n; ++q) {
      const int choices = 2 + static_cast<int>(rng() % 4);
      const int k = static_cast<int>(rng() % choices);
      key[QuestionId{static_cast<std::uint64_t>(q + 1)}] = static_cast<std::size_t>(k);
      okey.push_back(k);
      if (rng() % 4 == 0) {
        oans.emplace_back();
      } else {
        const int a = static_cast<int>(rng() % choices);
        answers[QuestionId{static_cast<std::uint64_t>(q + 1)}] = static_cast<std::size_t>(a);
        oans.emplace_back(a);
      }
    }
    const int got = core::grade(answers, key);
    const int want = mbtest::oracle::grade(oans, okey);
    expect(got == want, "case " + std::to_string(c) + ": grade " + std::to_string(got) + " != " +
                            std::to_string(want));
  }
  return "10000 cases";
}

std::string boundary_sweep() {
  int cases = 0;
  for (int rate : {20, 50, 75, 100}) {
    for (int total = 1; total <= 20; ++total) {
      for (int raw = 0; raw <= total; ++raw) {
        const bool want = mbtest::oracle::passes(raw, total, rate, 1);
        const bool got = core::subject_outcome(raw, total, Percent::whole(rate)) == Outcome::Passed;
        expect(got == want, std::to_string(raw) + "/" + std::to_string(total) + " at " +
                                std::to_string(rate) + "%");
        ++cases;
      }
    }
  }
  return std::to_string(cases) + " cases";
}

std::string shuffle_properties() {
  std::mt19937_64 rng(7);
  for (int c = 0; c < 1000; ++c) {
    const std::size_t n = 1 + rng() % 120;
    std::vector<std::size_t> counts(n);
    for (auto& k : counts) k = 2 + rng() % 4;
    const std::uint64_t seed = rng();
    const auto p = core::presentation_order(counts, seed);
    const auto again = core::presentation_order(counts, seed);
    expect(p.question_order == again.question_order && p.choice_order == again.choice_order,
           "not deterministic for seed " + std::to_string(seed));
    std::vector<std::size_t> sorted = p.question_order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i) expect(sorted[i] == i, "question order is not a bijection");
    expect(p.choice_order.size() == n, "choice order count");
    for (std::size_t q = 0; q < n; ++q) {
      std::vector<std::size_t> ch = p.choice_order[q];
      std::sort(ch.begin(), ch.end());
      expect(ch.size() == counts[q], "choice order length");
      for (std::size_t i = 0; i < ch.size(); ++i) expect(ch[i] == i, "choice order is not a bijection");
    }
  }
  const std::vector<std::size_t> ten(10, 4);
  const auto g = core::presentation_order(ten, 1);
  const std::vector<std::size_t> golden_q{4, 2, 8, 1, 9, 3, 0, 6, 7, 5};
  const std::vector<std::vector<std::size_t>> golden_c{{1, 3, 0, 2}, {2, 3, 1, 0}, {2, 1, 0, 3}, {1, 3, 0, 2},
                                                       {1, 2, 3, 0}, {0, 2, 1, 3}, {2, 0, 1, 3}, {2, 1, 3, 0},
                                                       {1, 2, 3, 0}, {3, 2, 0, 1}};
  expect(g.question_order == golden_q, "golden question order for seed 1 differs");
  expect(g.choice_order == golden_c, "golden choice order for seed 1 differs");
  return "1000 cases + golden";
}

std::string item_oracle() {
  std::mt19937_64 rng(500);
  double worst = 0;
  for (int c = 0; c < 500; ++c) {
    const std::size_t n = 1 + rng() % 30;
    Question q;
    q.id = QuestionId{1};
    q.choices.assign(2 + rng() % 4, "x");
    q.correct_index = rng() % q.choices.size();
    std::vector<core::AnswerMap> answers(n);
    std::vector<reporting::CohortMember> cohort;
    std::vector<std::pair<std::optional<int>, int>> responses;
    std::vector<mbtest::oracle::Member> members;
    std::vector<std::uint64_t> ids(n);
    std::iota(ids.begin(), ids.end(), 1);
    std::shuffle(ids.begin(), ids.end(), rng);
    for (std::size_t i = 0; i < n; ++i) {
      std::optional<int> chosen;
      if (rng() % 6 != 0) {
        chosen = static_cast<int>(rng() % q.choices.size());
        answers[i][q.id] = static_cast<std::size_t>(*chosen);
      }
      const int total = static_cast<int>(rng() % 31);
      const std::uint64_t id = ids[i];
      cohort.push_back({AccountId{id}, total, &answers[i]});
      responses.emplace_back(chosen, static_cast<int>(q.correct_index));
      members.push_back({id, total, chosen && *chosen == static_cast<int>(q.correct_index)});
    }
    const ItemStats st = reporting::compute_item_stats(q, cohort);
    const double dd = std::abs(st.difficulty - mbtest::oracle::difficulty(responses));
    expect(dd <= 1e-9, "difficulty off by " + std::to_string(dd) + " in case " + std::to_string(c));
    worst = std::max(worst, dd);
    if (n >= 2) {
      expect(st.discrimination.has_value(), "discrimination missing");
      const double dr = std::abs(*st.discrimination - mbtest::oracle::discrimination(members));
      expect(dr <= 1e-9, "discrimination off by " + std::to_string(dr) + " in case " + std::to_string(c));
      worst = std::max(worst, dr);
    }
  }
  std::ostringstream s;
  s << "500 cohorts, max error " << worst;
  return s.str();
}

std::string timer_enforcement() {
  mbtest::TempDir dir;
  Store store(mbtest::options_for(dir.path(), false));
  ManualClock clock(kT0);
  ExamService service(store, clock);
  const Course course = store.create_course("BSCRIM", {}, "admin", kT0);
  store.create_account(mbtest::examinee_draft("juan", "secret1", "2018-0001", course.id), kT0);
  mbtest::ExamSpec spec;
  spec.duration_minutes = 1;
  const Exam exam = mbtest::add_exam(store, course.id, spec, kT0);
  const auto qs = store.questions(exam.id);
  const Session s = service.login("juan", "secret1");
  const AttemptView v = service.start_attempt(s, exam.id);

  core::AnswerMap saved, key;
  for (const auto& q : qs) key[q.id] = q.correct_index;
  auto answer = [&](std::size_t i, std::size_t choice) {
    service.record_answer(s, v.attempt_id, qs[i].id, choice);
    saved[qs[i].id] = choice;
  };
  answer(0, qs[0].correct_index);
  answer(1, (qs[1].correct_index + 1) % 4);
  clock.set(v.deadline + 29s);
  answer(2, qs[2].correct_index);
  clock.set(v.deadline + 30s);
  answer(3, qs[3].correct_index);
  clock.set(v.deadline + 31s);
  ErrorCode code = ErrorCode::NotFound;
  try {
    service.record_answer(s, v.attempt_id, qs[4].id, qs[4].correct_index);
  } catch (const Error& e) {
    code = e.code();
  }
  expect(code == ErrorCode::Expired, "answer at deadline+31s was not rejected as Expired");
  const Attempt a = *store.attempt(v.attempt_id);
  expect(a.finalized(), "attempt not auto-finalized");
  expect(*a.submitted_at == v.deadline, "submitted_at is not the deadline");
  expect(a.answers == saved, "stored answers differ from answers saved in time");
  expect(a.raw_score == core::grade(saved, key), "auto-final score differs from grading saved answers");
  return "+29s/+30s accepted, +31s Expired, score " + std::to_string(a.raw_score) + "/" +
         std::to_string(a.total_questions);
}

std::string simulate_40() {
  mbtest::TempDir dir;
  const auto data = dir / "data";
  ExamId exam;
  {
    Store store(mbtest::options_for(data));
    const Course course = store.create_course("BSCRIM", {}, "admin", kT0);
    store.create_account(mbtest::admin_draft("admin", "admin123"), kT0);
    mbtest::ExamSpec spec;
    spec.questions = 100;
    exam = mbtest::add_exam(store, course.id, spec, kT0).id;
  }
  mbtest::Child server({mbtest::opsctl_path(), "serve", "--data-dir", data.string(), "--listen", "127.0.0.1:0"},
                       dir / "server.err");
  const int port = mbtest::start_server(server);
  const auto r = mbtest::run({mbtest::opsctl_path(), "simulate", "--server", "http://127.0.0.1:" + std::to_string(port),
                              "--examinees", "40", "--exam", std::to_string(exam.value), "--admin-password",
                              "admin123", "--json"});
  server.signal(SIGTERM);
  server.wait();
  expect(r.exit_code == 0, "simulate exited " + std::to_string(r.exit_code) + ": " + r.err.substr(0, 300));
  const json rep = json::parse(r.out);
  expect(rep["completed"] == 40, "completed " + rep["completed"].dump());
  expect(rep["mismatches"] == 0, "mismatches " + rep["mismatches"].dump());
  expect(rep["lost_answers"] == 0, "lost answers " + rep["lost_answers"].dump());
  expect(rep["failures"] == 0, "failures " + rep["failures"].dump());
  const double wall = rep["submit_wall_ms"].get<double>();
  expect(wall < 60000, "submit-to-result wall " + std::to_string(wall) + " ms");
  std::ostringstream s;
  s << "40/40 results, 0 mismatches, 0 lost, submit wall " << wall << " ms, max " << rep["max_submit_ms"]
    << " ms";
  return s.str();
}

std::string crash_durability() {
  mbtest::TempDir dir;
  const auto data = dir / "data";
  ExamId exam;
  std::vector<QuestionId> questions;
  {
    Store store(mbtest::options_for(data));
    const Course course = store.create_course("BSCRIM", {}, "admin", kT0);
    store.create_account(mbtest::examinee_draft("juan", "secret1", "2018-0001", course.id), kT0);
    mbtest::ExamSpec spec;
    spec.questions = 60;
    spec.duration_minutes = 600;
    exam = mbtest::add_exam(store, course.id, spec, kT0).id;
    for (const auto& q : store.questions(exam)) questions.push_back(q.id);
  }
  const std::string prefix(kApiPrefix);
  std::map<std::uint64_t, std::size_t> acked;  // question -> choice
  std::uint64_t attempt = 0;
  for (int cycle = 0; cycle < 50; ++cycle) {
    mbtest::Child server({mbtest::opsctl_path(), "serve", "--data-dir", data.string(), "--listen", "127.0.0.1:0"},
                         dir / "server.err");
    const int port = mbtest::start_server(server);
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(10, 0);
    auto login = c.Post(prefix + "/login", json{{"username", "juan"}, {"password", "secret1"}}.dump(),
                        "application/json");
    expect(login && login->status == 200, "login failed in cycle " + std::to_string(cycle));
    const httplib::Headers auth{{"Authorization", "Bearer " + json::parse(login->body)["token"].get<std::string>()}};
    auto start = c.Post(prefix + "/attempts", auth, json{{"exam_id", exam.value}}.dump(), "application/json");
    expect(start && start->status == 201, "start failed in cycle " + std::to_string(cycle));
    const json view = json::parse(start->body);
    if (cycle == 0) attempt = view["attempt_id"].get<std::uint64_t>();
    expect(view["attempt_id"] == attempt, "restart produced a new attempt");

    // Everything acknowledged before the previous kill is still there.
    std::size_t present = 0;
    for (const auto& q : view["questions"]) {
      auto it = acked.find(q["question_id"].get<std::uint64_t>());
      if (it == acked.end()) continue;
      expect(q["selected"] == it->second, "cycle " + std::to_string(cycle) + ": answer to question " +
                                              std::to_string(it->first) + " lost");
      ++present;
    }
    expect(present == acked.size(), "acknowledged answers missing after restart");

    const std::uint64_t qid = questions[static_cast<std::size_t>(cycle)].value;
    const std::size_t choice = static_cast<std::size_t>(cycle) % 4;
    auto put = c.Put(prefix + "/attempts/" + std::to_string(attempt) + "/answers/" + std::to_string(qid), auth,
                     json{{"choice", choice}}.dump(), "application/json");
    expect(put && put->status == 200, "answer not acknowledged in cycle " + std::to_string(cycle));
    acked[qid] = choice;
    server.signal(SIGKILL);
    server.wait();
  }
  Store store(mbtest::options_for(data));
  const Attempt a = *store.attempt(AttemptId{attempt});
  for (const auto& [qid, choice] : acked) {
    auto it = a.answers.find(QuestionId{qid});
    expect(it != a.answers.end() && it->second == choice, "final check: question " + std::to_string(qid));
  }
  return "50 kills, " + std::to_string(acked.size()) + " acknowledged answers present";
}

std::string registration_validation() {
  expect(core::validate_student_number("2018-0001"), "2018-0001 rejected");
  for (const char* bad : {"18-001", "2018-00010", "ABCD-0001"}) {
    expect(!core::validate_student_number(bad), std::string(bad) + " accepted");
  }
  // Same rule through the registration form.
  mbtest::TempDir dir;
  Store store(mbtest::options_for(dir.path(), false));
  ManualClock clock(kT0);
  ExamService service(store, clock);
  const Course course = store.create_course("BSCRIM", {}, "admin", kT0);
  Registration r;
  r.username = "maria";
  r.password = "secret1";
  r.last_name = "Santos";
  r.first_name = "Maria";
  r.middle_name = "Reyes";
  r.address = "Calapan";
  r.contact_number = "0917";
  r.birthdate = "1999-03-04";
  r.course_id = course.id;
  r.terms_accepted = true;
  for (const char* bad : {"18-001", "2018-00010", "ABCD-0001"}) {
    r.student_number = bad;
    bool rejected = false;
    try {
      service.register_examinee(r);
    } catch (const Error& e) {
      rejected = e.code() == ErrorCode::ValidationFailed && e.fields().count("student_number");
    }
    expect(rejected, std::string("registration with ") + bad + " was not rejected");
  }
  r.student_number = "2018-0001";
  expect(service.register_examinee(r).profile->student_number == "2018-0001", "2018-0001 not stored");
  return "1 accepted, 3 rejected";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"demo_certificate_reproduction", 1000ms, demo_certificate},
      {"grading_oracle", 5000ms, grading_oracle},
      {"outcome_boundary_sweep", 1000ms, boundary_sweep},
      {"shuffle_properties", 1000ms, shuffle_properties},
      {"item_analysis_oracle", 5000ms, item_oracle},
      {"timer_enforcement", 1000ms, timer_enforcement},
      {"concurrency_latency", 180000ms, simulate_40},
      {"crash_durability", 120000ms, crash_durability},
      {"registration_validation", 1000ms, registration_validation},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.body();
    } catch (const Failure& f) {
      ok = false;
      detail = f.why;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    if (ok && ms > c.limit) {
      ok = false;
      detail += "; runtime over " + std::to_string(c.limit.count()) + " ms";
    }
    failed += ok ? 0 : 1;
    std::cout << (ok ? "PASS " : "FAIL ") << c.name << " (" << ms.count() << " ms): " << detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
