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

#include <doctest.h>

#include <random>

#include "mockboard/error.hpp"
#include "mockboard/reporting.hpp"
#include "mockboard/store.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mockboard;
using mbtest::code_of;
using mbtest::ExamSpec;

namespace {

const Instant kT0 = make_instant(2018, 11, 21, 8, 0, 0);

struct Fixture {
  mbtest::TempDir dir;
  Store store{mbtest::options_for(dir.path(), false)};
  Course course = store.create_course("BSCRIM", {}, "admin", kT0);

  Account examinee(const std::string& user, const std::string& number,
                   const std::string& last = "Dela Cruz", const std::string& first = "Juan") {
    Account a = mbtest::examinee_draft(user, "secret1", number, course.id);
    a.profile->last_name = last;
    a.profile->first_name = first;
    return store.create_account(a, kT0);
  }

  /// Answers the first `correct` questions right and the rest wrong.
  Attempt sit(ExamId exam, AccountId who, int correct, int attempt_no = 1,
              Instant at = kT0) {
    const Attempt a = store.create_attempt(exam, who, attempt_no, 1, at);
    const auto qs = store.questions(exam);
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const std::size_t choice = static_cast<int>(i) < correct
                                     ? qs[i].correct_index
                                     : (qs[i].correct_index + 1) % qs[i].choices.size();
      store.record_answer(a.id, qs[i].id, choice, at);
    }
    return store.finalize_attempt(a.id, at + std::chrono::minutes{10});
  }
};

}  // namespace

TEST_CASE("score text") {
  CHECK(reporting::score_text(Points{135}, Percent::whole(15)) == "13.5 of 15%");
  CHECK(reporting::score_text(Points{0}, Percent::whole(20)) == "0.0 of 20%");
  CHECK(reporting::score_text(Points{125}, Percent::from_hundredths(1250)) == "12.5 of 12.5%");
}

TEST_CASE("certificate uses the latest finalized attempt per exam") {
  Fixture f;
  ExamSpec a_spec;
  a_spec.name = "Jurisprudence";
  a_spec.weight = 40;
  a_spec.reexam_date = std::chrono::year{2018} / 11 / 21;
  ExamSpec b_spec;
  b_spec.name = "Ethics";
  b_spec.weight = 60;
  const Exam a = mbtest::add_exam(f.store, f.course.id, a_spec, kT0);
  const Exam b = mbtest::add_exam(f.store, f.course.id, b_spec, kT0);
  const Account who = f.examinee("juan", "2018-0001");

  f.sit(a.id, who.id, 5);
  f.sit(a.id, who.id, 8, 2);
  f.sit(b.id, who.id, 9);
  const auto seq = f.store.last_seq();
  const auto cert = reporting::build_certificate(f.store, who.id, Percent::whole(75), kT0);
  CHECK(f.store.last_seq() == seq);

  CHECK(cert.examinee_name == "Dela Cruz, Juan Santos");
  CHECK(cert.course_name == "BSCRIM");
  REQUIRE(cert.rows.size() == 2);
  CHECK(cert.rows[0].exam_name == "Jurisprudence");
  CHECK(cert.rows[0].attempt_no == 2);
  CHECK(cert.rows[0].score() == "32.0 of 40%");
  CHECK(cert.rows[0].outcome == Outcome::Passed);
  CHECK(cert.rows[1].score() == "54.0 of 60%");
  CHECK(cert.overall_rating == Points{860});
  CHECK(cert.overall_outcome == Outcome::Passed);

  const std::string html = reporting::render_certificate_html(cert);
  CHECK(html.find("32.0 of 40%") != std::string::npos);
  CHECK(html.find("86.0") != std::string::npos);
  CHECK(html.find("http") == std::string::npos);
}

TEST_CASE("certificate escapes html and rejects overweight programs") {
  Fixture f;
  const Account who = f.examinee("evil", "2018-0002", "<script>alert(1)</script>", "A&B");
  ExamSpec s1;
  s1.weight = 60;
  ExamSpec s2 = s1;
  s2.name = "Second";
  const Exam e1 = mbtest::add_exam(f.store, f.course.id, s1, kT0);
  f.sit(e1.id, who.id, 10);
  const auto cert = reporting::build_certificate(f.store, who.id, Percent::whole(75), kT0);
  const std::string html = reporting::render_certificate_html(cert);
  CHECK(html.find("<script>") == std::string::npos);
  CHECK(html.find("&lt;script&gt;") != std::string::npos);
  CHECK(html.find("A&amp;B") != std::string::npos);

  const Exam e2 = mbtest::add_exam(f.store, f.course.id, s2, kT0);
  f.sit(e2.id, who.id, 10);
  CHECK(code_of([&] { reporting::build_certificate(f.store, who.id, Percent::whole(75), kT0); }) ==
        ErrorCode::WeightOverflow);
  CHECK(code_of([&] { reporting::build_certificate(f.store, AccountId{999}, Percent::whole(75), kT0); }) ==
        ErrorCode::UnknownExaminee);
}

TEST_CASE("grade report csv round-trips awkward names") {
  Fixture f;
  const Exam e = mbtest::add_exam(f.store, f.course.id, ExamSpec{}, kT0);
  const Account a = f.examinee("a", "2018-0001", "O\"Brien, Jr.", "Seán");
  const Account b = f.examinee("b", "2018-0002", "Ñuñez", "Ma. Luisa\nLine");
  const Account c = f.examinee("c", "2018-0003");
  f.sit(e.id, a.id, 7);
  f.sit(e.id, b.id, 10);
  f.store.create_attempt(e.id, c.id, 1, 1, kT0);  // still running: not reported

  const auto report = reporting::grade_report(f.store, e.id);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].raw == 7);
  CHECK(report.rows[0].outcome == Outcome::Failed);
  CHECK(report.rows[1].weighted == Points{1000});

  const std::string text = reporting::grade_report_csv(report);
  CHECK(text.rfind(std::string(reporting::kGradeReportHeader) + "\r\n", 0) == 0);
  CHECK(reporting::parse_grade_report_csv(text) == report.rows);
  CHECK(code_of([&] { reporting::parse_grade_report_csv("wrong,header\r\n"); }) == ErrorCode::SchemaError);
  CHECK(code_of([&] { reporting::grade_report(f.store, ExamId{999}); }) == ErrorCode::UnknownExam);
}

TEST_CASE("item statistics match the oracle") {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 1 + rng() % 60;
    Question q;
    q.id = QuestionId{1};
    q.choices = {"a", "b", "c", "d"};
    q.correct_index = rng() % 4;

    std::vector<core::AnswerMap> answers(n);
    std::vector<reporting::CohortMember> cohort;
    std::vector<std::pair<std::optional<int>, int>> oracle_responses;
    std::vector<mbtest::oracle::Member> oracle_members;
    for (std::size_t i = 0; i < n; ++i) {
      std::optional<int> chosen;
      if (rng() % 5 != 0) {
        chosen = static_cast<int>(rng() % 4);
        answers[i][q.id] = static_cast<std::size_t>(*chosen);
      }
      const int total = static_cast<int>(rng() % 11);
      cohort.push_back({AccountId{100 + i}, total, &answers[i]});
      oracle_responses.emplace_back(chosen, static_cast<int>(q.correct_index));
      oracle_members.push_back({100 + i, total, chosen && *chosen == static_cast<int>(q.correct_index)});
    }
    const ItemStats st = reporting::compute_item_stats(q, cohort);
    CHECK(st.n_responses == n);
    CHECK(std::abs(st.difficulty - mbtest::oracle::difficulty(oracle_responses)) <= 1e-9);
    if (n >= 2) {
      REQUIRE(st.discrimination);
      CHECK(std::abs(*st.discrimination - mbtest::oracle::discrimination(oracle_members)) <= 1e-9);
    } else {
      CHECK_FALSE(st.discrimination);
    }
    std::size_t counted = 0;
    for (auto c : st.choice_distribution) counted += c;
    CHECK(st.choice_distribution.size() == 4);
    CHECK(counted <= n);
  }
  Question q;
  q.choices = {"a", "b"};
  CHECK(code_of([&] { reporting::compute_item_stats(q, {}); }) == ErrorCode::NoData);
}

TEST_CASE("item analysis report over a store") {
  Fixture f;
  const Exam e = mbtest::add_exam(f.store, f.course.id, ExamSpec{}, kT0);
  const auto empty = reporting::item_analysis_report(f.store, e.id);
  CHECK(empty.cohort_size == 0);
  REQUIRE(empty.items.size() == 10);
  CHECK_FALSE(empty.items[0].stats);

  for (int i = 0; i < 6; ++i) {
    const Account who = f.examinee("u" + std::to_string(i), "2018-000" + std::to_string(i));
    f.sit(e.id, who.id, i * 2);
  }
  const auto seq = f.store.last_seq();
  const auto report = reporting::item_analysis_report(f.store, e.id);
  CHECK(f.store.last_seq() == seq);
  CHECK(report.cohort_size == 6);
  REQUIRE(report.items[0].stats);
  // Item 1 is right for the five examinees with at least 2 correct.
  CHECK(report.items[0].stats->difficulty == doctest::Approx(5.0 / 6.0));
  CHECK(report.items[9].stats->difficulty == doctest::Approx(1.0 / 6.0));
  CHECK(report.items[9].flagged);
  CHECK(report.items[0].position == 1);
}

TEST_CASE("excerpt counts code points") {
  CHECK(reporting::excerpt("short") == "short");
  CHECK(reporting::excerpt("ñññññ", 3) == "ñññ...");
  CHECK(reporting::excerpt(std::string(70, 'x')).size() == 63);
}

TEST_CASE("review flags") {
  ItemStats s;
  s.difficulty = 0.5;
  s.discrimination = 0.3;
  CHECK_FALSE(reporting::needs_review(s));
  s.difficulty = 0.95;
  CHECK(reporting::needs_review(s));
  s.difficulty = 0.5;
  s.discrimination = 0.1;
  CHECK(reporting::needs_review(s));
  s.discrimination.reset();
  CHECK_FALSE(reporting::needs_review(s));
}
