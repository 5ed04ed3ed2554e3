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
#include "mockboard/ops/question_bank.hpp"
#include "mockboard/ops/seed_demo.hpp"
#include "mockboard/store.hpp"
#include "support.hpp"

using namespace mockboard;
using mbtest::code_of;

namespace {

const Instant kT0 = make_instant(2018, 11, 21, 8, 0, 0);

struct Fixture {
  mbtest::TempDir dir;
  Store store{mbtest::options_for(dir.path(), false)};
  Course course = store.create_course("BSCRIM", {}, "admin", kT0);

  ExamId blank_exam(const std::string& name) {
    mbtest::ExamSpec spec;
    spec.name = name;
    spec.questions = 0;
    return mbtest::add_exam(store, course.id, spec, kT0).id;
  }
};

std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces{"alpha", " ", ",", "\"", "ñ", "\n", "law", "x", "'", "é"};
  std::string s = "q";
  const std::size_t n = rng() % 8;
  for (std::size_t i = 0; i < n; ++i) s += pieces[rng() % pieces.size()];
  return s + "!";
}

struct Comparable {
  std::string stem;
  std::vector<std::string> choices;
  std::size_t correct;
  std::optional<std::string> category;
  bool operator==(const Comparable&) const = default;
};

std::vector<Comparable> comparable(const std::vector<Question>& qs) {
  std::vector<Comparable> out;
  for (const auto& q : qs) out.push_back({q.stem, q.choices, q.correct_index, q.category});
  return out;
}

}  // namespace

TEST_CASE("question bank export then import is identity") {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 25; ++round) {
    Fixture f;
    const ExamId source = f.blank_exam("Source");
    std::vector<Question> drafts;
    const std::size_t n = 1 + rng() % 30;
    for (std::size_t i = 0; i < n; ++i) {
      Question q;
      q.exam_id = source;
      q.stem = random_text(rng);
      const std::size_t k = 2 + rng() % 4;
      for (std::size_t c = 0; c < k; ++c) q.choices.push_back(random_text(rng));
      q.correct_index = rng() % k;
      if (rng() % 2) q.category = random_text(rng);
      drafts.push_back(q);
    }
    f.store.create_questions(source, drafts);
    const std::string csv = ops::export_questions(f.store, source);

    const ExamId target = f.blank_exam("Target");
    CHECK(ops::import_questions(f.store, target, csv) == n);
    CHECK(comparable(f.store.questions(target)) == comparable(f.store.questions(source)));
    CHECK(ops::export_questions(f.store, target).size() == csv.size());
  }
}

TEST_CASE("a bad row aborts the whole import") {
  Fixture f;
  const ExamId e = f.blank_exam("Law");
  const std::string csv = std::string(ops::kQuestionBankHeader) +
                          "\nLaw,First,a,b,,,,A,\nLaw,Second,a,b,c,,,F,\nLaw,Third,a,b,,,,B,\n";
  try {
    ops::import_questions(f.store, e, csv);
    FAIL("expected SchemaError");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::SchemaError);
    CHECK(err.fields().at("line") == "3");
  }
  CHECK(f.store.questions(e).empty());

  auto line_of = [&](const std::string& body) {
    try {
      ops::parse_question_bank(std::string(ops::kQuestionBankHeader) + "\n" + body, e);
    } catch (const Error& err) {
      return err.fields().at("line");
    }
    return std::string("none");
  };
  CHECK(line_of("Law,Stem,a,b,,,,C,\n") == "2");       // letter names an empty choice
  CHECK(line_of("Law,Stem,a,,c,,,A,\n") == "2");       // gap in choices
  CHECK(line_of("Law, ,a,b,,,,A,\n") == "2");          // blank stem
  CHECK(line_of("Law,Stem,a,b,,,,A\n") == "2");        // 8 columns
  CHECK(line_of("Law,Stem,a,,,,,A,\n") == "2");        // one choice
  CHECK(line_of("Law,Stem,a,b,,,, b ,cat\n") == "2");  // lower case
  CHECK(line_of("Law,Stem,a,b,,,, B ,cat\n") == "none");
  CHECK(code_of([&] { ops::parse_question_bank("stem,choice\n", e); }) == ErrorCode::SchemaError);
  CHECK(code_of([&] { ops::import_questions(f.store, ExamId{999}, ""); }) == ErrorCode::UnknownExam);
}

TEST_CASE("demo data set") {
  Fixture f;
  CHECK(code_of([&] { ops::seed_demo(f.store); }) == ErrorCode::NonEmptyStore);

  mbtest::TempDir dir;
  Store store(mbtest::options_for(dir.path(), false));
  const auto demo = ops::seed_demo(store);
  CHECK(store.courses().size() == 5);
  CHECK(demo.exams.size() == 5);
  CHECK(demo.attempts.size() == 3);
  CHECK(store.account(demo.examinee)->status == AccountStatus::Verified);
  CHECK(store.announcements().front().body == "NOTICE: Have a nice day!");
  CHECK(code_of([&] { ops::seed_demo(store); }) == ErrorCode::NonEmptyStore);
}
