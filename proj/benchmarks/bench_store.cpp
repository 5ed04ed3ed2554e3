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

#include <benchmark/benchmark.h>
#include <stdlib.h>

#include <filesystem>

#include "mockboard/store.hpp"

using namespace mockboard;

namespace {

const Instant kT0 = make_instant(2018, 11, 21, 8, 0, 0);

struct Scratch {
  std::filesystem::path dir;
  std::unique_ptr<Store> store;
  AttemptId attempt;
  std::vector<QuestionId> questions;

  explicit Scratch(bool sync) {
    std::string tmpl = (std::filesystem::temp_directory_path() / "mockboard-bench-XXXXXX").string();
    dir = mkdtemp(tmpl.data());
    StoreOptions o;
    o.data_dir = dir;
    o.sync = sync;
    store = std::make_unique<Store>(o);
    const Course c = store->create_course("BSCRIM", {}, "admin", kT0);
    Account a;
    a.username = "juan";
    a.password_digest = "x";
    ExamineeProfile p;
    p.student_number = "2018-0001";
    p.last_name = "Dela Cruz";
    p.first_name = "Juan";
    p.middle_name = "Santos";
    p.address = "Calapan";
    p.contact_number = "0917";
    p.birthdate = std::chrono::year{1998} / 1 / 2;
    p.course_id = c.id;
    p.terms_accepted = true;
    a.profile = p;
    a.status = AccountStatus::Verified;
    const Account acc = store->create_account(a, kT0);
    Exam e;
    e.course_id = c.id;
    e.name = "Subject";
    e.exam_date = std::chrono::year{2018} / 11 / 21;
    const Exam exam = store->create_exam(e, kT0);
    std::vector<Question> qs(100);
    for (auto& q : qs) {
      q.exam_id = exam.id;
      q.stem = "stem";
      q.choices = {"a", "b", "c", "d"};
    }
    for (const auto& q : store->create_questions(exam.id, qs)) questions.push_back(q.id);
    attempt = store->create_attempt(exam.id, acc.id, 1, 1, kT0).id;
  }
  ~Scratch() {
    store.reset();
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
  }
};

void BM_RecordAnswer(benchmark::State& state) {
  Scratch s(state.range(0) != 0);
  std::size_t i = 0;
  for (auto _ : state) {
    s.store->record_answer(s.attempt, s.questions[i % s.questions.size()], i % 4, kT0);
    ++i;
  }
}
BENCHMARK(BM_RecordAnswer)->Arg(0)->Arg(1)->UseRealTime();

void BM_ReadAttempt(benchmark::State& state) {
  Scratch s(false);
  for (auto _ : state) benchmark::DoNotOptimize(s.store->attempt(s.attempt));
}
BENCHMARK(BM_ReadAttempt);

void BM_Reopen(benchmark::State& state) {
  Scratch s(false);
  for (int i = 0; i < 2000; ++i) s.store->record_answer(s.attempt, s.questions[i % 100], i % 4, kT0);
  StoreOptions o = s.store->options();
  s.store.reset();
  for (auto _ : state) {
    Store reopened(o);
    benchmark::DoNotOptimize(reopened.last_seq());
  }
}
BENCHMARK(BM_Reopen)->Unit(benchmark::kMillisecond);

}  // namespace
