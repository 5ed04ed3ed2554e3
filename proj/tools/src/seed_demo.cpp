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

#include "mockboard/ops/seed_demo.hpp"

#include <array>
#include <chrono>

#include "mockboard/error.hpp"
#include "mockboard/password.hpp"

namespace mockboard::ops {

namespace {

using namespace std::chrono_literals;

struct DemoCourse {
  const char* name;
  Instant created;
};

struct DemoExam {
  const char* name;
  int weight;
};

struct DemoAttempt {
  int correct;
  Instant finalized;
};

constexpr int kQuestionsPerExam = 10;
constexpr std::size_t kChoices = 4;

}  // namespace

DemoSummary seed_demo(Store& store, const DemoOptions& options) {
  if (!store.empty()) {
    throw Error(ErrorCode::NonEmptyStore, "seed-demo needs an empty data directory");
  }

  const std::array<DemoCourse, 5> courses{{
      {"Bachelor of Science in Criminology", make_instant(2018, 8, 23, 10, 25, 6)},
      {"Bachelor of Science in Secondary Education", make_instant(2018, 11, 14, 15, 49, 32)},
      {"Bachelor of Science in Fisheries", make_instant(2018, 11, 14, 15, 50, 4)},
      {"Bachelor of Science in Elementary Education", make_instant(2018, 11, 14, 15, 50, 47)},
      {"Bachelor of Science in Agriculture", make_instant(2018, 11, 25, 22, 49, 39)},
  }};
  const std::array<DemoExam, 5> exams{{
      {"Criminal Jurisprudence, Procedure And Evidence for BSCRIM", 20},
      {"Law Enforcement Administration for BSCRIM", 20},
      {"Crime Detection and Investigation for BSCRIM", 15},
      {"Sociology of Crimes and Ethics for BSCRIM", 15},
      {"Correctional Administration for BSCRIM", 30},
  }};
  const std::array<DemoAttempt, 3> attempts{{
      {0, make_instant(2018, 11, 23, 16, 11, 13)},
      {3, make_instant(2018, 11, 25, 14, 11, 1)},
      {9, make_instant(2018, 11, 25, 21, 11, 30)},
  }};

  DemoSummary out;
  const Instant setup = make_instant(2018, 8, 1, 8, 0, 0);

  Account admin;
  admin.username = options.admin_username;
  admin.password_digest = crypto::hash_password(options.admin_password);
  admin.role = Role::Admin;
  admin.status = AccountStatus::Verified;
  out.admin = store.create_account(std::move(admin), setup).id;

  std::vector<CourseId> course_ids;
  for (const auto& c : courses) {
    course_ids.push_back(store.create_course(c.name, {}, options.admin_username, c.created).id);
  }
  // The secondary education program carries an edit timestamp.
  store.update_course(course_ids[1], courses[1].name, {}, make_instant(2018, 11, 16, 12, 22, 55));
  out.course = course_ids[0];

  for (std::size_t e = 0; e < exams.size(); ++e) {
    Exam draft;
    draft.course_id = out.course;
    draft.name = exams[e].name;
    draft.instructions = "Choose the best answer. The timer starts when the exam opens.";
    draft.exam_date = std::chrono::year{2018} / 11 / 21;
    draft.duration_minutes = 60;
    draft.passing_rate = Percent::whole(75);
    draft.weight = Percent::whole(exams[e].weight);
    const Exam exam = store.create_exam(std::move(draft), make_instant(2018, 11, 20, 9, 0, 0));
    out.exams.push_back(exam.id);

    std::vector<Question> questions;
    for (int i = 0; i < kQuestionsPerExam; ++i) {
      Question q;
      q.exam_id = exam.id;
      q.stem = "Item " + std::to_string(i + 1) + " of " + exam.name;
      for (std::size_t c = 0; c < kChoices; ++c) {
        q.choices.push_back("Option " + std::string(1, static_cast<char>('A' + c)) + " for item " +
                            std::to_string(i + 1));
      }
      q.correct_index = static_cast<std::size_t>(i * 3 + static_cast<int>(e)) % kChoices;
      q.category = "Review";
      questions.push_back(std::move(q));
    }
    store.create_questions(exam.id, std::move(questions));
  }

  Account examinee;
  examinee.username = options.examinee_username;
  examinee.password_digest = crypto::hash_password(options.examinee_password);
  examinee.role = Role::Examinee;
  examinee.status = AccountStatus::Verified;
  ExamineeProfile p;
  p.student_number = "2018-0001";
  p.last_name = "FALLAN";
  p.first_name = "NOEMI";
  p.middle_name = "MARASIGAN";
  p.address = "Bongabong, Oriental Mindoro";
  p.contact_number = "09170000001";
  p.birthdate = std::chrono::year{1997} / 5 / 14;
  p.course_id = out.course;
  p.terms_accepted = true;
  examinee.profile = std::move(p);
  out.examinee = store.create_account(std::move(examinee), make_instant(2018, 11, 20, 10, 0, 0)).id;

  for (std::size_t i = 0; i < attempts.size(); ++i) {
    const Instant started = attempts[i].finalized - 30min;
    const Attempt a =
        store.create_attempt(out.exams[i], out.examinee, 1, static_cast<std::uint64_t>(i + 1), started);
    const auto questions = store.questions(out.exams[i]);
    for (std::size_t q = 0; q < questions.size(); ++q) {
      const std::size_t key = questions[q].correct_index;
      const bool right = static_cast<int>(q) < attempts[i].correct;
      store.record_answer(a.id, questions[q].id, right ? key : (key + 1) % kChoices,
                          started + std::chrono::minutes{q + 1});
    }
    store.finalize_attempt(a.id, attempts[i].finalized);
    out.attempts.push_back(a.id);
  }

  store.create_announcement("NOTICE: Have a nice day!", options.admin_username,
                            make_instant(2018, 11, 23, 16, 32, 0));
  return out;
}

}  // namespace mockboard::ops
