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

#include "mockboard/ops/question_bank.hpp"

#include "mockboard/csv.hpp"
#include "mockboard/error.hpp"

namespace mockboard::ops {

namespace {

constexpr std::size_t kColumns = 9;
constexpr std::size_t kFirstChoice = 2;
constexpr std::size_t kMaxChoices = 5;

[[noreturn]] void schema_error(std::size_t line, const std::string& why) {
  throw Error(ErrorCode::SchemaError, "line " + std::to_string(line) + ": " + why,
              {{"line", std::to_string(line)}});
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

csv::Row header_columns() { return csv::parse(kQuestionBankHeader).front().fields; }

}  // namespace

std::vector<Question> parse_question_bank(std::string_view text, ExamId exam) {
  const auto rows = csv::parse(text);
  if (rows.empty()) schema_error(1, "missing header row");

  csv::Row header;
  for (const auto& f : rows.front().fields) header.push_back(trim(f));
  if (header != header_columns()) {
    schema_error(rows.front().line, "header must be " + std::string(kQuestionBankHeader));
  }

  std::vector<Question> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& [fields, line] = rows[r];
    if (fields.size() != kColumns) {
      schema_error(line, "expected " + std::to_string(kColumns) + " columns, found " +
                             std::to_string(fields.size()));
    }
    Question q;
    q.exam_id = exam;
    q.stem = fields[1];
    if (is_blank(q.stem)) schema_error(line, "stem is empty");

    bool gap = false;
    for (std::size_t c = 0; c < kMaxChoices; ++c) {
      const std::string& choice = fields[kFirstChoice + c];
      if (is_blank(choice)) {
        gap = true;
      } else {
        if (gap) {
          schema_error(line, std::string("choice_") + static_cast<char>('a' + c) +
                                 " follows an empty choice");
        }
        q.choices.push_back(choice);
      }
    }
    if (q.choices.size() < 2) schema_error(line, "at least choice_a and choice_b are required");

    const std::string letter = trim(fields[7]);
    if (letter.size() != 1 || letter[0] < 'A' || letter[0] > 'E') {
      schema_error(line, "correct must be a letter A-E, found \"" + fields[7] + "\"");
    }
    q.correct_index = static_cast<std::size_t>(letter[0] - 'A');
    if (q.correct_index >= q.choices.size()) {
      schema_error(line, "correct letter " + letter + " names an empty choice");
    }
    if (!is_blank(fields[8])) q.category = fields[8];
    out.push_back(std::move(q));
  }
  return out;
}

std::size_t import_questions(Store& store, ExamId exam, std::string_view csv) {
  if (!store.exam(exam)) throw Error(ErrorCode::UnknownExam, "no such exam");
  auto questions = parse_question_bank(csv, exam);
  const std::size_t n = questions.size();
  if (n > 0) store.create_questions(exam, std::move(questions));
  return n;
}

std::string export_questions(const Store& store, ExamId exam) {
  const auto e = store.exam(exam);
  if (!e) throw Error(ErrorCode::UnknownExam, "no such exam");
  csv::Writer w;
  w.row(header_columns());
  for (const auto& q : store.questions(exam)) {
    csv::Row row{e->name, q.stem};
    for (std::size_t c = 0; c < kMaxChoices; ++c) {
      row.push_back(c < q.choices.size() ? q.choices[c] : "");
    }
    row.push_back(std::string(1, static_cast<char>('A' + q.correct_index)));
    row.push_back(q.category.value_or(""));
    w.row(row);
  }
  return w.take();
}

}  // namespace mockboard::ops
