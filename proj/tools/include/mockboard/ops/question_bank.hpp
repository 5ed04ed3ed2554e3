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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mockboard/store.hpp"
#include "mockboard/types.hpp"

namespace mockboard::ops {

/// Question-bank interchange format. One question per row; choice_c..e may
/// be empty; correct is a letter A-E naming a present choice. The exam column
/// is written on export and ignored on import.
inline constexpr std::string_view kQuestionBankHeader =
    "exam,stem,choice_a,choice_b,choice_c,choice_d,choice_e,correct,category";

/// Validates every row. Throws Error{SchemaError} carrying the offending
/// line in fields()["line"].
std::vector<Question> parse_question_bank(std::string_view csv, ExamId exam);

/// All-or-nothing append to the exam's question list. Returns the count.
/// Throws SchemaError, UnknownExam, ExamInUse.
std::size_t import_questions(Store& store, ExamId exam, std::string_view csv);

/// Throws UnknownExam.
std::string export_questions(const Store& store, ExamId exam);

}  // namespace mockboard::ops
