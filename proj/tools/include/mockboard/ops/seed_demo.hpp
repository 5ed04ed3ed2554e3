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

#include <string>
#include <vector>

#include "mockboard/store.hpp"
#include "mockboard/types.hpp"

namespace mockboard::ops {

struct DemoOptions {
  std::string admin_username = "admin";
  std::string admin_password = "admin123";
  std::string examinee_username = "noemi";
  std::string examinee_password = "noemi123";
};

struct DemoSummary {
  AccountId admin;
  AccountId examinee;
  CourseId course;
  /// The five criminology subject exams, in authoring order.
  std::vector<ExamId> exams;
  std::vector<AttemptId> attempts;
};

/// Populates an empty store with the demonstration data set: five degree
/// programs, the criminology program's five subject exams (10 questions
/// each), one verified examinee with three finalized attempts scoring 0, 3
/// and 9 correct, and one announcement. Throws Error{NonEmptyStore}.
DemoSummary seed_demo(Store& store, const DemoOptions& options = {});

}  // namespace mockboard::ops
