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

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mockboard {

enum class ErrorCode {
  // assessment logic
  UnknownQuestion,
  DegenerateExam,
  WeightOverflow,
  ClockSkew,
  NoData,
  // persistence
  DuplicateKey,
  ForeignKeyMissing,
  DeleteRestricted,
  ExamInUse,
  NotVerified,
  Expired,
  AlreadyFinalized,
  NotFinalized,
  UnknownAttempt,
  UnknownAccount,
  UnknownExam,
  UnknownExaminee,
  UnknownCourse,
  UnknownAnnouncement,
  StorageFailure,
  // service
  ValidationFailed,
  BadCredentials,
  AwaitingVerification,
  Disabled,
  Unauthorized,
  Forbidden,
  NotOpen,
  AlreadyTaken,
  NotFound,
  // operator tooling
  SchemaError,
  NonEmptyStore,
};

/// Machine-readable name used in API envelopes, e.g. "AWAITING_VERIFICATION".
std::string_view code_name(ErrorCode code) noexcept;

/// Field name -> human message, for form-level validation feedback.
using FieldErrors = std::map<std::string, std::string>;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, FieldErrors fields = {})
      : std::runtime_error(message), code_(code), fields_(std::move(fields)) {}

  ErrorCode code() const noexcept { return code_; }
  const FieldErrors& fields() const noexcept { return fields_; }

 private:
  ErrorCode code_;
  FieldErrors fields_;
};

}  // namespace mockboard
