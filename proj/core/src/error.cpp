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

#include "mockboard/error.hpp"

namespace mockboard {

std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownQuestion: return "UNKNOWN_QUESTION";
    case ErrorCode::DegenerateExam: return "DEGENERATE_EXAM";
    case ErrorCode::WeightOverflow: return "WEIGHT_OVERFLOW";
    case ErrorCode::ClockSkew: return "CLOCK_SKEW";
    case ErrorCode::NoData: return "NO_DATA";
    case ErrorCode::DuplicateKey: return "DUPLICATE_KEY";
    case ErrorCode::ForeignKeyMissing: return "FOREIGN_KEY_MISSING";
    case ErrorCode::DeleteRestricted: return "DELETE_RESTRICTED";
    case ErrorCode::ExamInUse: return "EXAM_IN_USE";
    case ErrorCode::NotVerified: return "NOT_VERIFIED";
    case ErrorCode::Expired: return "EXPIRED";
    case ErrorCode::AlreadyFinalized: return "ALREADY_FINALIZED";
    case ErrorCode::NotFinalized: return "NOT_FINALIZED";
    case ErrorCode::UnknownAttempt: return "UNKNOWN_ATTEMPT";
    case ErrorCode::UnknownAccount: return "UNKNOWN_ACCOUNT";
    case ErrorCode::UnknownExam: return "UNKNOWN_EXAM";
    case ErrorCode::UnknownExaminee: return "UNKNOWN_EXAMINEE";
    case ErrorCode::UnknownCourse: return "UNKNOWN_COURSE";
    case ErrorCode::UnknownAnnouncement: return "UNKNOWN_ANNOUNCEMENT";
    case ErrorCode::StorageFailure: return "STORAGE_FAILURE";
    case ErrorCode::ValidationFailed: return "VALIDATION_FAILED";
    case ErrorCode::BadCredentials: return "BAD_CREDENTIALS";
    case ErrorCode::AwaitingVerification: return "AWAITING_VERIFICATION";
    case ErrorCode::Disabled: return "DISABLED";
    case ErrorCode::Unauthorized: return "UNAUTHORIZED";
    case ErrorCode::Forbidden: return "FORBIDDEN";
    case ErrorCode::NotOpen: return "NOT_OPEN";
    case ErrorCode::AlreadyTaken: return "ALREADY_TAKEN";
    case ErrorCode::NotFound: return "NOT_FOUND";
    case ErrorCode::SchemaError: return "SCHEMA_ERROR";
    case ErrorCode::NonEmptyStore: return "NON_EMPTY_STORE";
  }
  return "UNKNOWN";
}

}  // namespace mockboard
