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

#include "mockboard/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace mockboard {

std::optional<Percent> Percent::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::int64_t whole = 0;
  std::int64_t frac = 0;
  int frac_digits = 0;
  bool seen_dot = false;
  bool seen_digit = false;
  for (char c : text) {
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    seen_digit = true;
    if (seen_dot) {
      if (++frac_digits > 2) return std::nullopt;
      frac = frac * 10 + (c - '0');
    } else {
      whole = whole * 10 + (c - '0');
      if (whole > 1'000'000) return std::nullopt;
    }
  }
  if (!seen_digit) return std::nullopt;
  if (frac_digits == 1) frac *= 10;
  return Percent{whole * 100 + frac};
}

std::optional<Percent> Percent::from_double(double value) {
  if (!std::isfinite(value) || value < 0 || value > 1e6) return std::nullopt;
  return Percent{static_cast<std::int64_t>(std::llround(value * 100.0))};
}

std::string Percent::str() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%02lld", static_cast<long long>(hundredths_ / 100),
                static_cast<long long>(hundredths_ % 100));
  return buf;
}

std::string Percent::compact() const {
  std::string s = str();
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

std::string Points::str() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%lld", static_cast<long long>(tenths / 10),
                static_cast<long long>(tenths % 10));
  return buf;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::InProgress: return "InProgress";
    case Outcome::Passed: return "Passed";
    case Outcome::Failed: return "Failed";
  }
  return "";
}

std::string_view to_string(Role r) { return r == Role::Admin ? "Admin" : "Examinee"; }

std::string_view to_string(AccountStatus s) {
  switch (s) {
    case AccountStatus::Pending: return "Pending";
    case AccountStatus::Verified: return "Verified";
    case AccountStatus::Disabled: return "Disabled";
  }
  return "";
}

std::string_view to_string(ExamStatus s) {
  switch (s) {
    case ExamStatus::Locked: return "Locked";
    case ExamStatus::TakeExam: return "TakeExam";
    case ExamStatus::Retake: return "Retake";
    case ExamStatus::ViewCertificate: return "ViewCertificate";
  }
  return "";
}

std::optional<Outcome> parse_outcome(std::string_view s) {
  if (s == "InProgress") return Outcome::InProgress;
  if (s == "Passed") return Outcome::Passed;
  if (s == "Failed") return Outcome::Failed;
  return std::nullopt;
}

std::optional<Role> parse_role(std::string_view s) {
  if (s == "Admin") return Role::Admin;
  if (s == "Examinee") return Role::Examinee;
  return std::nullopt;
}

std::optional<AccountStatus> parse_account_status(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "pending") return AccountStatus::Pending;
  if (lower == "verified") return AccountStatus::Verified;
  if (lower == "disabled") return AccountStatus::Disabled;
  return std::nullopt;
}

std::string ExamineeProfile::display_name() const {
  std::string name = last_name + ", " + first_name;
  if (!middle_name.empty()) name += " " + middle_name;
  return name;
}

bool Course::has_major(MajorId m) const {
  return std::any_of(majors.begin(), majors.end(), [&](const Major& x) { return x.id == m; });
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace mockboard
