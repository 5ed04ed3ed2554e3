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

// Shared fixtures for the test binaries.

#include <sys/types.h>

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mockboard/error.hpp"
#include "mockboard/store.hpp"
#include "mockboard/types.hpp"

namespace mbtest {

using namespace mockboard;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

StoreOptions options_for(const std::filesystem::path& dir, bool sync = true);

/// Cheap digests keep fixture setup fast; production uses the full count.
inline constexpr std::uint32_t kFixtureRounds = 1000;

Account admin_draft(const std::string& username, const std::string& password,
                    std::optional<CourseId> scope = std::nullopt);
Account examinee_draft(const std::string& username, const std::string& password,
                       const std::string& student_number, CourseId course,
                       AccountStatus status = AccountStatus::Verified,
                       std::optional<MajorId> major = std::nullopt);

struct ExamSpec {
  std::string name = "Subject";
  int questions = 10;
  std::size_t choices = 4;
  int duration_minutes = 60;
  int passing_rate = 75;
  int weight = 100;
  Date exam_date = std::chrono::year{2018} / 11 / 21;
  std::optional<Date> reexam_date;
};

/// Exam plus questions whose key is (i * 3) % choices.
Exam add_exam(Store& store, CourseId course, const ExamSpec& spec, Instant now);

/// Key of an exam in authored question order.
std::vector<std::size_t> answer_key(const Store& store, ExamId exam);

/// Code of the Error thrown by `f`; fails the test when nothing is thrown.
ErrorCode code_of(const std::function<void()>& f);

// -- child processes --

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs to completion, capturing stdout and stderr.
RunResult run(const std::vector<std::string>& argv);

/// Long-running child with stdout on a pipe; stderr goes to `err_file`.
class Child {
 public:
  Child(const std::vector<std::string>& argv, const std::filesystem::path& err_file);
  ~Child();
  Child(const Child&) = delete;
  Child& operator=(const Child&) = delete;

  /// Next stdout line, or nullopt on EOF/timeout.
  std::optional<std::string> read_line(std::chrono::milliseconds timeout);
  void signal(int sig);
  /// Exit status (or 128 + signal).
  int wait();
  pid_t pid() const { return pid_; }

 private:
  pid_t pid_ = -1;
  int out_fd_ = -1;
  std::string buffer_;
  bool reaped_ = false;
  int status_ = -1;
};

/// Path of the opsctl binary from OPSCTL_PATH.
std::string opsctl_path();

/// Starts `opsctl serve` on an ephemeral loopback port and returns the port.
int start_server(Child& child);

}  // namespace mbtest
