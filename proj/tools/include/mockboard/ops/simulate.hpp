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

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mockboard::ops {

struct SimulateOptions {
  std::string server = "http://127.0.0.1:8080";
  int examinees = 40;
  std::uint64_t exam_id = 0;
  std::string admin_username = "admin";
  std::string admin_password;
  /// Questions each virtual examinee answers correctly; random when unset.
  std::optional<int> correct;
  std::uint64_t seed = 1;
  std::chrono::seconds timeout{60};
};

struct ExamineeRun {
  int index = 0;
  bool completed = false;
  std::string error;
  int answered = 0;
  int expected_raw = 0;
  int reported_raw = -1;
  std::string score;
  /// Acknowledged answers missing or different on read-back or in the result.
  int lost_answers = 0;
  double submit_ms = 0.0;
};

struct SimulateReport {
  int requested = 0;
  /// Set when the run could not get past setup (server down, bad exam).
  std::string setup_error;
  int completed = 0;
  int failures = 0;
  int mismatches = 0;
  int lost_answers = 0;
  double max_submit_ms = 0.0;
  double mean_submit_ms = 0.0;
  /// First submit sent to last result received.
  double submit_wall_ms = 0.0;
  double total_wall_ms = 0.0;
  std::vector<ExamineeRun> runs;

  /// 0 clean, 2 integrity violation, 1 operational failure.
  int exit_code() const;
  std::string to_json() const;
  std::string to_text() const;
};

/// Registers N examinees, verifies them through the admin API, then runs
/// every take-exam flow concurrently (one connection each). Submits are
/// released together so the submit phase measures peak load. Never throws
/// for per-examinee failures; setup failures land in `runs` as errors.
SimulateReport simulate(const SimulateOptions& options);

}  // namespace mockboard::ops
