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

#include <atomic>
#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace mockboard {

/// Server-side instants have whole-second resolution, UTC.
using Instant = std::chrono::sys_seconds;
using Date = std::chrono::year_month_day;

/// "2018-11-23T16:11:13Z"
std::string format_instant(Instant t);
std::optional<Instant> parse_instant(std::string_view text);

/// "2018-11-21"
std::string format_date(Date d);
std::optional<Date> parse_date(std::string_view text);

/// Calendar date of `t` after shifting by a fixed UTC offset.
Date date_of(Instant t, std::chrono::minutes utc_offset = std::chrono::minutes{0});

/// Civil instant from calendar components; for fixtures and seeding.
Instant make_instant(int year, unsigned month, unsigned day, int hour = 0, int minute = 0,
                     int second = 0);

/// The authority for "now". Everything deadline-related reads time through
/// one of these so that tests can drive the clock.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual Instant now() const = 0;
};

class SystemClock final : public Clock {
 public:
  Instant now() const override;
};

/// Test clock; starts wherever it is told and only moves when asked.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(Instant start) : now_(start.time_since_epoch().count()) {}

  Instant now() const override { return Instant{std::chrono::seconds{now_.load()}}; }
  void set(Instant t) { now_.store(t.time_since_epoch().count()); }
  void advance(std::chrono::seconds by) { now_.fetch_add(by.count()); }

 private:
  std::atomic<std::int64_t> now_;
};

}  // namespace mockboard
