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

#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace mockboard {

/// Append-only record log.
///
/// Each record is framed as
///
///     u32 payload length | u32 CRC-32 of (seq, payload) | u64 seq | payload
///
/// in little-endian byte order. On open, records are scanned from the start
/// and the file is truncated at the first frame that is short or fails its
/// checksum (a write torn by a crash). append() returns only once the
/// record is on stable storage; concurrent appenders share one fdatasync.
class Journal {
 public:
  struct Record {
    std::uint64_t seq = 0;
    std::string payload;
  };

  /// Opens or creates `file`. Intact records are available via recovered().
  Journal(std::filesystem::path file, bool sync = true);
  ~Journal();

  Journal(const Journal&) = delete;
  Journal& operator=(const Journal&) = delete;

  const std::vector<Record>& recovered() const { return recovered_; }
  void release_recovered() { std::vector<Record>{}.swap(recovered_); }

  /// Sequence numbers continue from max(last recovered seq, floor) + 1.
  void set_seq_floor(std::uint64_t floor);

  /// Durable when it returns. Returns the record's sequence number.
  std::uint64_t append(std::string_view payload);

  /// Drops every record. Durable when it returns.
  void reset();

  std::uint64_t last_seq() const;
  std::size_t records_since_reset() const;

  /// Number of bytes dropped from a torn tail when the file was opened.
  std::uint64_t truncated_bytes() const { return truncated_bytes_; }

 private:
  void sync_to(std::unique_lock<std::mutex>& lock, std::uint64_t target);

  std::filesystem::path path_;
  bool sync_;
  int fd_ = -1;
  std::vector<Record> recovered_;
  std::uint64_t truncated_bytes_ = 0;

  mutable std::mutex mu_;
  std::condition_variable synced_cv_;
  std::uint64_t offset_ = 0;
  std::uint64_t next_seq_ = 1;
  std::uint64_t written_ = 0;  // appends issued
  std::uint64_t synced_ = 0;   // appends known durable
  bool syncing_ = false;
  std::size_t records_since_reset_ = 0;
};

}  // namespace mockboard
