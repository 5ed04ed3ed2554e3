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

#include "mockboard/journal.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>
#include <zlib.h>

#include <cerrno>
#include <cstring>

#include "mockboard/error.hpp"

namespace mockboard {

namespace {

constexpr std::size_t kHeader = 4 + 4 + 8;
constexpr std::uint32_t kMaxPayload = 64u << 20;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
std::uint64_t get_le(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::uint32_t checksum(std::uint64_t seq, std::string_view payload) {
  unsigned char seq_bytes[8];
  for (int i = 0; i < 8; ++i) seq_bytes[i] = static_cast<unsigned char>((seq >> (8 * i)) & 0xFF);
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, seq_bytes, 8);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(payload.data()),
              static_cast<uInt>(payload.size()));
  return static_cast<std::uint32_t>(crc);
}

[[noreturn]] void fail(const std::string& what) {
  throw Error(ErrorCode::StorageFailure, what + ": " + std::strerror(errno));
}

void write_all(int fd, const char* data, std::size_t n) {
  while (n > 0) {
    const ssize_t w = ::write(fd, data, n);
    if (w < 0) {
      if (errno == EINTR) continue;
      fail("journal write failed");
    }
    data += w;
    n -= static_cast<std::size_t>(w);
  }
}

std::string read_file(int fd) {
  std::string content;
  char buf[1 << 16];
  for (;;) {
    const ssize_t r = ::read(fd, buf, sizeof buf);
    if (r < 0) {
      if (errno == EINTR) continue;
      fail("journal read failed");
    }
    if (r == 0) break;
    content.append(buf, static_cast<std::size_t>(r));
  }
  return content;
}

}  // namespace

Journal::Journal(std::filesystem::path file, bool sync) : path_(std::move(file)), sync_(sync) {
  fd_ = ::open(path_.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) fail("cannot open journal " + path_.string());

  const std::string content = read_file(fd_);
  std::size_t pos = 0;
  while (content.size() - pos >= kHeader) {
    const auto* p = reinterpret_cast<const unsigned char*>(content.data() + pos);
    const auto len = static_cast<std::uint32_t>(get_le(p, 4));
    const auto crc = static_cast<std::uint32_t>(get_le(p + 4, 4));
    const std::uint64_t seq = get_le(p + 8, 8);
    if (len > kMaxPayload || content.size() - pos - kHeader < len) break;
    std::string_view payload(content.data() + pos + kHeader, len);
    if (checksum(seq, payload) != crc) break;
    recovered_.push_back({seq, std::string(payload)});
    next_seq_ = std::max(next_seq_, seq + 1);
    pos += kHeader + len;
  }
  if (pos != content.size()) {
    truncated_bytes_ = content.size() - pos;
    if (::ftruncate(fd_, static_cast<off_t>(pos)) != 0) fail("cannot truncate torn journal");
    if (sync_ && ::fdatasync(fd_) != 0) fail("journal sync failed");
  }
  offset_ = pos;
  records_since_reset_ = recovered_.size();
  if (::lseek(fd_, static_cast<off_t>(offset_), SEEK_SET) < 0) fail("journal seek failed");
}

Journal::~Journal() {
  if (fd_ >= 0) ::close(fd_);
}

void Journal::set_seq_floor(std::uint64_t floor) {
  std::lock_guard lock(mu_);
  next_seq_ = std::max(next_seq_, floor + 1);
}

std::uint64_t Journal::append(std::string_view payload) {
  if (payload.size() > kMaxPayload) {
    throw Error(ErrorCode::StorageFailure, "journal record too large");
  }
  std::unique_lock lock(mu_);
  const std::uint64_t seq = next_seq_;
  std::string frame;
  frame.reserve(kHeader + payload.size());
  put_u32(frame, static_cast<std::uint32_t>(payload.size()));
  put_u32(frame, checksum(seq, payload));
  put_u64(frame, seq);
  frame.append(payload);
  try {
    write_all(fd_, frame.data(), frame.size());
  } catch (...) {
    // Roll back a partial frame so later records stay reachable on replay.
    if (::ftruncate(fd_, static_cast<off_t>(offset_)) == 0) {
      ::lseek(fd_, static_cast<off_t>(offset_), SEEK_SET);
    }
    throw;
  }
  ++next_seq_;
  offset_ += frame.size();
  ++records_since_reset_;
  sync_to(lock, ++written_);
  return seq;
}

void Journal::sync_to(std::unique_lock<std::mutex>& lock, std::uint64_t target) {
  if (!sync_) {
    synced_ = std::max(synced_, target);
    return;
  }
  while (synced_ < target) {
    if (syncing_) {
      synced_cv_.wait(lock);
      continue;
    }
    // Become the leader: everything written so far rides on this sync.
    syncing_ = true;
    const std::uint64_t covered = written_;
    lock.unlock();
    const int rc = ::fdatasync(fd_);
    const int saved_errno = errno;
    lock.lock();
    syncing_ = false;
    synced_cv_.notify_all();
    if (rc != 0) {
      errno = saved_errno;
      fail("journal sync failed");
    }
    synced_ = std::max(synced_, covered);
  }
}

void Journal::reset() {
  std::unique_lock lock(mu_);
  synced_cv_.wait(lock, [&] { return !syncing_; });
  if (::ftruncate(fd_, 0) != 0) fail("cannot reset journal");
  if (::lseek(fd_, 0, SEEK_SET) < 0) fail("journal seek failed");
  if (sync_ && ::fdatasync(fd_) != 0) fail("journal sync failed");
  offset_ = 0;
  records_since_reset_ = 0;
  synced_ = written_;
}

std::uint64_t Journal::last_seq() const {
  std::lock_guard lock(mu_);
  return next_seq_ - 1;
}

std::size_t Journal::records_since_reset() const {
  std::lock_guard lock(mu_);
  return records_since_reset_;
}

}  // namespace mockboard
