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
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mockboard::crypto {

inline constexpr std::uint32_t kPasswordRounds = 100'000;
inline constexpr std::size_t kSaltBytes = 16;

/// PBKDF2-HMAC-SHA256 with a fresh random salt. The result is
/// self-describing: "pbkdf2-sha256$<rounds>$<salt hex>$<digest hex>".
std::string hash_password(std::string_view password, std::uint32_t rounds = kPasswordRounds);

/// Constant-time comparison against a digest produced by hash_password.
/// Malformed digests never verify.
bool verify_password(std::string_view password, std::string_view digest);

/// Cryptographically random bytes from the OS-backed generator.
std::vector<std::uint8_t> random_bytes(std::size_t n);
std::uint64_t random_u64();

/// 128-bit random value as 32 lowercase hex characters.
std::string random_token();

std::string to_hex(const std::uint8_t* data, std::size_t n);

}  // namespace mockboard::crypto
