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

#include "mockboard/password.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <charconv>
#include <cstring>

#include "mockboard/error.hpp"

namespace mockboard::crypto {

namespace {

constexpr std::string_view kScheme = "pbkdf2-sha256";
constexpr std::size_t kDigestBytes = 32;

std::vector<std::uint8_t> derive(std::string_view password,
                                 const std::vector<std::uint8_t>& salt, std::uint32_t rounds) {
  std::vector<std::uint8_t> out(kDigestBytes);
  if (PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()), salt.data(),
                        static_cast<int>(salt.size()), static_cast<int>(rounds), EVP_sha256(),
                        static_cast<int>(out.size()), out.data()) != 1) {
    throw Error(ErrorCode::StorageFailure, "PBKDF2 derivation failed");
  }
  return out;
}

bool from_hex(std::string_view hex, std::vector<std::uint8_t>& out) {
  if (hex.size() % 2 != 0) return false;
  out.clear();
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    std::uint8_t byte = 0;
    auto [ptr, ec] = std::from_chars(hex.data() + i, hex.data() + i + 2, byte, 16);
    if (ec != std::errc{} || ptr != hex.data() + i + 2) return false;
    out.push_back(byte);
  }
  return true;
}

}  // namespace

std::string to_hex(const std::uint8_t* data, std::size_t n) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(n * 2);
  for (std::size_t i = 0; i < n; ++i) {
    s.push_back(kDigits[data[i] >> 4]);
    s.push_back(kDigits[data[i] & 0xF]);
  }
  return s;
}

std::vector<std::uint8_t> random_bytes(std::size_t n) {
  std::vector<std::uint8_t> out(n);
  if (n && RAND_bytes(out.data(), static_cast<int>(n)) != 1) {
    throw Error(ErrorCode::StorageFailure, "system random generator unavailable");
  }
  return out;
}

std::uint64_t random_u64() {
  const auto bytes = random_bytes(sizeof(std::uint64_t));
  std::uint64_t v = 0;
  std::memcpy(&v, bytes.data(), sizeof v);
  return v;
}

std::string random_token() {
  const auto bytes = random_bytes(16);
  return to_hex(bytes.data(), bytes.size());
}

std::string hash_password(std::string_view password, std::uint32_t rounds) {
  const auto salt = random_bytes(kSaltBytes);
  const auto digest = derive(password, salt, rounds);
  return std::string(kScheme) + "$" + std::to_string(rounds) + "$" +
         to_hex(salt.data(), salt.size()) + "$" + to_hex(digest.data(), digest.size());
}

bool verify_password(std::string_view password, std::string_view digest) {
  // scheme$rounds$salt$hash
  std::string_view parts[4];
  std::size_t start = 0;
  for (int i = 0; i < 4; ++i) {
    const std::size_t end = i < 3 ? digest.find('$', start) : digest.size();
    if (end == std::string_view::npos) return false;
    parts[i] = digest.substr(start, end - start);
    start = end + 1;
  }
  if (parts[0] != kScheme) return false;
  std::uint32_t rounds = 0;
  auto [ptr, ec] = std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), rounds);
  if (ec != std::errc{} || ptr != parts[1].data() + parts[1].size() || rounds == 0) {
    return false;
  }
  std::vector<std::uint8_t> salt, expected;
  if (!from_hex(parts[2], salt) || !from_hex(parts[3], expected) ||
      expected.size() != kDigestBytes) {
    return false;
  }
  const auto actual = derive(password, salt, rounds);
  return CRYPTO_memcmp(actual.data(), expected.data(), kDigestBytes) == 0;
}

}  // namespace mockboard::crypto
