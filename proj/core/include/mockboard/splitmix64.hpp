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

#include <cstdint>
#include <span>
#include <utility>

namespace mockboard {

/// SplitMix64 (Steele, Lea, Flood 2014). The exact output stream is part of
/// the wire contract: the server and any client that wants to reproduce a
/// presentation order must agree bit for bit.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound). Rejects the top partial bucket so that the
  /// modulo is exactly uniform. `bound` must be non-zero.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    // 2^64 mod bound, computed without 128-bit arithmetic
    const std::uint64_t remainder = (0 - bound) % bound;
    const std::uint64_t limit = 0 - remainder;  // 2^64 - remainder, 0 meaning 2^64
    for (;;) {
      const std::uint64_t x = next();
      if (limit == 0 || x < limit) return x % bound;
    }
  }

 private:
  std::uint64_t state_;
};

/// Fisher-Yates from the last index downward.
template <class T>
constexpr void shuffle(std::span<T> items, SplitMix64& rng) noexcept {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace mockboard
