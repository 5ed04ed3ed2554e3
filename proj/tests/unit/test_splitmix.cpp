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

#include <doctest.h>

#include <vector>

#include "mockboard/exam_core.hpp"
#include "mockboard/splitmix64.hpp"

using namespace mockboard;

// Values printed by tests/oracles/shuffle_golden.py.

TEST_CASE("splitmix64 reference outputs") {
  SplitMix64 zero(0);
  CHECK(zero.next() == 0xe220a8397b1dcdafULL);

  SplitMix64 one(1);
  CHECK(one.next() == 0x910a2dec89025cc1ULL);
  CHECK(one.next() == 0xbeeb8da1658eec67ULL);
  CHECK(one.next() == 0xf893a2eefb32555eULL);
}

TEST_CASE("below stays in range and handles powers of two") {
  SplitMix64 rng(99);
  for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 7ULL, 64ULL, 1000ULL, (1ULL << 63) + 1}) {
    for (int i = 0; i < 200; ++i) CHECK(rng.below(bound) < bound);
  }
}

TEST_CASE("golden presentation for seed 1, ten questions of four choices") {
  const std::vector<std::size_t> counts(10, 4);
  const auto p = core::presentation_order(counts, 1);
  CHECK(p.question_order == std::vector<std::size_t>{4, 2, 8, 1, 9, 3, 0, 6, 7, 5});
  const std::vector<std::vector<std::size_t>> choices{
      {1, 3, 0, 2}, {2, 3, 1, 0}, {2, 1, 0, 3}, {1, 3, 0, 2}, {1, 2, 3, 0},
      {0, 2, 1, 3}, {2, 0, 1, 3}, {2, 1, 3, 0}, {1, 2, 3, 0}, {3, 2, 0, 1}};
  CHECK(p.choice_order == choices);
}

TEST_CASE("golden presentation for seed 0, three questions of two choices") {
  const std::vector<std::size_t> counts(3, 2);
  const auto p = core::presentation_order(counts, 0);
  CHECK(p.question_order == std::vector<std::size_t>{2, 0, 1});
  const std::vector<std::vector<std::size_t>> choices{{0, 1}, {1, 0}, {0, 1}};
  CHECK(p.choice_order == choices);
}
