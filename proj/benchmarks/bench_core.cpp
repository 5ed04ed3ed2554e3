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

#include <benchmark/benchmark.h>

#include <random>

#include "mockboard/exam_core.hpp"
#include "mockboard/reporting.hpp"

using namespace mockboard;

namespace {

void BM_Grade(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  core::AnswerMap key, answers;
  for (std::uint64_t i = 1; i <= n; ++i) {
    key[QuestionId{i}] = i % 4;
    answers[QuestionId{i}] = (i * 7) % 4;
  }
  for (auto _ : state) benchmark::DoNotOptimize(core::grade(answers, key));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Grade)->Arg(10)->Arg(100)->Arg(500);

void BM_PresentationOrder(benchmark::State& state) {
  const std::vector<std::size_t> counts(static_cast<std::size_t>(state.range(0)), 4);
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(core::presentation_order(counts, seed++));
}
BENCHMARK(BM_PresentationOrder)->Arg(10)->Arg(100)->Arg(500);

void BM_WeightedScore(benchmark::State& state) {
  int raw = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(core::weighted_score(raw, 100, Percent::whole(15)));
    raw = (raw + 1) % 101;
  }
}
BENCHMARK(BM_WeightedScore);

void BM_ItemStats(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  Question q;
  q.id = QuestionId{1};
  q.choices = {"a", "b", "c", "d"};
  std::vector<core::AnswerMap> answers(n);
  std::vector<reporting::CohortMember> cohort;
  for (std::size_t i = 0; i < n; ++i) {
    answers[i][q.id] = rng() % 4;
    cohort.push_back({AccountId{i + 1}, static_cast<int>(rng() % 100), &answers[i]});
  }
  for (auto _ : state) benchmark::DoNotOptimize(reporting::compute_item_stats(q, cohort));
}
BENCHMARK(BM_ItemStats)->Arg(40)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
