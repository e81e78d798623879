// Copyright 2026 The balgap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include "balgap/balanced.hpp"
#include "balgap/sieve.hpp"

namespace {

void BM_FactorTableBuild(benchmark::State& state) {
    const auto N = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        auto t = balgap::FactorTable::build(N, 2 * N);
        benchmark::DoNotOptimize(t.spf_entry(N));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FactorTableBuild)->RangeMultiplier(10)->Range(10'000, 10'000'000)->Unit(benchmark::kMillisecond);

void BM_Factorize(benchmark::State& state) {
    constexpr std::uint64_t N = 1'000'000;
    const auto t = balgap::FactorTable::build(N, 2 * N);
    std::uint64_t n = N;
    for (auto _ : state) {
        benchmark::DoNotOptimize(balgap::factorize(t, n));
        if (++n == 2 * N) n = N;
    }
}
BENCHMARK(BM_Factorize);

void BM_CountStar(benchmark::State& state) {
    const auto N = static_cast<std::uint64_t>(state.range(0));
    const auto t = balgap::FactorTable::build(N, 2 * N);
    const balgap::StarSetSpec spec(N, 2, 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(balgap::count_star(spec, t).count);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CountStar)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

}  // namespace
