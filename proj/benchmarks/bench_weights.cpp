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


#include <cmath>

#include <benchmark/benchmark.h>

#include "balgap/sieve.hpp"
#include "balgap/tuples.hpp"
#include "balgap/weights.hpp"

namespace {

balgap::WeightConfig config(int which) {
    switch (which) {
        case 0: return {balgap::OffsetTuple({0, 2}), 1, 1e3};
        case 1: return {balgap::OffsetTuple({0, 2, 6}), 1, 1e3};
        default: return {balgap::OffsetTuple({0, 2, 6, 8}), 2, 1e4};
    }
}

constexpr std::uint64_t kLo = 100'000;
constexpr std::uint64_t kSpan = 10'000;

void BM_WeightsBatch(benchmark::State& state) {
    const auto cfg = config(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(balgap::lambda_r_batch(kLo, kLo + kSpan, cfg));
    state.SetItemsProcessed(state.iterations() * kSpan);
}
BENCHMARK(BM_WeightsBatch)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_WeightsNaive(benchmark::State& state) {
    const auto cfg = config(static_cast<int>(state.range(0)));
    const auto table = balgap::FactorTable::build(kLo, kLo + kSpan + cfg.H.max_offset());
    for (auto _ : state) {
        double acc = 0;
        for (std::uint64_t n = kLo; n < kLo + kSpan; ++n) acc += balgap::lambda_r_naive(n, cfg, table);
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * kSpan);
}
BENCHMARK(BM_WeightsNaive)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_SecondMoment(benchmark::State& state) {
    const auto N = static_cast<std::uint64_t>(state.range(0));
    const balgap::WeightConfig cfg(balgap::OffsetTuple({0, 2, 6}), 1, std::pow(double(N), 0.25));
    for (auto _ : state) benchmark::DoNotOptimize(balgap::moment_lemma1(N, cfg).empirical);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SecondMoment)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

}  // namespace
