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

#include "balgap/density.hpp"
#include "balgap/tuples.hpp"

namespace {

void BM_SingularSeries(benchmark::State& state) {
    const balgap::OffsetTuple H({0, 2, 6, 8, 12});
    const auto p_max = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(balgap::singular_series(H, p_max).value);
}
BENCHMARK(BM_SingularSeries)->RangeMultiplier(10)->Range(1'000, 10'000'000)->Unit(benchmark::kMillisecond);

void BM_C0Quadrature(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(balgap::c0_quadrature(3, 0.2, 1e-9).value);
}
BENCHMARK(BM_C0Quadrature);

void BM_C0MonteCarlo(benchmark::State& state) {
    const auto samples = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(balgap::c0_monte_carlo(4, 0.2, samples, 1).value);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_C0MonteCarlo)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_GenerateTuple(benchmark::State& state) {
    const auto k = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(balgap::generate_tuple(k).diameter());
}
BENCHMARK(BM_GenerateTuple)->Arg(10)->Arg(100)->Arg(500);

}  // namespace
