// Copyright 2026 The slabgff Authors
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

#include "slabgff/bessel.hpp"
#include "slabgff/capacity.hpp"
#include "slabgff/gff.hpp"
#include "slabgff/greens.hpp"

namespace {

using slabgff::slab::SlabParams;

void BM_K0Integral(benchmark::State& st) {
  const double t = double(st.range(0)) / 100;
  for (auto _ : st) benchmark::DoNotOptimize(slabgff::bessel::k0_integral(t));
}
BENCHMARK(BM_K0Integral)->Arg(1)->Arg(100)->Arg(1000);

void BM_K0Series(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(slabgff::bessel::k0_series(0.37));
}
BENCHMARK(BM_K0Series);

void BM_GreenPoint(benchmark::State& st) {
  const auto p = SlabParams::make(st.range(0), int(st.range(1)));
  std::int64_t k = 0;
  for (auto _ : st) {
    // Fresh evaluator per batch so the memo does not hide the cost.
    st.PauseTiming();
    const slabgff::greens::GreenEvaluator ev(p);
    st.ResumeTiming();
    benchmark::DoNotOptimize(ev.g({k++ % 50, 3, 0}));
  }
}
BENCHMARK(BM_GreenPoint)->Args({64, 4})->Args({1024, 8})->Args({4096, 1});

void BM_GreenTable(benchmark::State& st) {
  const auto p = SlabParams::make(256, int(st.range(0)));
  for (auto _ : st) {
    const slabgff::greens::GreenEvaluator ev(p);
    benchmark::DoNotOptimize(ev.table(16));
  }
}
BENCHMARK(BM_GreenTable)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_CapacityBall(benchmark::State& st) {
  const auto p = SlabParams::make(256, 4);
  const slabgff::greens::GreenEvaluator ev(p);
  const auto A = slabgff::slab::ball({}, double(st.range(0)), p);
  for (auto _ : st) benchmark::DoNotOptimize(slabgff::capacity::equilibrium_green(A, ev).capacity);
  st.counters["points"] = double(A.size());
}
BENCHMARK(BM_CapacityBall)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_HittingSolve(benchmark::State& st) {
  const auto p = SlabParams::make(32, 2);
  const auto A = slabgff::slab::ball({}, 4, p);
  for (auto _ : st) benchmark::DoNotOptimize(slabgff::capacity::equilibrium(A, nullptr, p).capacity);
}
BENCHMARK(BM_HittingSolve)->Unit(benchmark::kMillisecond);

void BM_SampleField(benchmark::State& st) {
  const auto N = st.range(0);
  const auto box = slabgff::gff::TorusBox::make(8 * N, SlabParams::make(N, int(st.range(1))));
  std::uint64_t i = 0;
  for (auto _ : st) benchmark::DoNotOptimize(slabgff::gff::sample_field(box, 1, i++).values.data());
  st.counters["sites"] = double(box.sites());
}
BENCHMARK(BM_SampleField)->Args({16, 2})->Args({64, 1})->Args({64, 8})->Unit(benchmark::kMillisecond);

void BM_OriginCluster(benchmark::State& st) {
  const auto box = slabgff::gff::TorusBox::make(512, SlabParams::make(64, 2));
  std::uint64_t i = 0;
  for (auto _ : st) {
    const auto f = slabgff::gff::sample_field(box, 7, i++);
    benchmark::DoNotOptimize(slabgff::gff::explore_origin_cluster(f, 7, 32).max_norm_reached);
  }
}
BENCHMARK(BM_OriginCluster)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
