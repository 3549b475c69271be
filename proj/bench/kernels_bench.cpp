// SPDX-License-Identifier: Apache-2.0
//
// otfs-dd: delay-Doppler modem simulation toolkit
// Copyright (C) 2026 The otfs-dd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Parallel kernels against their serial reference versions.
//
//   kernels_bench --benchmark_filter=Wiener
//
// Thread count follows OMP_NUM_THREADS.

#include <random>

#include <benchmark/benchmark.h>

#include "otfs/bench.hpp"
#include "otfs/equalization.hpp"
#include "otfs/estimation.hpp"
#include "otfs/reference.hpp"

namespace {

using namespace otfs;

DDGrid random_grid(const FrameParams& p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    DDGrid x = DDGrid::zeros(p);
    for (int k = 0; k < p.num_doppler_bins; ++k)
        for (int l = 0; l < p.num_delay_bins; ++l)
            x(l, k) = {g(rng), g(rng)};
    return x;
}

void BM_EstimateParallel(benchmark::State& st) {
    const FrameParams p = bench_frame(static_cast<int>(st.range(0)), 14);
    const DDGrid h = pilot_response_synthetic(bench_channel(7), {0, 0}, p);
    for (auto _ : st)
        benchmark::DoNotOptimize(estimate_paths(h, {0, 0}, EstimatorConfig{}, 0.0, p));
}

void BM_EstimateSerial(benchmark::State& st) {
    const FrameParams p = bench_frame(static_cast<int>(st.range(0)), 14);
    const DDGrid h = pilot_response_synthetic(bench_channel(7), {0, 0}, p);
    for (auto _ : st)
        benchmark::DoNotOptimize(reference::estimate_paths_serial(h, {0, 0}, EstimatorConfig{}, 0.0, p));
}

void BM_WienerParallel(benchmark::State& st) {
    const FrameParams p = bench_frame(static_cast<int>(st.range(0)), 14);
    const auto paths = bench_channel(7);
    const DDGrid y = random_grid(p, 1);
    for (auto _ : st)
        benchmark::DoNotOptimize(wiener_equalize(y, paths, 0.01, EqualizerConfig{}, p));
}

void BM_WienerSerial(benchmark::State& st) {
    const FrameParams p = bench_frame(static_cast<int>(st.range(0)), 14);
    const auto paths = bench_channel(7);
    const DDGrid y = random_grid(p, 1);
    for (auto _ : st)
        benchmark::DoNotOptimize(reference::wiener_equalize_serial(y, paths, 0.01, EqualizerConfig{}, p));
}

void BM_DDRelationParallel(benchmark::State& st) {
    const FrameParams p = bench_frame(static_cast<int>(st.range(0)), 14);
    const auto paths = bench_channel(7);
    const DDGrid x = random_grid(p, 2);
    for (auto _ : st)
        benchmark::DoNotOptimize(apply_dd_relation(x, paths, p));
}

void BM_DDRelationSerial(benchmark::State& st) {
    const FrameParams p = bench_frame(static_cast<int>(st.range(0)), 14);
    const auto paths = bench_channel(7);
    const DDGrid x = random_grid(p, 2);
    for (auto _ : st)
        benchmark::DoNotOptimize(reference::dd_relation_direct(x, paths, p));
}

void BM_XcorrFft(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    CVec row(n);
    for (std::size_t k = 0; k < n; ++k)
        row[k] = upsilon(static_cast<int>(n), 0.3 - double(k));
    for (auto _ : st)
        benchmark::DoNotOptimize(xcorr_doppler(row, 0.3));
}

void BM_XcorrDirect(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    CVec row(n);
    for (std::size_t k = 0; k < n; ++k)
        row[k] = upsilon(static_cast<int>(n), 0.3 - double(k));
    for (auto _ : st)
        benchmark::DoNotOptimize(reference::xcorr_direct(row, 0.3));
}

void BM_IsfftFft(benchmark::State& st) {
    const FrameParams p = bench_frame(static_cast<int>(st.range(0)), 14);
    const DDGrid x = random_grid(p, 3);
    for (auto _ : st)
        benchmark::DoNotOptimize(isfft(x, p));
}

void BM_IsfftDirect(benchmark::State& st) {
    const FrameParams p = bench_frame(static_cast<int>(st.range(0)), 14);
    const DDGrid x = random_grid(p, 3);
    for (auto _ : st)
        benchmark::DoNotOptimize(reference::isfft_direct(x, p));
}

} // namespace

BENCHMARK(BM_EstimateParallel)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateSerial)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WienerParallel)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WienerSerial)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DDRelationParallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DDRelationSerial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_XcorrFft)->Arg(14)->Arg(64)->Arg(256);
BENCHMARK(BM_XcorrDirect)->Arg(14)->Arg(64)->Arg(256);
BENCHMARK(BM_IsfftFft)->Arg(32)->Arg(128)->Arg(256);
BENCHMARK(BM_IsfftDirect)->Arg(32)->Arg(128);

BENCHMARK_MAIN();
