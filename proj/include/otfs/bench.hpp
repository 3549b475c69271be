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

#ifndef OTFS_BENCH_HPP
#define OTFS_BENCH_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "otfs/channel.hpp"
#include "otfs/ddmath.hpp"

namespace otfs {

struct BenchOptions {
    std::vector<int> sizes{32, 64, 128}; // M ladder
    int num_doppler_bins = 14;
    int reps = 5;
    std::uint64_t seed = 7;
    std::size_t phi_guard = kDefaultPhiGuard;
    std::vector<std::string> methods{"proposed_ce", "pn_ce", "proposed_eq", "mmse_eq"};
};

struct BenchCell {
    std::string method;
    int M = 0;
    int N = 0;
    double median_seconds = 0.0;
    int reps = 0;
    bool skipped = false;          // size guard refused the cell
    std::uint64_t ops = 0;         // correlation work for the estimators
    std::size_t paths_found = 0;   // P-hat for the estimators
};

/// Frame used at each ladder size: 15 kHz, 0.8 GHz, cp_len = max(9, round(17 M / 256)).
FrameParams bench_frame(int m, int n);

/// Nine on-grid paths, one per delay 0..8, Dopplers on the 1/10-bin grid
/// within +-0.4 bins, so a noiseless estimate returns exactly nine paths.
std::vector<DDPath> bench_channel(std::uint64_t seed);

/// Median wall time over opts.reps runs per (method, M). Only the method
/// itself is timed; frame synthesis and Phi construction are excluded.
std::vector<BenchCell> bench_complexity(const BenchOptions& opts);

inline constexpr const char* kBenchCsvHeader = "method,M,N,median_seconds,reps";
void write_bench_csv(const std::vector<BenchCell>& cells, std::ostream& os);
void write_bench_csv(const std::vector<BenchCell>& cells, const std::filesystem::path& path);

} // namespace otfs

#endif
