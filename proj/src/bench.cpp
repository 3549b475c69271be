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

#include "otfs/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>

#include <Eigen/Core>

#include "otfs/equalization.hpp"
#include "otfs/estimation.hpp"

namespace otfs {

FrameParams bench_frame(int m, int n) {
    FrameParams p;
    p.num_delay_bins = m;
    p.num_doppler_bins = n;
    p.cp_len = std::max(9, static_cast<int>(std::lround(17.0 * m / 256.0)));
    p.validate();
    return p;
}

std::vector<DDPath> bench_channel(std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_int_distribution<int> grid(-4, 4);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    std::vector<DDPath> paths;
    double energy = 0.0;
    for (int d = 0; d < 9; ++d) {
        const double gain = std::pow(10.0, -0.1 * d);
        paths.push_back(DDPath{d, grid(rng) / 10.0, std::polar(gain, phase(rng))});
        energy += gain * gain;
    }
    for (auto& path : paths)
        path.coeff /= std::sqrt(energy);
    return paths;
}

namespace {

double median_time(int reps, const std::function<void()>& fn) {
    std::vector<double> t;
    for (int r = 0; r < reps; ++r) {
        const auto a = std::chrono::steady_clock::now();
        fn();
        t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - a).count());
    }
    std::sort(t.begin(), t.end());
    const std::size_t h = t.size() / 2;
    return t.size() % 2 ? t[h] : 0.5 * (t[h - 1] + t[h]);
}

} // namespace

std::vector<BenchCell> bench_complexity(const BenchOptions& opts) {
    if (opts.reps < 1)
        throw ConfigError("bench: reps must be >= 1");
    for (const auto& m : opts.methods)
        if (m != "proposed_ce" && m != "pn_ce" && m != "proposed_eq" && m != "mmse_eq")
            throw ConfigError("bench: unknown method '" + m + "'");
    const int threads = Eigen::nbThreads();
    Eigen::setNbThreads(1);

    std::vector<BenchCell> cells;
    for (int m : opts.sizes) {
        const FrameParams p = bench_frame(m, opts.num_doppler_bins);
        const auto paths = bench_channel(opts.seed);
        const PilotPosition pilot{0, 0};
        const DDGrid resp = pilot_response_synthetic(paths, pilot, p);

        Rng rng(opts.seed + static_cast<std::uint64_t>(m));
        std::normal_distribution<double> g(0.0, std::sqrt(0.5));
        DDGrid x = DDGrid::zeros(p);
        for (int l = 0; l < m; ++l)
            for (int k = 0; k < p.num_doppler_bins; ++k)
                x(l, k) = cplx(g(rng), g(rng));
        const DDGrid y = apply_dd_relation(x, paths, p);
        const double sigma2 = 1e-2;

        for (const auto& method : opts.methods) {
            BenchCell cell{method, m, p.num_doppler_bins, 0.0, opts.reps};
            if (method == "proposed_ce") {
                EstimatorConfig cfg;
                EstimationResult last;
                cell.median_seconds = median_time(opts.reps, [&] { last = estimate_paths(resp, pilot, cfg, 0.0, p); });
                cell.ops = last.correlation_ops;
                cell.paths_found = last.paths.size();
            } else if (method == "pn_ce") {
                Rng pn_rng(opts.seed ^ 0x5eedULL);
                const TimeSignal pn = make_pn_frame(p, pn_rng);
                const TimeSignal rx = apply_channel(pn, paths, p);
                PnConfig cfg;
                cfg.max_paths = 9;
                const double nu = 0.4 * p.doppler_bin_hz();
                EstimationResult last;
                cell.median_seconds = median_time(opts.reps, [&] { last = pn_estimate(rx, pn, cfg, nu, 0.0, p); });
                cell.ops = last.correlation_ops;
                cell.paths_found = last.paths.size();
            } else if (method == "proposed_eq") {
                EqualizerConfig cfg;
                cell.median_seconds = median_time(opts.reps, [&] { (void)wiener_equalize(y, paths, sigma2, cfg, p); });
            } else {
                Eigen::MatrixXcd phi;
                try {
                    phi = build_phi(paths, p, opts.phi_guard);
                } catch (const GuardError&) {
                    cell.skipped = true;
                    cell.median_seconds = std::nan("");
                    cells.push_back(cell);
                    continue;
                }
                const CVec yv = vectorize(y);
                const Eigen::VectorXcd ye = Eigen::Map<const Eigen::VectorXcd>(yv.data(), static_cast<Eigen::Index>(yv.size()));
                cell.median_seconds = median_time(opts.reps, [&] { (void)mmse_equalize(ye, phi, sigma2); });
            }
            cells.push_back(cell);
        }
    }
    Eigen::setNbThreads(threads);
    return cells;
}

void write_bench_csv(const std::vector<BenchCell>& cells, std::ostream& os) {
    os << kBenchCsvHeader << '\n';
    for (const auto& c : cells) {
        char buf[64];
        if (c.skipped)
            std::snprintf(buf, sizeof buf, "nan");
        else
            std::snprintf(buf, sizeof buf, "%.6g", c.median_seconds);
        os << c.method << ',' << c.M << ',' << c.N << ',' << buf << ',' << (c.skipped ? 0 : c.reps) << '\n';
    }
}

void write_bench_csv(const std::vector<BenchCell>& cells, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_bench_csv(cells, f);
    if (!f)
        throw std::runtime_error("write to '" + path.string() + "' failed");
}

} // namespace otfs
