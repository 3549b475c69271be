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

// Acceptance run: one line per criterion, nonzero exit if any fails.
//
//   acceptance            all criteria
//   acceptance NAME...    only the named ones (transforms, dd_relation, phi,
//                         kernel, estimation, ordering, eq_gap, doppler,
//                         complexity, determinism)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "otfs/bench.hpp"
#include "otfs/config.hpp"
#include "otfs/ddmath.hpp"
#include "otfs/estimation.hpp"
#include "otfs/sim.hpp"
#include "otfs/validation.hpp"

namespace {

using namespace otfs;
using Clock = std::chrono::steady_clock;

struct Outcome {
    bool passed = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Outcome from_checks(const std::vector<validation::CheckResult>& checks) {
    Outcome o{true, {}};
    for (const auto& c : checks) {
        o.passed = o.passed && c.passed;
        if (!o.detail.empty())
            o.detail += "; ";
        o.detail += c.name + " " + fmt("%.3g", c.value) + (c.passed ? "" : " (FAIL)");
    }
    return o;
}

// Desk-scale scenario: M=64, N=14, Ncp=6, EVA at 500 km/h.
SimConfig desk_config() {
    SimConfig c = default_config();
    c.frame.num_delay_bins = 64;
    c.frame.num_doppler_bins = 14;
    c.frame.cp_len = 6;
    c.scenario = eva_scenario(max_doppler_hz(500.0, c.frame.carrier_freq_hz));
    c.modulation_order = 16;
    return c;
}

const SweepRow* find_row(const SweepResult& r, double snr, EstimatorKind e, EqualizerKind q) {
    for (const auto& row : r.rows)
        if (row.snr_db == snr && row.combo.estimator == e && row.combo.equalizer == q)
            return &row;
    return nullptr;
}

// SNR where the BER curve crosses `target`, interpolated linearly in log10(BER).
double snr_at_ber(const std::vector<double>& snr, const std::vector<double>& ber, double target) {
    const double lt = std::log10(target);
    for (std::size_t i = 0; i + 1 < snr.size(); ++i) {
        if (ber[i] >= target && ber[i + 1] <= target && ber[i + 1] > 0.0) {
            const double a = std::log10(ber[i]), b = std::log10(ber[i + 1]);
            if (a == b)
                return snr[i];
            return snr[i] + (snr[i + 1] - snr[i]) * (a - lt) / (a - b);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

Outcome transforms() {
    const auto t0 = Clock::now();
    auto c = validation::transform_identities({{4, 2, 1}, {8, 4, 2}, {16, 8, 4}, {256, 14, 17}}, 1e-12);
    const double dt = seconds_since(t0);
    return {c.passed && dt < 10.0, "max err " + fmt("%.3g", c.value) + ", " + fmt("%.2f s", dt) + " (< 10 s)"};
}

Outcome dd_relation() {
    const auto t0 = Clock::now();
    auto c = validation::dd_relation_oracle({{8, 4, 2}, {16, 8, 4}}, 50, 1e-9);
    const double dt = seconds_since(t0);
    return {c.passed && dt < 60.0, "max err " + fmt("%.3g", c.value) + " over 50 channels per size, " +
                                       fmt("%.2f s", dt) + " (< 60 s)"};
}

Outcome phi() {
    auto c = validation::phi_oracle({{4, 2, 1}, {8, 4, 2}}, 1e-9);
    return {c.passed, "max err " + fmt("%.3g", c.value) + " (limit 1e-9)"};
}

Outcome kernel_identities() {
    return from_checks({validation::upsilon_closed_form(10000, 1e-9), validation::upsilon_energy(100, 1e-10)});
}

Outcome estimation() {
    return from_checks({validation::estimation_single_path(50, 1e-6), validation::estimation_nine_path(50, -25.0)});
}

Outcome ordering() {
    const auto t0 = Clock::now();
    SimConfig c = desk_config();
    c.snr_db = {10.0, 20.0, 30.0};
    c.trials = 500;
    c.seed = 2024;
    c.estimators = {EstimatorKind::proposed, EstimatorKind::pn};
    c.equalizers = {EqualizerKind::wiener};
    c.validate();
    const auto r = run_sweep(c);
    bool ok = true;
    std::ostringstream d;
    for (double s : c.snr_db) {
        const auto* pr = find_row(r, s, EstimatorKind::proposed, EqualizerKind::wiener);
        const auto* pn = find_row(r, s, EstimatorKind::pn, EqualizerKind::wiener);
        const bool cell = pr->mean_nmse_db() <= pn->mean_nmse_db() && pr->ber() <= pn->ber();
        ok = ok && cell;
        d << s << " dB: NMSE " << fmt("%.2f", pr->mean_nmse_db()) << "/" << fmt("%.2f", pn->mean_nmse_db())
          << " BER " << fmt("%.4g", pr->ber()) << "/" << fmt("%.4g", pn->ber()) << " paths "
          << fmt("%.1f", pr->mean_paths()) << "/" << fmt("%.1f", pn->mean_paths()) << (cell ? "" : " (FAIL)") << "; ";
    }
    const double dt = seconds_since(t0);
    ok = ok && dt < 1800.0;
    d << "proposed/pn, " << fmt("%.0f s", dt);
    return {ok, d.str()};
}

Outcome eq_gap() {
    const auto t0 = Clock::now();
    SimConfig c = desk_config();
    c.snr_db = {14, 16, 18, 20, 22, 24, 26, 28};
    c.trials = 200;
    c.seed = 77;
    c.estimators = {EstimatorKind::ideal};
    c.equalizers = {EqualizerKind::wiener, EqualizerKind::mmse};
    c.validate();
    const auto r = run_sweep(c);
    std::vector<double> bw, bm;
    for (double s : c.snr_db) {
        bw.push_back(find_row(r, s, EstimatorKind::ideal, EqualizerKind::wiener)->ber());
        bm.push_back(find_row(r, s, EstimatorKind::ideal, EqualizerKind::mmse)->ber());
    }
    const double sw = snr_at_ber(c.snr_db, bw, 1e-2);
    const double sm = snr_at_ber(c.snr_db, bm, 1e-2);
    const double gap = sw - sm;
    const double dt = seconds_since(t0);
    const bool ok = std::isfinite(gap) && gap <= 1.0 && dt < 1800.0;
    return {ok, "SNR@1e-2 wiener " + fmt("%.2f", sw) + " dB, mmse " + fmt("%.2f", sm) + " dB, gap " +
                    fmt("%.2f", gap) + " dB (limit 1), " + std::to_string(c.trials) + " trials, " +
                    fmt("%.0f s", dt)};
}

Outcome doppler() {
    SimConfig c = desk_config();
    c.snr_db = {20.0, 25.0, 30.0};
    c.trials = 500;
    c.seed = 4242;
    c.estimators = {EstimatorKind::ideal};
    c.equalizers = {EqualizerKind::wiener, EqualizerKind::ofdm_mmse};
    c.validate();
    const auto r = run_sweep(c);
    bool ok = true;
    std::ostringstream d;
    for (double s : c.snr_db) {
        const double otfs_ber = find_row(r, s, EstimatorKind::ideal, EqualizerKind::wiener)->ber();
        const double ofdm_ber = find_row(r, s, EstimatorKind::ideal, EqualizerKind::ofdm_mmse)->ber();
        ok = ok && otfs_ber < ofdm_ber;
        d << s << " dB: " << fmt("%.4g", otfs_ber) << " vs " << fmt("%.4g", ofdm_ber) << "; ";
    }
    d << "OTFS wiener vs OFDM MMSE, 500 trials";
    return {ok, d.str()};
}

Outcome complexity() {
    const auto t0 = Clock::now();
    BenchOptions opts;
    opts.sizes = {32, 64, 128};
    opts.reps = 5;
    opts.methods = {"proposed_eq", "mmse_eq"};
    const auto cells = bench_complexity(opts);
    auto time_of = [&](const std::string& m, int size) {
        for (const auto& c : cells)
            if (c.method == m && c.M == size && !c.skipped)
                return c.median_seconds;
        return std::numeric_limits<double>::quiet_NaN();
    };
    bool ok = true;
    std::ostringstream d;
    for (std::size_t i = 0; i + 1 < opts.sizes.size(); ++i) {
        const int a = opts.sizes[i], b = opts.sizes[i + 1];
        const double rm = time_of("mmse_eq", b) / time_of("mmse_eq", a);
        const double rw = time_of("proposed_eq", b) / time_of("proposed_eq", a);
        ok = ok && rm >= 6.0 && rw <= 5.0;
        d << a << "->" << b << ": mmse x" << fmt("%.2f", rm) << " eq x" << fmt("%.2f", rw) << "; ";
    }

    // Correlation op counter of the proposed estimator with every delay row
    // searched: each search iteration costs D*N outputs, one terminating
    // iteration per row plus one per accepted path.
    const auto paths = bench_channel(opts.seed);
    const PilotPosition pilot{0, 0};
    std::vector<double> per_row;
    for (int m : opts.sizes) {
        const FrameParams p = bench_frame(m, 14);
        const DDGrid h = pilot_response_synthetic(paths, pilot, p);
        for (int dres : {10, 20}) {
            EstimatorConfig cfg;
            cfg.doppler_resolution = dres;
            const auto est = estimate_paths(h, pilot, cfg, 0.0, p);
            const std::uint64_t expect = static_cast<std::uint64_t>(dres) * 14u *
                                         (est.paths.size() + static_cast<std::uint64_t>(m));
            const bool exact = est.correlation_ops == expect && est.paths.size() == 9;
            ok = ok && exact;
            if (dres == 10)
                per_row.push_back(static_cast<double>(est.correlation_ops) / m);
            if (!exact)
                d << "op count mismatch at M=" << m << " D=" << dres << "; ";
        }
    }
    // Linear in M: ops per delay row stays bounded by D*N*(P+1) and does not grow.
    for (std::size_t i = 0; i + 1 < per_row.size(); ++i)
        ok = ok && per_row[i + 1] <= per_row[i] && per_row[i] <= 10.0 * 14.0 * 10.0;
    const double dt = seconds_since(t0);
    ok = ok && dt < 1200.0;
    d << "ops = D*N*(P+M) exact at D in {10,20}, P = 9; " << fmt("%.0f s", dt);
    return {ok, d.str()};
}

Outcome determinism() {
    SimConfig c = desk_config();
    c.snr_db = {10.0, 25.0};
    c.trials = 8;
    c.seed = 99;
    c.estimators = {EstimatorKind::ideal, EstimatorKind::proposed, EstimatorKind::pn};
    c.equalizers = {EqualizerKind::wiener, EqualizerKind::mmse, EqualizerKind::ofdm_mmse};
    c.validate();
    std::ostringstream a, b;
    write_csv(run_sweep(c), c, a);
    write_csv(run_sweep(c), c, b);
    const bool same = a.str() == b.str();
    return {same, same ? "byte-identical CSV over 2 runs (8 trials, 7 combos)" : "CSV differs between runs"};
}

struct Criterion {
    const char* key;
    const char* title;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {"transforms", "transform identities", transforms},
        {"dd_relation", "delay-Doppler relation oracle", dd_relation},
        {"phi", "vectorized channel oracle", phi},
        {"kernel", "Doppler kernel identities", kernel_identities},
        {"estimation", "estimation exactness", estimation},
        {"ordering", "estimator ordering", ordering},
        {"eq_gap", "equalizer gap", eq_gap},
        {"doppler", "Doppler robustness ordering", doppler},
        {"complexity", "complexity trends", complexity},
        {"determinism", "determinism", determinism},
    };
    std::set<std::string> only(argv + 1, argv + argc);
    bool all_ok = true;
    int ran = 0;
    for (const auto& c : all) {
        if (!only.empty() && !only.count(c.key))
            continue;
        ++ran;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all_ok = all_ok && o.passed;
        std::printf("%s  %-30s %s\n", o.passed ? "PASS" : "FAIL", c.title, o.detail.c_str());
        std::fflush(stdout);
    }
    if (ran == 0) {
        std::fprintf(stderr, "no criterion matched\n");
        return 2;
    }
    return all_ok ? 0 : 1;
}
