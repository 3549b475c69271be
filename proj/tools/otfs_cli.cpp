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

// otfs: command line front end.
//
//   otfs run      Monte Carlo BER/FER sweep, CSV to --out or stdout
//   otfs bench    estimator / equalizer timing ladder
//   otfs validate oracle and invariant checks
//
// Exit status: 0 ok, 1 bad configuration or arguments, 2 runtime or size guard.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "otfs/bench.hpp"
#include "otfs/config.hpp"
#include "otfs/sim.hpp"
#include "otfs/validation.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct RunArgs {
    std::string config;
    std::string snr;
    std::optional<int> trials;
    std::string estimator;
    std::string equalizer;
    std::optional<std::uint64_t> seed;
    std::string out;
};

struct BenchArgs {
    std::vector<int> sizes{32, 64, 128};
    int n = 14;
    int reps = 5;
    std::uint64_t seed = 7;
    std::string out;
};

int do_run(const RunArgs& a) {
    otfs::SimConfig cfg = a.config.empty() ? otfs::default_config() : otfs::load_config(a.config);
    if (!a.snr.empty())
        cfg.snr_db = otfs::parse_snr_range(a.snr);
    if (a.trials)
        cfg.trials = *a.trials;
    if (!a.estimator.empty())
        cfg.estimators = {otfs::parse_estimator(a.estimator)};
    if (!a.equalizer.empty())
        cfg.equalizers = {otfs::parse_equalizer(a.equalizer)};
    if (a.seed)
        cfg.seed = *a.seed;
    if (!a.out.empty())
        cfg.output = a.out;
    cfg.validate();

    const auto res = otfs::run_sweep(cfg);
    if (cfg.output.empty())
        otfs::write_csv(res, cfg, std::cout);
    else
        otfs::write_csv(res, cfg, cfg.output);
    std::fprintf(stderr, "%zu rows, %d trials, %.2f s\n", res.rows.size(), cfg.trials, res.wall_seconds);
    return 0;
}

int do_bench(const BenchArgs& a) {
    otfs::BenchOptions opts;
    opts.sizes = a.sizes;
    opts.num_doppler_bins = a.n;
    opts.reps = a.reps;
    opts.seed = a.seed;
    for (int m : opts.sizes)
        if (m < 2)
            throw otfs::ConfigError("bench: sizes must be >= 2");
    const auto cells = otfs::bench_complexity(opts);
    if (a.out.empty())
        otfs::write_bench_csv(cells, std::cout);
    else
        otfs::write_bench_csv(cells, a.out);
    for (const auto& c : cells)
        if (c.skipped)
            std::fprintf(stderr, "skipped %s at M=%d (size guard)\n", c.method.c_str(), c.M);
    return 0;
}

int do_validate() {
    bool ok = true;
    for (const auto& r : otfs::validation::run_suite()) {
        std::cout << otfs::validation::format(r) << '\n';
        ok = ok && r.passed;
    }
    std::cout << (ok ? "all checks passed" : "some checks FAILED") << '\n';
    return ok ? 0 : kExitRuntime;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"delay-Doppler modem simulation toolkit"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Monte Carlo error-rate sweep");
    run_cmd->add_option("--config", run.config, "JSON config file");
    run_cmd->add_option("--snr", run.snr, "SNR grid a:step:b in dB");
    run_cmd->add_option("--trials", run.trials, "trials (channel draws) per SNR point");
    run_cmd->add_option("--estimator", run.estimator, "ideal | proposed | pn");
    run_cmd->add_option("--equalizer", run.equalizer, "wiener | mmse | ofdm-mmse");
    run_cmd->add_option("--seed", run.seed, "master seed");
    run_cmd->add_option("--out", run.out, "output CSV (stdout if omitted)");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "complexity benchmark");
    bench_cmd->add_option("--sizes", bench.sizes, "M values, comma separated")->delimiter(',');
    bench_cmd->add_option("--N", bench.n, "Doppler bins");
    bench_cmd->add_option("--reps", bench.reps, "repetitions per cell (median reported)");
    bench_cmd->add_option("--seed", bench.seed, "channel seed");
    bench_cmd->add_option("--out", bench.out, "output CSV (stdout if omitted)");

    app.add_subcommand("validate", "run oracle and invariant checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run_cmd)
            return do_run(run);
        if (*bench_cmd)
            return do_bench(bench);
        return do_validate();
    } catch (const otfs::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const otfs::GuardError& e) {
        std::fprintf(stderr, "size guard: %s\n", e.what());
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
