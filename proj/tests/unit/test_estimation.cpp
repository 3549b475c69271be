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

#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "otfs/estimation.hpp"
#include "otfs/reference.hpp"
#include "otfs/sim.hpp"

using namespace otfs;
using otfs::test::frame;
using otfs::test::max_abs;

namespace {

double wrap_phase(double x) { return std::remainder(x, kTwoPi); }

CVec literal_row(const DDGrid& g, int row, const FrameParams& p) {
    const double c = calibration_constant(p);
    CVec r(static_cast<std::size_t>(g.cols()));
    for (int k = 0; k < g.cols(); ++k)
        r[static_cast<std::size_t>(k)] = g(row, k) * c;
    return r;
}

} // namespace

TEST_CASE("correlation of a kernel-shaped row peaks at the path gain") {
    const int n = 14;
    for (double shift : {0.0, 0.3, 3.7, -2.2}) {
        CVec row(n);
        for (int k = 0; k < n; ++k)
            row[static_cast<std::size_t>(k)] = upsilon(n, shift - k);
        const double kappa = shift - std::floor(shift);
        const CVec r = xcorr_doppler(row, kappa);
        const int k0 = wrap_index(static_cast<long long>(std::floor(shift)), n);
        CHECK(std::abs(r[static_cast<std::size_t>(k0)]) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(max_abs(r, reference::xcorr_direct(row, kappa)) < 1e-10);
    }
    const CVec r = xcorr_doppler(CVec(n), 0.4);
    CHECK(max_abs(r, CVec(n)) == 0.0);
}

TEST_CASE("correlation of a measured integer-Doppler row") {
    const auto p = frame(16, 8, 4);
    const std::vector<DDPath> paths{{1, 2.0, std::polar(0.6, 1.0)}};
    DDGrid x = DDGrid::zeros(p);
    x(0, 0) = 1.0;
    const DDGrid y = demodulate(apply_channel(modulate(x, p), paths, p), p);
    const CVec r = xcorr_doppler(literal_row(y, 1, p), 0.0);
    std::size_t best = 0;
    for (std::size_t k = 1; k < r.size(); ++k)
        if (std::abs(r[k]) > std::abs(r[best]))
            best = k;
    CHECK(best == 2);
    CHECK(std::abs(r[2]) == doctest::Approx(0.6).epsilon(1e-9));
}

TEST_CASE("noiseless single path is recovered exactly") {
    const auto p = frame(16, 8, 4);
    const std::vector<DDPath> paths{{2, 1.3, std::polar(0.8, kPi / 3.0)}};
    const auto est = estimate_paths(pilot_response_synthetic(paths, {0, 0}, p), {0, 0}, EstimatorConfig{}, 0.0, p);
    REQUIRE(est.paths.size() == 1);
    const auto& e = est.paths[0];
    CHECK(e.delay == 2);
    CHECK(e.doppler == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(std::abs(e.gain - 0.8) <= 1e-6);
    CHECK(std::abs(wrap_phase(e.phase - kPi / 3.0)) <= 1e-6);
    CHECK(std::abs(std::abs(e.psi_hat) - 1.0) < 1e-12);
    CHECK_FALSE(est.truncated);
}

TEST_CASE("zero pilot response gives no paths") {
    const auto p = frame(16, 8, 4);
    CHECK(estimate_paths(DDGrid::zeros(p), {0, 0}, EstimatorConfig{}, 0.0, p).paths.empty());
    CHECK(estimate_paths(DDGrid::zeros(p), {0, 0}, EstimatorConfig{}, 0.01, p).paths.empty());
}

TEST_CASE("two paths on one delay row") {
    const auto p = frame(16, 14, 4);
    // Real gains. With a relative phase the leakage 0.3 |U(2.5)| / N can reach about 0.04.
    const std::vector<DDPath> paths{{1, 0.2, {1.0, 0.0}}, {1, 2.7, {0.3, 0.0}}};
    const auto est = estimate_paths(pilot_response_synthetic(paths, {0, 0}, p), {0, 0}, EstimatorConfig{}, 0.0, p);
    REQUIRE(est.paths.size() >= 2);
    CHECK(est.paths[0].doppler == doctest::Approx(0.2));
    CHECK(std::abs(est.paths[0].gain - 1.0) <= 0.02);
    CHECK(est.paths[1].doppler == doctest::Approx(2.7));
    CHECK(std::abs(est.paths[1].gain - 0.3) <= 0.02);
}

TEST_CASE("gains are non-increasing within a row and Dopplers sit on the search grid") {
    std::mt19937_64 rng(3);
    const auto p = frame(32, 14, 6);
    std::uniform_real_distribution<double> a(-0.4, 0.4), ph(0.0, kTwoPi);
    std::vector<DDPath> paths;
    for (int d = 0; d < 6; ++d)
        for (int j = 0; j < 3; ++j)
            paths.push_back({d, a(rng) + 2 * j, std::polar(1.0 / (1 + d + j), ph(rng))});
    EstimatorConfig cfg;
    const auto est = estimate_paths(pilot_response_synthetic(paths, {0, 0}, p), {0, 0}, cfg, 1e-6, p);
    REQUIRE(!est.paths.empty());
    for (std::size_t i = 0; i < est.paths.size(); ++i) {
        const double scaled = est.paths[i].doppler * cfg.doppler_resolution;
        CHECK(std::abs(scaled - std::round(scaled)) < 1e-9);
        CHECK(est.paths[i].gain >= 0.0);
        if (i > 0 && est.paths[i].delay == est.paths[i - 1].delay)
            CHECK(est.paths[i].gain <= est.paths[i - 1].gain);
    }
}

TEST_CASE("residual energy does not grow with each cancellation") {
    std::mt19937_64 rng(4);
    const auto p = frame(16, 14, 4);
    std::uniform_real_distribution<double> a(-3.0, 3.0), ph(0.0, kTwoPi);
    std::vector<DDPath> paths;
    for (int j = 0; j < 5; ++j)
        paths.push_back({0, a(rng), std::polar(1.0 - 0.15 * j, ph(rng))});
    const DDGrid h = pilot_response_synthetic(paths, {0, 0}, p);
    const auto est = estimate_paths(h, {0, 0}, EstimatorConfig{}, 0.0, p);
    double prev = h.values().squaredNorm();
    for (std::size_t k = 1; k <= est.paths.size(); ++k) {
        const std::span<const EstimatedPath> first(est.paths.data(), k);
        const double r = (h.values() - pilot_response_synthetic(to_dd_paths(first), {0, 0}, p).values()).squaredNorm();
        CHECK(r <= prev * (1.0 + 1e-12));
        prev = r;
    }
}

TEST_CASE("estimates are equivariant to the pilot position") {
    std::mt19937_64 rng(5);
    const auto p = frame(16, 8, 4);
    std::uniform_int_distribution<int> a(-15, 15);
    std::uniform_real_distribution<double> ph(0.0, kTwoPi);
    // Dopplers on the 1/D grid: the estimate is exact, so only the pilot
    // offset can move it. Off the grid the recovered phase picks up the
    // (a_hat - a) part of psi, which depends on the receive row.
    std::vector<DDPath> paths;
    for (int d = 0; d < 4; ++d)
        paths.push_back({d, 0.1 * a(rng), std::polar(1.0 - 0.2 * d, ph(rng))});
    const auto base = estimate_paths(pilot_response_synthetic(paths, {0, 0}, p), {0, 0}, EstimatorConfig{}, 0.0, p);
    const PilotPosition moved{5, 3};
    const auto shifted = estimate_paths(pilot_response_synthetic(paths, moved, p), moved, EstimatorConfig{}, 0.0, p);
    REQUIRE(base.paths.size() == shifted.paths.size());
    for (std::size_t i = 0; i < base.paths.size(); ++i) {
        CHECK(base.paths[i].delay == shifted.paths[i].delay);
        CHECK(base.paths[i].doppler == doctest::Approx(shifted.paths[i].doppler));
        CHECK(std::abs(base.paths[i].gain - shifted.paths[i].gain) < 1e-9);
        CHECK(std::abs(wrap_phase(base.paths[i].phase - shifted.paths[i].phase)) < 1e-9);
    }
}

TEST_CASE("estimation is deterministic and matches the serial reference") {
    std::mt19937_64 rng(6);
    const auto p = frame(32, 14, 6);
    auto paths = std::vector<DDPath>{{0, 0.31, {0.9, 0.1}}, {3, -0.27, {0.2, 0.5}}, {6, 0.12, {-0.3, 0.2}}};
    DDGrid h = pilot_response_synthetic(paths, {0, 0}, p);
    h.values() += 0.01 * otfs::test::random_matrix(32, 14, rng);
    const auto a = estimate_paths(h, {0, 0}, EstimatorConfig{}, 1e-4, p);
    const auto b = estimate_paths(h, {0, 0}, EstimatorConfig{}, 1e-4, p);
    const auto s = reference::estimate_paths_serial(h, {0, 0}, EstimatorConfig{}, 1e-4, p);
    REQUIRE(a.paths.size() == b.paths.size());
    REQUIRE(a.paths.size() == s.paths.size());
    CHECK(a.correlation_ops == s.correlation_ops);
    for (std::size_t i = 0; i < a.paths.size(); ++i) {
        CHECK(a.paths[i].gain == b.paths[i].gain);
        CHECK(a.paths[i].phase == b.paths[i].phase);
        CHECK(a.paths[i].delay == s.paths[i].delay);
        CHECK(a.paths[i].doppler == doctest::Approx(s.paths[i].doppler));
        CHECK(a.paths[i].gain == doctest::Approx(s.paths[i].gain).epsilon(1e-9));
    }
}

TEST_CASE("nine-path channel is reconstructed below -25 dB") {
    std::mt19937_64 rng(7);
    const auto p = frame(64, 14, 9);
    const double nu = max_doppler_hz(500.0, p.carrier_freq_hz) / p.doppler_bin_hz();
    const auto eva = eva_scenario(1.0).profile;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 10; ++t) {
        std::vector<DDPath> paths;
        for (int d = 0; d < 9; ++d)
            paths.push_back({d, nu * std::cos(kTwoPi * u(rng) - kPi),
                             std::polar(std::pow(10.0, eva[static_cast<std::size_t>(d)].power_db / 20.0),
                                        kTwoPi * u(rng))});
        const DDGrid h = pilot_response_synthetic(paths, {0, 0}, p);
        const auto est = estimate_paths(h, {0, 0}, EstimatorConfig{}, 0.0, p);
        const DDGrid r = pilot_response_synthetic(to_dd_paths(est.paths), {0, 0}, p);
        CHECK(10.0 * std::log10(nmse(r, h)) <= -25.0);
    }
}

TEST_CASE("op counter and truncation") {
    const auto p = frame(16, 8, 4);
    const std::vector<DDPath> paths{{0, 0.0, {1.0, 0.0}}, {2, 1.0, {0.5, 0.0}}};
    const DDGrid h = pilot_response_synthetic(paths, {0, 0}, p);
    EstimatorConfig cfg;
    const auto est = estimate_paths(h, {0, 0}, cfg, 0.0, p);
    CHECK(est.paths.size() == 2);
    CHECK(est.correlation_ops == 10u * 8u * (2u + 16u));
    cfg.delay_search_span = 5;
    CHECK(estimate_paths(h, {0, 0}, cfg, 0.0, p).correlation_ops == 10u * 8u * (2u + 5u));

    std::vector<DDPath> many;
    for (int j = 0; j < 4; ++j)
        many.push_back({0, 2.0 * j, {1.0 - 0.1 * j, 0.0}});
    EstimatorConfig capped;
    capped.max_paths_per_delay = 2;
    const auto t = estimate_paths(pilot_response_synthetic(many, {0, 0}, p), {0, 0}, capped, 0.0, p);
    CHECK(t.truncated);
    CHECK(t.paths.size() == 2);
}

TEST_CASE("Doppler search half-width") {
    const auto p = frame(16, 8, 4);
    const std::vector<DDPath> paths{{0, 0.2, {1.0, 0.0}}, {0, 3.0, {0.8, 0.0}}};
    EstimatorConfig cfg;
    cfg.doppler_search_halfwidth = 1.0;
    const auto est = estimate_paths(pilot_response_synthetic(paths, {0, 0}, p), {0, 0}, cfg, 0.0, p);
    for (const auto& e : est.paths)
        CHECK(std::abs(e.doppler) <= 1.0 + 1e-12);
}

TEST_CASE("estimator argument checks") {
    const auto p = frame(16, 8, 4);
    CHECK_THROWS_AS(estimate_paths(DDGrid::zeros(p), {0, 0}, EstimatorConfig{}, -1.0, p), std::invalid_argument);
    CHECK_THROWS_AS(estimate_paths(DDGrid::zeros(p), {16, 0}, EstimatorConfig{}, 0.0, p), std::invalid_argument);
    EstimatorConfig bad;
    bad.doppler_resolution = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = EstimatorConfig{};
    bad.beta = -0.1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = EstimatorConfig{};
    bad.max_paths_per_delay = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK(EstimatorConfig{}.alpha == doctest::Approx(0.02));
    CHECK(EstimatorConfig{}.beta == doctest::Approx(0.1));
    CHECK(EstimatorConfig{}.doppler_resolution == 10);
}

TEST_CASE("ideal estimates reproduce the channel taps") {
    const auto p = frame(64, 14, 6);
    ChannelRealization ch;
    ch.params = p;
    ch.paths.push_back({0.8, 2.0 / p.sample_rate_hz(), 300.0, 1.0});
    ch.paths.push_back({0.5, 3.4 / p.sample_rate_hz(), -200.0, 2.0});
    const auto est = ideal_estimates(ch);
    const auto taps = dd_paths(ch);
    REQUIRE(est.size() == taps.size());
    for (std::size_t i = 0; i < est.size(); ++i) {
        const DDPath back = to_dd_path(est[i]);
        CHECK(back.delay == taps[i].delay);
        CHECK(back.doppler == doctest::Approx(taps[i].doppler));
        CHECK(std::abs(back.coeff - taps[i].coeff) < 1e-12);
    }
}

// --- PN baseline -------------------------------------------------------------

TEST_CASE("PN estimate on the identity channel") {
    const auto p = frame(32, 14, 6);
    Rng rng(1);
    const TimeSignal pn = make_pn_frame(p, rng);
    REQUIRE(pn.samples.size() == p.samples_per_frame());
    for (int n = 0; n < 14; ++n)
        for (int i = 0; i < 6; ++i) {
            const auto b = static_cast<std::size_t>(n * p.block_len());
            CHECK(pn.samples[b + i] == pn.samples[b + 32 + i]);
        }
    PnConfig cfg;
    cfg.max_paths = 1;
    const auto est = pn_estimate(pn, pn, cfg, 0.4 * p.doppler_bin_hz(), 0.0, p);
    REQUIRE(est.paths.size() == 1);
    CHECK(est.paths[0].delay == 0);
    CHECK(std::abs(est.paths[0].doppler) < 1e-12);
    CHECK(std::abs(est.paths[0].gain - 1.0) <= 1e-6);
}

TEST_CASE("PN estimate of a delayed Doppler-shifted path") {
    const auto p = frame(32, 14, 6);
    Rng rng(2);
    const TimeSignal pn = make_pn_frame(p, rng);
    const std::vector<DDPath> paths{{3, 0.5, std::polar(0.7, 0.4)}};
    const TimeSignal rx = apply_channel(pn, paths, p);
    PnConfig cfg;
    cfg.max_paths = 1;
    const auto est = pn_estimate(rx, pn, cfg, 0.6 * p.doppler_bin_hz(), 0.0, p);
    REQUIRE(est.paths.size() == 1);
    CHECK(est.paths[0].delay == 3);
    CHECK(std::abs(est.paths[0].doppler - 0.5) <= 0.1 + 1e-12);
    CHECK(std::abs(est.paths[0].gain - 0.7) < 0.05);
}

TEST_CASE("PN false alarms on pure noise") {
    const auto p = frame(32, 14, 6);
    int clean = 0;
    for (int run = 0; run < 100; ++run) {
        Rng rng(1000 + static_cast<unsigned>(run));
        const TimeSignal pn = make_pn_frame(p, rng);
        const TimeSignal rx = add_noise(TimeSignal{CVec(pn.samples.size()), pn.sample_rate_hz}, 1.0, rng);
        const auto est = pn_estimate(rx, pn, PnConfig{}, 0.4 * p.doppler_bin_hz(), 1.0, p);
        if (est.paths.size() <= 1)
            ++clean;
    }
    CHECK(clean >= 95);
}

TEST_CASE("PN argument checks") {
    const auto p = frame(32, 14, 6);
    Rng rng(3);
    const TimeSignal pn = make_pn_frame(p, rng);
    TimeSignal shortened = pn;
    shortened.samples.pop_back();
    CHECK_THROWS_AS(pn_estimate(shortened, pn, PnConfig{}, 100.0, 0.0, p), std::invalid_argument);
    CHECK_THROWS_AS(pn_estimate(pn, pn, PnConfig{}, 100.0, -1.0, p), std::invalid_argument);
    PnConfig bad;
    bad.max_paths = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}
