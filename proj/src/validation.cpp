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

#include "otfs/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "otfs/channel.hpp"
#include "otfs/ddmath.hpp"
#include "otfs/equalization.hpp"
#include "otfs/estimation.hpp"
#include "otfs/qam.hpp"
#include "otfs/reference.hpp"
#include "otfs/sim.hpp"

namespace otfs::validation {

namespace {

FrameParams frame_of(const FrameSize& s) {
    FrameParams p;
    p.num_delay_bins = s.m;
    p.num_doppler_bins = s.n;
    p.cp_len = s.cp;
    p.validate();
    return p;
}

std::string size_name(const FrameSize& s) {
    return "(" + std::to_string(s.m) + "," + std::to_string(s.n) + "," + std::to_string(s.cp) + ")";
}

DDGrid random_grid(const FrameParams& p, Rng& rng) {
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    DDGrid x = DDGrid::zeros(p);
    for (int l = 0; l < p.num_delay_bins; ++l)
        for (int k = 0; k < p.num_doppler_bins; ++k)
            x(l, k) = cplx(g(rng), g(rng));
    return x;
}

// 1..4 paths, integer delays in [0, cp], Doppler uniform in +-N/4 bins.
std::vector<DDPath> random_paths(const FrameParams& p, Rng& rng) {
    std::uniform_int_distribution<int> count(1, 4);
    std::uniform_int_distribution<int> delay(0, p.cp_len);
    std::uniform_real_distribution<double> dop(-p.num_doppler_bins / 4.0, p.num_doppler_bins / 4.0);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    std::vector<DDPath> paths(static_cast<std::size_t>(count(rng)));
    for (auto& path : paths)
        path = DDPath{delay(rng), dop(rng), cplx(g(rng), g(rng))};
    return paths;
}

double max_abs(const Eigen::MatrixXcd& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

Eigen::VectorXcd as_vector(const DDGrid& g) {
    const CVec v = vectorize(g);
    return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

CheckResult make(std::string name, double value, double threshold, bool less_or_equal, std::string detail = {}) {
    CheckResult r;
    r.name = std::move(name);
    r.value = value;
    r.threshold = threshold;
    r.passed = std::isfinite(value) && (less_or_equal ? value <= threshold : value >= threshold);
    r.detail = std::move(detail);
    return r;
}

double wrap_phase(double d) { return std::abs(std::remainder(d, kTwoPi)); }

} // namespace

CheckResult transform_identities(const std::vector<FrameSize>& sizes, double tol, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    std::string where;
    for (const auto& s : sizes) {
        const FrameParams p = frame_of(s);
        const DDGrid x = random_grid(p, rng);
        const double e1 = max_abs(sfft(isfft(x, p), p).values() - x.values());
        const double e2 = max_abs(demodulate(modulate(x, p), p).values() - x.values());
        if (std::max(e1, e2) > worst) {
            worst = std::max(e1, e2);
            where = size_name(s);
        }
    }
    return make("transform identities", worst, tol, true, "worst at " + where);
}

CheckResult transforms_vs_direct(const std::vector<FrameSize>& sizes, double tol, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (const auto& s : sizes) {
        const FrameParams p = frame_of(s);
        const DDGrid x = random_grid(p, rng);
        const FTGrid f = isfft(x, p);
        worst = std::max(worst, max_abs(f.values() - reference::isfft_direct(x, p).values()));
        worst = std::max(worst, max_abs(sfft(f, p).values() - reference::sfft_direct(f, p).values()));
        const double parseval = std::abs(f.values().squaredNorm() - x.values().squaredNorm()) / x.values().squaredNorm();
        worst = std::max(worst, parseval);
    }
    return make("isfft/sfft vs direct sums", worst, tol, true);
}

CheckResult dd_relation_oracle(const std::vector<FrameSize>& sizes, int channels, double tol, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (const auto& s : sizes) {
        const FrameParams p = frame_of(s);
        for (int c = 0; c < channels; ++c) {
            const auto paths = random_paths(p, rng);
            const DDGrid x = random_grid(p, rng);
            const DDGrid y = demodulate(apply_channel(modulate(x, p), paths, p), p);
            worst = std::max(worst, max_abs(y.values() - reference::dd_relation_direct(x, paths, p).values()));
            worst = std::max(worst, max_abs(y.values() - apply_dd_relation(x, paths, p).values()));
        }
    }
    return make("delay-Doppler relation vs pipeline", worst, tol, true,
                std::to_string(channels) + " channels per size");
}

CheckResult phi_oracle(const std::vector<FrameSize>& sizes, double tol, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (const auto& s : sizes) {
        const FrameParams p = frame_of(s);
        for (int c = 0; c < 5; ++c) {
            const auto paths = random_paths(p, rng);
            const DDGrid x = random_grid(p, rng);
            const Eigen::MatrixXcd phi = build_phi(paths, p);
            const DDGrid y = demodulate(apply_channel(modulate(x, p), paths, p), p);
            worst = std::max(worst, max_abs(phi * as_vector(x) - as_vector(y)));
            worst = std::max(worst, max_abs(phi - reference::phi_direct(paths, p)));
        }
    }
    return make("Phi vs pipeline", worst, tol, true);
}

CheckResult upsilon_closed_form(int points, double tol, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_int_distribution<int> nd(2, 64);
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const int n = nd(rng);
        double x = 3.0 * n * u(rng);
        switch (kind(rng)) {
        case 1:
            x = std::round(x); // integers, including multiples of N
            break;
        case 2:
            x = n * std::round(x / n) + 1e-11 * u(rng); // just off a multiple of N
            break;
        default:
            break;
        }
        worst = std::max(worst, std::abs(upsilon(n, x) - reference::upsilon_direct(n, x)));
    }
    return make("Doppler kernel closed form vs direct sum", worst, tol, true, std::to_string(points) + " points");
}

CheckResult upsilon_energy(int draws, double tol, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_int_distribution<int> nd(2, 64);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < draws; ++i) {
        const int n = nd(rng);
        const double kappa = u(rng);
        double s = 0.0;
        for (int k = 0; k < n; ++k)
            s += std::norm(upsilon(n, k + kappa));
        worst = std::max(worst, std::abs(s / (static_cast<double>(n) * n) - 1.0));
    }
    return make("Doppler kernel energy", worst, tol, true, std::to_string(draws) + " kappa draws");
}

CheckResult estimation_single_path(int draws, double tol, std::uint64_t seed) {
    Rng rng(seed);
    const FrameParams p = frame_of({64, 14, 6});
    std::uniform_int_distribution<int> delay(0, p.cp_len);
    std::uniform_int_distribution<int> whole(-5, 5);
    std::uniform_int_distribution<int> frac(0, 9);
    std::uniform_int_distribution<int> prow(0, p.num_delay_bins - 1);
    std::uniform_int_distribution<int> pcol(0, p.num_doppler_bins - 1);
    std::uniform_real_distribution<double> gain(0.2, 2.0);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    double worst = 0.0;
    int structural = 0;
    for (int i = 0; i < draws; ++i) {
        const DDPath truth{delay(rng), whole(rng) + frac(rng) / 10.0, std::polar(gain(rng), phase(rng))};
        const PilotPosition pilot{prow(rng), pcol(rng)};
        const DDGrid h = pilot_response_synthetic(std::span<const DDPath>(&truth, 1), pilot, p);
        const auto est = estimate_paths(h, pilot, EstimatorConfig{}, 0.0, p);
        if (est.paths.size() != 1 || est.paths[0].delay != truth.delay ||
            std::abs(est.paths[0].doppler - truth.doppler) > 1e-9) {
            ++structural;
            continue;
        }
        worst = std::max(worst, std::abs(est.paths[0].gain - std::abs(truth.coeff)));
        worst = std::max(worst, wrap_phase(est.paths[0].phase - std::arg(truth.coeff)));
    }
    if (structural)
        worst = std::max(worst, 1.0);
    return make("single-path estimation", worst, tol, true,
                std::to_string(structural) + " of " + std::to_string(draws) + " draws with wrong support");
}

CheckResult estimation_nine_path(int draws, double max_nmse_db, std::uint64_t seed) {
    Rng rng(seed);
    const FrameParams p = frame_of({64, 14, 9});
    const double nu = max_doppler_hz(500.0, p.carrier_freq_hz) / p.doppler_bin_hz();
    const auto eva = eva_scenario(1.0).profile;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = -400.0;
    for (int t = 0; t < draws; ++t) {
        std::vector<DDPath> paths;
        double e = 0.0;
        for (int d = 0; d < 9; ++d) {
            const double g = std::pow(10.0, eva[static_cast<std::size_t>(d)].power_db / 20.0);
            e += g * g;
            paths.push_back(DDPath{d, nu * std::cos(kTwoPi * u(rng) - kPi), std::polar(g, kTwoPi * u(rng))});
        }
        for (auto& path : paths)
            path.coeff /= std::sqrt(e);
        const DDGrid h = pilot_response_synthetic(paths, {0, 0}, p);
        const auto est = estimate_paths(h, {0, 0}, EstimatorConfig{}, 0.0, p);
        const DDGrid hr = pilot_response_synthetic(to_dd_paths(est.paths), {0, 0}, p);
        worst = std::max(worst, 10.0 * std::log10(nmse(hr, h)));
    }
    return make("nine-path estimation NMSE (dB, worst)", worst, max_nmse_db, true,
                std::to_string(draws) + " channels, D = 10");
}

CheckResult wiener_inverse(double tol, std::uint64_t seed) {
    Rng rng(seed);
    const FrameParams p = frame_of({16, 8, 4});
    // Row l of the output reads receive row l + d, which was formed with the
    // kernel of that row. The per-row filter is exact when the kernels do not
    // change with the row (zero Doppler) or every path has delay 0. Both
    // channels keep the spectra away from zero.
    const std::vector<std::vector<DDPath>> channels{
        {DDPath{0, 0.0, {1.0, 0.0}}, DDPath{2, 0.0, std::polar(0.3, 1.0)}, DDPath{3, 0.0, std::polar(0.2, -2.0)}},
        {DDPath{0, 0.3, std::polar(1.0, 0.4)}, DDPath{0, -1.2, std::polar(0.4, 2.5)}},
    };
    EqualizerConfig cfg;
    cfg.regularization_floor = 0.0;
    double worst = 0.0;
    for (const auto& paths : channels) {
        const DDGrid x = random_grid(p, rng);
        const DDGrid y = demodulate(apply_channel(modulate(x, p), paths, p), p);
        worst = std::max(worst, max_abs(wiener_equalize(y, paths, 0.0, cfg, p).values() - x.values()));
    }
    return make("Wiener exact inverse", worst, tol, true);
}

CheckResult mmse_inverse(double tol, std::uint64_t seed) {
    Rng rng(seed);
    const FrameParams p = frame_of({8, 4, 2});
    const std::vector<DDPath> paths{DDPath{0, 0.2, {1.0, 0.0}}, DDPath{1, -0.7, std::polar(0.4, 1.3)},
                                    DDPath{2, 1.1, std::polar(0.2, -0.5)}};
    const Eigen::MatrixXcd phi = build_phi(paths, p);
    const Eigen::VectorXcd x = as_vector(random_grid(p, rng));
    const double err = max_abs(mmse_equalize(phi * x, phi, 0.0) - x);
    return make("MMSE zero-noise inverse", err, tol, true);
}

CheckResult qam_round_trip(std::uint64_t seed) {
    Rng rng(seed);
    const FrameParams p = frame_of({16, 8, 4});
    std::uniform_int_distribution<int> coin(0, 1);
    double worst = 0.0;
    for (int order : {4, 16, 64}) {
        const QamConstellation q(order);
        Bits bits(static_cast<std::size_t>(p.grid_size() * q.bits_per_symbol()));
        for (auto& b : bits)
            b = static_cast<std::uint8_t>(coin(rng));
        if (qam_demap(qam_map(bits, order, p), order) != bits)
            worst = std::max(worst, 1.0);
        double e = 0.0;
        for (int s = 0; s < order; ++s) {
            Bits lab;
            for (int b = q.bits_per_symbol() - 1; b >= 0; --b)
                lab.push_back(static_cast<std::uint8_t>((s >> b) & 1));
            e += std::norm(q.map(lab));
        }
        worst = std::max(worst, std::abs(e / order - 1.0));
    }
    return make("QAM round trip and unit energy", worst, 1e-12, true);
}

CheckResult sweep_determinism(int trials, std::uint64_t seed) {
    SimConfig cfg;
    cfg.frame = frame_of({16, 8, 4});
    cfg.scenario = eva_scenario(max_doppler_hz(500.0, cfg.frame.carrier_freq_hz));
    cfg.snr_db = {10.0, 20.0};
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.estimators = {EstimatorKind::proposed, EstimatorKind::pn, EstimatorKind::ideal};
    cfg.equalizers = {EqualizerKind::wiener, EqualizerKind::mmse, EqualizerKind::ofdm_mmse};
    std::ostringstream a, b;
    write_csv(run_sweep(cfg), cfg, a);
    write_csv(run_sweep(cfg), cfg, b);
    return make("sweep determinism", a.str() == b.str() ? 0.0 : 1.0, 0.0, true,
                std::to_string(trials) + " trials, byte comparison");
}

std::vector<CheckResult> run_suite() {
    std::vector<CheckResult> out;
    out.push_back(transform_identities({{4, 2, 1}, {8, 4, 2}, {16, 8, 4}, {256, 14, 17}}));
    out.push_back(transforms_vs_direct({{4, 2, 1}, {8, 4, 2}, {16, 8, 4}}));
    out.push_back(dd_relation_oracle({{8, 4, 2}, {16, 8, 4}}, 10));
    out.push_back(phi_oracle({{4, 2, 1}, {8, 4, 2}}));
    out.push_back(upsilon_closed_form(10000));
    out.push_back(upsilon_energy(100));
    out.push_back(estimation_single_path(50));
    out.push_back(estimation_nine_path(20));
    out.push_back(wiener_inverse());
    out.push_back(mmse_inverse());
    out.push_back(qam_round_trip());
    out.push_back(sweep_determinism());
    return out;
}

std::string format(const CheckResult& r) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-5s %-44s %12.4g  (limit %.4g)", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                  r.value, r.threshold);
    std::string s = buf;
    if (!r.detail.empty())
        s += "  " + r.detail;
    return s;
}

} // namespace otfs::validation
