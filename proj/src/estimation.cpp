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

#include "otfs/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "otfs/fft.hpp"

namespace otfs {

namespace {

// Signed representative of x modulo n in [-n/2, n/2).
double wrap_signed(double x, int n) {
    const double nn = static_cast<double>(n);
    return x - nn * std::floor((x + nn / 2.0) / nn);
}

struct Candidate {
    double mag = -1.0;
    cplx value{};
    double b = 0.0; // absolute Doppler position k + kappa
    double doppler = 0.0;
    int kappa = 0;
};

// True when c should replace best: larger magnitude, ties go to smaller |a|,
// then smaller kappa.
bool better(const Candidate& c, const Candidate& best) {
    const double tol = 1e-12 * std::max(1.0, best.mag);
    if (c.mag > best.mag + tol)
        return true;
    if (c.mag < best.mag - tol)
        return false;
    const double ac = std::abs(c.doppler);
    const double ab = std::abs(best.doppler);
    if (ac < ab - 1e-12)
        return true;
    if (ac > ab + 1e-12)
        return false;
    return c.kappa < best.kappa;
}

// e^{-j2pi ((-xi) mod N) kappa / N}: spectrum factor of the kappa-shifted
// conjugate kernel, up to the factor N.
CVec kappa_spectrum(int n, double kappa) {
    CVec s(static_cast<std::size_t>(n));
    for (int xi = 0; xi < n; ++xi)
        s[static_cast<std::size_t>(xi)] = unit_phasor(-wrap_index(-xi, n) * kappa / n);
    return s;
}

struct RowResult {
    std::vector<EstimatedPath> paths;
    bool truncated = false;
    std::uint64_t ops = 0;
};

RowResult search_row(const DDGrid& response, int row, int rel_delay, PilotPosition pilot, const EstimatorConfig& cfg,
                     double noise_std, const std::vector<CVec>& kappa_specs, const FrameParams& p) {
    const int n = p.num_doppler_bins;
    const int dres = cfg.doppler_resolution;
    const double c = calibration_constant(p);
    const double frame = static_cast<double>(p.block_len()) * n;
    const double inv_n2 = 1.0 / (static_cast<double>(n) * n);

    RowResult out;
    CVec spec(static_cast<std::size_t>(n));
    cplx row_sum{};
    for (int k = 0; k < n; ++k) {
        row_sum += response(row, k);
        spec[static_cast<std::size_t>(k)] = c * response(row, k);
    }
    const double alpha_floor = cfg.alpha * std::abs(row_sum);
    const double beta_floor = cfg.beta * noise_std;
    fft::forward(spec);

    CVec buf(static_cast<std::size_t>(n));
    double prev = std::numeric_limits<double>::infinity();
    for (;;) {
        Candidate best;
        for (int q = 0; q < dres; ++q) {
            const auto& ks = kappa_specs[static_cast<std::size_t>(q)];
            for (int xi = 0; xi < n; ++xi)
                buf[static_cast<std::size_t>(xi)] = spec[static_cast<std::size_t>(xi)] * ks[static_cast<std::size_t>(xi)];
            fft::inverse(buf);
            for (int k = 0; k < n; ++k) {
                Candidate cand;
                cand.value = buf[static_cast<std::size_t>(k)] * inv_n2;
                cand.mag = std::abs(cand.value);
                cand.kappa = q;
                cand.b = k + static_cast<double>(q) / dres;
                cand.doppler = wrap_signed(cand.b - pilot.doppler, n);
                if (cfg.doppler_search_halfwidth && std::abs(cand.doppler) > *cfg.doppler_search_halfwidth + 1e-12)
                    continue;
                if (better(cand, best))
                    best = cand;
            }
        }
        out.ops += static_cast<std::uint64_t>(dres) * static_cast<std::uint64_t>(n);

        if (best.mag <= 0.0 || best.mag > prev || best.mag < alpha_floor || best.mag < beta_floor)
            break;
        if (static_cast<int>(out.paths.size()) >= cfg.max_paths_per_delay) {
            out.truncated = true;
            break;
        }

        EstimatedPath e;
        e.delay = rel_delay;
        e.doppler = best.doppler;
        e.gain = best.mag;
        e.psi_hat = unit_phasor(best.doppler * static_cast<double>(p.cp_len - rel_delay) / frame);
        const cplx psi_row = unit_phasor(best.doppler * static_cast<double>(p.cp_len - rel_delay + row) / frame);
        double ph = std::arg(best.value / best.mag / psi_row);
        if (ph < 0.0)
            ph += kTwoPi;
        e.phase = ph;
        out.paths.push_back(e);
        prev = best.mag;

        // Cancel R * U_N(b - k); its spectrum is R N e^{j2pi ((-xi) mod N) b / N}.
        for (int xi = 0; xi < n; ++xi)
            spec[static_cast<std::size_t>(xi)] -=
                best.value * static_cast<double>(n) * unit_phasor(wrap_index(-xi, n) * best.b / n);
    }
    return out;
}

} // namespace

void EstimatorConfig::validate() const {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw ConfigError("estimator: alpha must be in [0, 1)");
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw ConfigError("estimator: beta must be >= 0");
    if (doppler_resolution < 1)
        throw ConfigError("estimator: doppler_resolution must be >= 1");
    if (max_paths_per_delay < 1)
        throw ConfigError("estimator: max_paths_per_delay must be >= 1");
    if (doppler_search_halfwidth && !(*doppler_search_halfwidth >= 0.0))
        throw ConfigError("estimator: doppler_search_halfwidth must be >= 0");
    if (delay_search_span && *delay_search_span < 1)
        throw ConfigError("estimator: delay_search_span must be >= 1");
}

CVec xcorr_doppler(std::span<const cplx> row, double kappa) {
    const int n = static_cast<int>(row.size());
    if (n < 1)
        throw std::invalid_argument("xcorr_doppler: empty row");
    CVec buf(row.begin(), row.end());
    fft::forward(buf);
    const CVec ks = kappa_spectrum(n, kappa);
    for (int xi = 0; xi < n; ++xi)
        buf[static_cast<std::size_t>(xi)] *= ks[static_cast<std::size_t>(xi)];
    fft::inverse(buf);
    const double inv_n2 = 1.0 / (static_cast<double>(n) * n);
    for (auto& v : buf)
        v *= inv_n2;
    return buf;
}

EstimationResult estimate_paths(const DDGrid& response, PilotPosition pilot, const EstimatorConfig& cfg,
                                double noise_var, const FrameParams& p) {
    cfg.validate();
    check_dims(response, p, "estimate_paths");
    if (!(noise_var >= 0.0))
        throw std::invalid_argument("estimate_paths: noise variance must be >= 0");
    const int m = p.num_delay_bins;
    if (pilot.delay < 0 || pilot.delay >= m || pilot.doppler < 0 || pilot.doppler >= p.num_doppler_bins)
        throw std::invalid_argument("estimate_paths: pilot position outside the grid");

    std::vector<CVec> kappa_specs;
    for (int q = 0; q < cfg.doppler_resolution; ++q)
        kappa_specs.push_back(kappa_spectrum(p.num_doppler_bins, static_cast<double>(q) / cfg.doppler_resolution));

    const int span = std::min(m, cfg.delay_search_span.value_or(m));
    const double noise_std = std::sqrt(noise_var);
    std::vector<RowResult> rows(static_cast<std::size_t>(span));
#pragma omp parallel for schedule(dynamic)
    for (int l = 0; l < span; ++l) {
        const int r = wrap_index(static_cast<long long>(pilot.delay) + l, m);
        rows[static_cast<std::size_t>(l)] = search_row(response, r, l, pilot, cfg, noise_std, kappa_specs, p);
    }

    EstimationResult res;
    for (auto& rr : rows) {
        res.paths.insert(res.paths.end(), rr.paths.begin(), rr.paths.end());
        res.truncated = res.truncated || rr.truncated;
        res.correlation_ops += rr.ops;
    }
    return res;
}

std::vector<EstimatedPath> ideal_estimates(const ChannelRealization& ch) {
    const auto& p = ch.params;
    const double frame = static_cast<double>(p.block_len()) * p.num_doppler_bins;
    std::vector<EstimatedPath> out;
    for (const auto& d : dd_paths(ch)) {
        EstimatedPath e;
        e.delay = d.delay;
        e.doppler = d.doppler;
        e.gain = std::abs(d.coeff);
        double ph = std::arg(d.coeff);
        e.phase = ph < 0.0 ? ph + kTwoPi : ph;
        e.psi_hat = unit_phasor(d.doppler * static_cast<double>(p.cp_len - d.delay) / frame);
        out.push_back(e);
    }
    return out;
}

DDPath to_dd_path(const EstimatedPath& e) { return DDPath{e.delay, e.doppler, std::polar(e.gain, e.phase)}; }

std::vector<DDPath> to_dd_paths(std::span<const EstimatedPath> est) {
    std::vector<DDPath> out;
    out.reserve(est.size());
    for (const auto& e : est)
        out.push_back(to_dd_path(e));
    return out;
}

// --- PN baseline -------------------------------------------------------------

void PnConfig::validate() const {
    if (doppler_resolution < 1)
        throw ConfigError("pn: doppler_resolution must be >= 1");
    if (max_paths < 1)
        throw ConfigError("pn: max_paths must be >= 1");
    if (!(detection_threshold >= 0.0))
        throw ConfigError("pn: detection_threshold must be >= 0");
    if (!(relative_floor >= 0.0 && relative_floor < 1.0))
        throw ConfigError("pn: relative_floor must be in [0, 1)");
}

TimeSignal make_pn_frame(const FrameParams& p, Rng& rng) {
    const int m = p.num_delay_bins;
    const int cp = p.cp_len;
    const int block = p.block_len();
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    TimeSignal s{CVec(p.samples_per_frame()), p.sample_rate_hz()};
    for (int n = 0; n < p.num_doppler_bins; ++n) {
        const std::size_t start = static_cast<std::size_t>(n) * static_cast<std::size_t>(block);
        for (int i = 0; i < m; ++i)
            s.samples[start + static_cast<std::size_t>(cp + i)] = unit_phasor(uni(rng));
        for (int i = 0; i < cp; ++i)
            s.samples[start + static_cast<std::size_t>(i)] = s.samples[start + static_cast<std::size_t>(m + i)];
    }
    return s;
}

EstimationResult pn_estimate(const TimeSignal& rx, const TimeSignal& pn, const PnConfig& cfg,
                             double max_doppler_hz, double noise_var, const FrameParams& p) {
    cfg.validate();
    const std::size_t total = p.samples_per_frame();
    if (rx.samples.size() != total || pn.samples.size() != total)
        throw std::invalid_argument("pn_estimate: signals are not frame aligned");
    if (!(noise_var >= 0.0))
        throw std::invalid_argument("pn_estimate: noise variance must be >= 0");
    if (!(max_doppler_hz >= 0.0))
        throw std::invalid_argument("pn_estimate: max Doppler must be >= 0");

    const int m = p.num_delay_bins;
    const int cp = p.cp_len;
    const int block = p.block_len();
    const double frame = static_cast<double>(total);
    const int num_delays = cp + 1;

    // Delayed copies of the PN frame, same indexing as apply_channel.
    std::vector<CVec> shifted(static_cast<std::size_t>(num_delays), CVec(total));
    std::vector<double> energy(static_cast<std::size_t>(num_delays), 0.0);
    for (int d = 0; d < num_delays; ++d) {
        auto& z = shifted[static_cast<std::size_t>(d)];
        for (int n = 0; n < p.num_doppler_bins; ++n) {
            const long long start = static_cast<long long>(n) * block;
            for (int q = 0; q < block; ++q) {
                const long long t = start + q;
                const long long src = q >= cp ? start + cp + wrap_index(q - cp - d, m) : t - d;
                if (src >= 0)
                    z[static_cast<std::size_t>(t)] = pn.samples[static_cast<std::size_t>(src)];
            }
        }
        for (const auto& v : z)
            energy[static_cast<std::size_t>(d)] += std::norm(v);
    }

    const double max_bins = max_doppler_hz / p.doppler_bin_hz();
    const int qmax = static_cast<int>(std::floor(max_bins * cfg.doppler_resolution + 1e-9));
    std::vector<double> dopplers;
    for (int q = -qmax; q <= qmax; ++q)
        dopplers.push_back(static_cast<double>(q) / cfg.doppler_resolution);
    // rot[h][t] = e^{-j2pi a_h t / frame}
    std::vector<CVec> rot(dopplers.size(), CVec(total));
    for (std::size_t h = 0; h < dopplers.size(); ++h)
        for (std::size_t t = 0; t < total; ++t)
            rot[h][t] = unit_phasor(-dopplers[h] * static_cast<double>(t) / frame);

    EstimationResult res;
    CVec residual = rx.samples;
    const double noise_std = std::sqrt(noise_var);
    double prev = std::numeric_limits<double>::infinity();
    double first = -1.0;
    const std::size_t hyps = static_cast<std::size_t>(num_delays) * dopplers.size();
    std::vector<cplx> coeffs(hyps);

    for (;;) {
#pragma omp parallel for schedule(static)
        for (int d = 0; d < num_delays; ++d) {
            const auto& z = shifted[static_cast<std::size_t>(d)];
            CVec u(total);
            for (std::size_t t = 0; t < total; ++t)
                u[t] = residual[t] * std::conj(z[t]);
            for (std::size_t h = 0; h < dopplers.size(); ++h) {
                cplx acc{};
                const auto& r = rot[h];
                for (std::size_t t = 0; t < total; ++t)
                    acc += u[t] * r[t];
                // Template phase is referenced to t - d.
                acc *= unit_phasor(dopplers[h] * d / frame);
                coeffs[static_cast<std::size_t>(d) * dopplers.size() + h] = acc / energy[static_cast<std::size_t>(d)];
            }
        }
        res.correlation_ops += static_cast<std::uint64_t>(hyps) * total;

        std::size_t best = 0;
        double best_mag = -1.0;
        for (std::size_t i = 0; i < hyps; ++i) {
            const double mag = std::abs(coeffs[i]);
            if (mag > best_mag) {
                best_mag = mag;
                best = i;
            }
        }
        const int d = static_cast<int>(best / dopplers.size());
        const double a = dopplers[best % dopplers.size()];
        const double coeff_std = noise_std / std::sqrt(energy[static_cast<std::size_t>(d)]);
        if (best_mag <= 0.0 || (cfg.stop_on_rise && best_mag > prev) ||
            best_mag < cfg.detection_threshold * coeff_std ||
            (first > 0.0 && best_mag < cfg.relative_floor * first))
            break;
        if (static_cast<int>(res.paths.size()) >= cfg.max_paths) {
            res.truncated = true;
            break;
        }

        const cplx c = coeffs[best];
        EstimatedPath e;
        e.delay = d;
        e.doppler = a;
        e.gain = best_mag;
        double ph = std::arg(c);
        e.phase = ph < 0.0 ? ph + kTwoPi : ph;
        e.psi_hat = unit_phasor(a * static_cast<double>(cp - d) / frame);
        res.paths.push_back(e);
        prev = best_mag;
        if (first < 0.0)
            first = best_mag;

        const auto& z = shifted[static_cast<std::size_t>(d)];
        for (std::size_t t = 0; t < total; ++t)
            residual[t] -= c * unit_phasor(a * (static_cast<double>(t) - d) / frame) * z[t];
    }
    return res;
}

} // namespace otfs
