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

#include "otfs/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "otfs/fft.hpp"

namespace otfs::reference {

cplx upsilon_direct(int n, double x) {
    cplx s{};
    for (int i = 0; i < n; ++i)
        s += std::polar(1.0, kTwoPi * i * x / n);
    return s;
}

FTGrid isfft_direct(const DDGrid& x, const FrameParams& p) {
    check_dims(x, p, "isfft_direct");
    const int m = p.num_delay_bins;
    const int n = p.num_doppler_bins;
    const double s = 1.0 / std::sqrt(static_cast<double>(m) * n);
    FTGrid y = FTGrid::zeros(p);
    for (int mm = 0; mm < m; ++mm)
        for (int nn = 0; nn < n; ++nn) {
            cplx acc{};
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < m; ++l)
                    acc += x(l, k) * std::polar(1.0, -kTwoPi * (static_cast<double>(mm) * l / m -
                                                                 static_cast<double>(nn) * k / n));
            y(mm, nn) = s * acc;
        }
    return y;
}

DDGrid sfft_direct(const FTGrid& y, const FrameParams& p) {
    check_dims(y, p, "sfft_direct");
    const int m = p.num_delay_bins;
    const int n = p.num_doppler_bins;
    const double s = 1.0 / std::sqrt(static_cast<double>(m) * n);
    DDGrid x = DDGrid::zeros(p);
    for (int l = 0; l < m; ++l)
        for (int k = 0; k < n; ++k) {
            cplx acc{};
            for (int nn = 0; nn < n; ++nn)
                for (int mm = 0; mm < m; ++mm)
                    acc += y(mm, nn) * std::polar(1.0, kTwoPi * (static_cast<double>(mm) * l / m -
                                                                static_cast<double>(nn) * k / n));
            x(l, k) = s * acc;
        }
    return x;
}

DDGrid dd_relation_direct(const DDGrid& x, std::span<const DDPath> paths, const FrameParams& p) {
    check_dims(x, p, "dd_relation_direct");
    const int m = p.num_delay_bins;
    const int n = p.num_doppler_bins;
    const int ncp = p.cp_len;
    const double frame = static_cast<double>(p.block_len()) * n;
    const double c = static_cast<double>(n);
    DDGrid y = DDGrid::zeros(p);
    for (int l = 0; l < m; ++l)
        for (int k = 0; k < n; ++k) {
            cplx acc{};
            for (int lp = 0; lp < m; ++lp)
                for (int kp = 0; kp < n; ++kp) {
                    const int dl = ((l - lp) % m + m) % m;
                    const int dk = ((k - kp) % n + n) % n;
                    cplx lam{};
                    for (const auto& path : paths) {
                        if (((path.delay % m) + m) % m != dl)
                            continue;
                        const cplx ps = std::polar(1.0, kTwoPi * path.doppler * (ncp - path.delay + l) / frame);
                        lam += path.coeff * ps * upsilon_direct(n, path.doppler - dk);
                    }
                    acc += x(lp, kp) * lam;
                }
            y(l, k) = acc / c;
        }
    return y;
}

Eigen::MatrixXcd phi_direct(std::span<const DDPath> paths, const FrameParams& p) {
    const int m = p.num_delay_bins;
    const int n = p.num_doppler_bins;
    const int dim = m * n;
    Eigen::MatrixXcd fn(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            fn(r, c) = std::polar(1.0 / std::sqrt(static_cast<double>(n)), -kTwoPi * r * c / n);
    Eigen::MatrixXcd kron = Eigen::MatrixXcd::Zero(dim, dim);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            for (int i = 0; i < m; ++i)
                kron(r * m + i, c * m + i) = fn(r, c);
    Eigen::MatrixXcd blk = Eigen::MatrixXcd::Zero(dim, dim);
    for (int s = 0; s < n; ++s)
        blk.block(s * m, s * m, m, m) = build_hn(paths, p, s);
    return kron * blk * kron.adjoint();
}

CVec xcorr_direct(std::span<const cplx> row, double kappa) {
    const int n = static_cast<int>(row.size());
    CVec out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        cplx acc{};
        for (int kp = 0; kp < n; ++kp)
            acc += row[static_cast<std::size_t>(kp)] * std::conj(upsilon_direct(n, k + kappa - kp));
        out[static_cast<std::size_t>(k)] = acc / (static_cast<double>(n) * n);
    }
    return out;
}

EstimationResult estimate_paths_serial(const DDGrid& response, PilotPosition pilot, const EstimatorConfig& cfg,
                                       double noise_var, const FrameParams& p) {
    cfg.validate();
    check_dims(response, p, "estimate_paths_serial");
    const int m = p.num_delay_bins;
    const int n = p.num_doppler_bins;
    const int dres = cfg.doppler_resolution;
    const double c = static_cast<double>(n);
    const double frame = static_cast<double>(p.block_len()) * n;
    const double sigma = std::sqrt(noise_var);
    const int span = std::min(m, cfg.delay_search_span.value_or(m));

    EstimationResult res;
    for (int l = 0; l < span; ++l) {
        const int r = (pilot.delay + l) % m;
        CVec row(static_cast<std::size_t>(n));
        cplx sum{};
        for (int k = 0; k < n; ++k) {
            sum += response(r, k);
            row[static_cast<std::size_t>(k)] = c * response(r, k);
        }
        double prev = std::numeric_limits<double>::infinity();
        int count = 0;
        for (;;) {
            double best_mag = -1.0, best_b = 0.0, best_a = 0.0;
            int best_q = 0;
            cplx best_v{};
            for (int q = 0; q < dres; ++q) {
                const double kappa = static_cast<double>(q) / dres;
                const CVec rq = xcorr_direct(row, kappa);
                for (int k = 0; k < n; ++k) {
                    const double b = k + kappa;
                    double a = b - pilot.doppler;
                    a -= n * std::floor((a + n / 2.0) / n);
                    if (cfg.doppler_search_halfwidth && std::abs(a) > *cfg.doppler_search_halfwidth + 1e-12)
                        continue;
                    const double mag = std::abs(rq[static_cast<std::size_t>(k)]);
                    const double tol = 1e-12 * std::max(1.0, best_mag);
                    bool take = mag > best_mag + tol;
                    if (!take && mag >= best_mag - tol) {
                        if (std::abs(a) < std::abs(best_a) - 1e-12)
                            take = true;
                        else if (std::abs(a) <= std::abs(best_a) + 1e-12 && q < best_q)
                            take = true;
                    }
                    if (take) {
                        best_mag = mag;
                        best_b = b;
                        best_a = a;
                        best_q = q;
                        best_v = rq[static_cast<std::size_t>(k)];
                    }
                }
            }
            res.correlation_ops += static_cast<std::uint64_t>(dres) * static_cast<std::uint64_t>(n);
            if (best_mag <= 0.0 || best_mag > prev || best_mag < cfg.alpha * std::abs(sum) ||
                best_mag < cfg.beta * sigma)
                break;
            if (count >= cfg.max_paths_per_delay) {
                res.truncated = true;
                break;
            }
            EstimatedPath e;
            e.delay = l;
            e.doppler = best_a;
            e.gain = best_mag;
            e.psi_hat = std::polar(1.0, kTwoPi * best_a * (p.cp_len - l) / frame);
            const cplx psi_row = std::polar(1.0, kTwoPi * best_a * (p.cp_len - l + r) / frame);
            double ph = std::arg(best_v / best_mag / psi_row);
            e.phase = ph < 0.0 ? ph + kTwoPi : ph;
            res.paths.push_back(e);
            ++count;
            prev = best_mag;
            for (int k = 0; k < n; ++k)
                row[static_cast<std::size_t>(k)] -= best_v * upsilon_direct(n, best_b - k);
        }
    }
    return res;
}

DDGrid wiener_equalize_serial(const DDGrid& y, std::span<const DDPath> paths, double noise_var,
                              const EqualizerConfig& cfg, const FrameParams& p) {
    cfg.validate();
    check_dims(y, p, "wiener_equalize_serial");
    if (paths.empty())
        throw std::invalid_argument("wiener_equalize_serial: no paths");
    const int m = p.num_delay_bins;
    const int n = p.num_doppler_bins;
    const double reg = std::max(cfg.noise_var_override.value_or(noise_var), cfg.regularization_floor);
    Eigen::MatrixXcd fy = y.values();
    fft::forward_2d(fy);
    DDGrid x = DDGrid::zeros(p);
    for (int l = 0; l < m; ++l) {
        Eigen::MatrixXcd f = build_lambda(paths, l, p).values();
        fft::forward_2d(f);
        Eigen::MatrixXcd z(m, n);
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < n; ++k)
                z(i, k) = std::conj(f(i, k)) * fy(i, k) / (std::norm(f(i, k)) + reg);
        fft::inverse_2d(z);
        for (int k = 0; k < n; ++k)
            x(l, k) = z(l, k) / (static_cast<double>(m) * n);
    }
    return x;
}

} // namespace otfs::reference
