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

#include "otfs/ddmath.hpp"

#include <cmath>
#include <string>

namespace otfs {

cplx upsilon(int n, double x) {
    const double nn = static_cast<double>(n);
    const double reduced = x - nn * std::round(x / nn);
    const cplx phase = std::polar(1.0, kPi * reduced * (nn - 1.0) / nn);
    const double den = std::sin(kPi * reduced / nn);
    if (std::abs(den) < 1e-9)
        return nn * phase;
    return (std::sin(kPi * reduced) / den) * phase;
}

cplx psi(double doppler, int path_delay, int rx_delay, const FrameParams& p) {
    const double frame = static_cast<double>(p.block_len()) * p.num_doppler_bins;
    return unit_phasor(doppler * static_cast<double>(p.cp_len - path_delay + rx_delay) / frame);
}

// --- EffectiveChannel --------------------------------------------------------

EffectiveChannel::EffectiveChannel(std::vector<DDPath> paths, const FrameParams& p)
    : paths_(std::move(paths)), params_(p) {
    const int m = p.num_delay_bins;
    const int n = p.num_doppler_bins;
    const double c = calibration_constant(p);
    for (const auto& path : paths_) {
        CVec row(static_cast<std::size_t>(n));
        CVec spec(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k)
            row[static_cast<std::size_t>(k)] = upsilon(n, path.doppler - k) / c;
        // DFT_k of U_N(a - k) is N e^{j2pi ((-xi) mod N) a / N}.
        for (int xi = 0; xi < n; ++xi)
            spec[static_cast<std::size_t>(xi)] =
                (static_cast<double>(n) / c) * unit_phasor(wrap_index(-xi, n) * path.doppler / n);
        CVec delay(static_cast<std::size_t>(m));
        for (int eta = 0; eta < m; ++eta)
            delay[static_cast<std::size_t>(eta)] =
                unit_phasor(-static_cast<double>(wrap_index(static_cast<long long>(eta) * path.delay, m)) / m);
        doppler_rows_.push_back(std::move(row));
        doppler_spectra_.push_back(std::move(spec));
        delay_phasors_.push_back(std::move(delay));
    }
}

DDGrid EffectiveChannel::kernel(int rx_delay) const {
    DDGrid g = DDGrid::zeros(params_);
    for (std::size_t i = 0; i < paths_.size(); ++i) {
        const auto& path = paths_[i];
        const cplx w = path.coeff * psi(path.doppler, path.delay, rx_delay, params_);
        const int d = wrap_index(path.delay, params_.num_delay_bins);
        for (int k = 0; k < params_.num_doppler_bins; ++k)
            g(d, k) += w * doppler_rows_[i][static_cast<std::size_t>(k)];
    }
    return g;
}

void EffectiveChannel::kernel_spectrum(int rx_delay, Eigen::MatrixXcd& out) const {
    const int m = params_.num_delay_bins;
    const int n = params_.num_doppler_bins;
    out.setZero(m, n);
    for (std::size_t i = 0; i < paths_.size(); ++i) {
        const auto& path = paths_[i];
        const cplx w = path.coeff * psi(path.doppler, path.delay, rx_delay, params_);
        const auto& spec = doppler_spectra_[i];
        const auto& delay = delay_phasors_[i];
        for (int xi = 0; xi < n; ++xi) {
            const cplx s = w * spec[static_cast<std::size_t>(xi)];
            cplx* col = out.col(xi).data();
            for (int eta = 0; eta < m; ++eta)
                col[eta] += s * delay[static_cast<std::size_t>(eta)];
        }
    }
}

// --- free functions ----------------------------------------------------------

DDGrid build_lambda(std::span<const DDPath> paths, int rx_delay, const FrameParams& p) {
    return EffectiveChannel(std::vector<DDPath>(paths.begin(), paths.end()), p).kernel(rx_delay);
}

DDGrid pilot_response_synthetic(std::span<const DDPath> paths, PilotPosition pilot, const FrameParams& p) {
    const int m = p.num_delay_bins;
    const int n = p.num_doppler_bins;
    if (pilot.delay < 0 || pilot.delay >= m || pilot.doppler < 0 || pilot.doppler >= n)
        throw std::invalid_argument("pilot_response_synthetic: pilot (" + std::to_string(pilot.delay) + ", " +
                                    std::to_string(pilot.doppler) + ") outside the grid");
    const double c = calibration_constant(p);
    DDGrid h = DDGrid::zeros(p);
    for (const auto& path : paths) {
        const int row = wrap_index(static_cast<long long>(pilot.delay) + path.delay, m);
        const cplx w = path.coeff * psi(path.doppler, path.delay, row, p) / c;
        for (int k = 0; k < n; ++k)
            h(row, k) += w * upsilon(n, path.doppler - (k - pilot.doppler));
    }
    return h;
}

DDGrid apply_dd_relation(const DDGrid& x, std::span<const DDPath> paths, const FrameParams& p) {
    check_dims(x, p, "apply_dd_relation");
    const int m = p.num_delay_bins;
    const int n = p.num_doppler_bins;
    const double c = calibration_constant(p);
    DDGrid y = DDGrid::zeros(p);
    for (const auto& path : paths) {
        CVec kernel(static_cast<std::size_t>(n));
        for (int q = 0; q < n; ++q)
            kernel[static_cast<std::size_t>(q)] = upsilon(n, path.doppler - q);
#pragma omp parallel for schedule(static)
        for (int l = 0; l < m; ++l) {
            const cplx w = path.coeff * psi(path.doppler, path.delay, l, p) / c;
            const int src = wrap_index(static_cast<long long>(l) - path.delay, m);
            for (int k = 0; k < n; ++k) {
                cplx acc{};
                for (int kp = 0; kp < n; ++kp)
                    acc += x(src, kp) * kernel[static_cast<std::size_t>(wrap_index(k - kp, n))];
                y(l, k) += w * acc;
            }
        }
    }
    return y;
}

Eigen::MatrixXcd build_phi(std::span<const DDPath> paths, const FrameParams& p, std::size_t max_dim) {
    const auto dim = static_cast<std::size_t>(p.grid_size());
    if (dim > max_dim)
        throw GuardError("build_phi: M*N = " + std::to_string(dim) + " exceeds the guard of " +
                         std::to_string(max_dim));
    const int m = p.num_delay_bins;
    const int n = p.num_doppler_bins;
    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s)
        blocks.push_back(build_hn(paths, p, s));

    // Block (k, k') = sum_s F[k,s] conj(F[k',s]) H_s with unitary F_N.
    Eigen::MatrixXcd phi(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
#pragma omp parallel for collapse(2) schedule(static)
    for (int k = 0; k < n; ++k) {
        for (int kp = 0; kp < n; ++kp) {
            Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(m, m);
            for (int s = 0; s < n; ++s)
                acc += unit_phasor(-static_cast<double>(wrap_index(static_cast<long long>(s) * (k - kp), n)) / n) *
                       blocks[static_cast<std::size_t>(s)];
            phi.block(static_cast<Eigen::Index>(k) * m, static_cast<Eigen::Index>(kp) * m, m, m) = acc / n;
        }
    }
    return phi;
}

Eigen::MatrixXcd build_phi(const ChannelRealization& ch, std::size_t max_dim) {
    const auto paths = dd_paths(ch);
    return build_phi(paths, ch.params, max_dim);
}

} // namespace otfs
