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

#include "otfs/equalization.hpp"

#include <algorithm>
#include <stdexcept>

#include "otfs/fft.hpp"

namespace otfs {

void EqualizerConfig::validate() const {
    if (!(regularization_floor >= 0.0))
        throw ConfigError("equalizer: regularization_floor must be >= 0");
    if (noise_var_override && !(*noise_var_override >= 0.0))
        throw ConfigError("equalizer: noise_var_override must be >= 0");
}

DDGrid wiener_equalize(const DDGrid& y, std::span<const DDPath> paths, double noise_var,
                       const EqualizerConfig& cfg, const FrameParams& p) {
    cfg.validate();
    check_dims(y, p, "wiener_equalize");
    if (paths.empty())
        throw std::invalid_argument("wiener_equalize: no paths, channel is unidentifiable");
    const double sigma2 = cfg.noise_var_override.value_or(noise_var);
    if (!(sigma2 >= 0.0))
        throw std::invalid_argument("wiener_equalize: noise variance must be >= 0");
    const double reg = std::max(sigma2, cfg.regularization_floor);

    const int m = p.num_delay_bins;
    const int n = p.num_doppler_bins;
    const EffectiveChannel eff(std::vector<DDPath>(paths.begin(), paths.end()), p);

    Eigen::MatrixXcd fy = y.values();
    fft::forward_2d(fy);

    CVec twiddle(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        twiddle[static_cast<std::size_t>(i)] = unit_phasor(static_cast<double>(i) / m);

    DDGrid x = DDGrid::zeros(p);
    const double scale = 1.0 / (static_cast<double>(m) * n);
#pragma omp parallel
    {
        Eigen::MatrixXcd f(m, n);
        CVec v(static_cast<std::size_t>(n));
#pragma omp for schedule(static)
        for (int l = 0; l < m; ++l) {
            eff.kernel_spectrum(l, f);
            // Only row l of the inverse 2D DFT is needed: fold the delay axis
            // with e^{+j2pi eta l / M}, then an N-point inverse DFT.
            std::fill(v.begin(), v.end(), cplx{});
            for (int xi = 0; xi < n; ++xi) {
                cplx acc{};
                for (int eta = 0; eta < m; ++eta) {
                    const cplx fv = f(eta, xi);
                    const cplx z = std::conj(fv) * fy(eta, xi) / (std::norm(fv) + reg);
                    acc += z * twiddle[static_cast<std::size_t>(wrap_index(static_cast<long long>(eta) * l, m))];
                }
                v[static_cast<std::size_t>(xi)] = acc;
            }
            fft::inverse(v);
            for (int k = 0; k < n; ++k)
                x(l, k) = v[static_cast<std::size_t>(k)] * scale;
        }
    }
    return x;
}

DDGrid wiener_equalize(const DDGrid& y, std::span<const EstimatedPath> est, double noise_var,
                       const EqualizerConfig& cfg, const FrameParams& p) {
    const auto paths = to_dd_paths(est);
    return wiener_equalize(y, paths, noise_var, cfg, p);
}

Eigen::VectorXcd mmse_equalize(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& phi, double noise_var) {
    return MmseSolver(phi).solve(y, noise_var);
}

MmseSolver::MmseSolver(Eigen::MatrixXcd phi) : phi_(std::move(phi)) {
    if (phi_.rows() != phi_.cols())
        throw std::invalid_argument("MmseSolver: Phi must be square");
    gram_ = phi_ * phi_.adjoint();
}

Eigen::VectorXcd MmseSolver::solve(const Eigen::VectorXcd& y, double noise_var) const {
    if (y.size() != phi_.rows())
        throw std::invalid_argument("MmseSolver: size mismatch");
    if (!(noise_var >= 0.0))
        throw std::invalid_argument("MmseSolver: noise variance must be >= 0");
    Eigen::MatrixXcd a = gram_;
    a.diagonal().array() += noise_var;
    Eigen::LLT<Eigen::MatrixXcd> llt(a);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("MmseSolver: Cholesky factorization failed");
    return phi_.adjoint() * llt.solve(y);
}

Eigen::MatrixXcd dft_matrix(int m) {
    Eigen::MatrixXcd f(m, m);
    const double s = 1.0 / std::sqrt(static_cast<double>(m));
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
            f(r, c) = s * unit_phasor(-static_cast<double>(wrap_index(static_cast<long long>(r) * c, m)) / m);
    return f;
}

namespace {

Eigen::VectorXcd ofdm_symbol_with(const Eigen::MatrixXcd& f, const Eigen::VectorXcd& r_n,
                                  const Eigen::MatrixXcd& h_n, double noise_var) {
    const Eigen::MatrixXcd g = f * h_n * f.adjoint();
    Eigen::MatrixXcd a = g * g.adjoint();
    a.diagonal().array() += noise_var;
    Eigen::LLT<Eigen::MatrixXcd> llt(a);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("ofdm_mmse_symbol: Cholesky factorization failed");
    return g.adjoint() * llt.solve(f * r_n);
}

} // namespace

Eigen::VectorXcd ofdm_mmse_symbol(const Eigen::VectorXcd& r_n, const Eigen::MatrixXcd& h_n, double noise_var) {
    const auto m = h_n.rows();
    if (h_n.cols() != m || r_n.size() != m)
        throw std::invalid_argument("ofdm_mmse_symbol: size mismatch");
    if (!(noise_var >= 0.0))
        throw std::invalid_argument("ofdm_mmse_symbol: noise variance must be >= 0");
    return ofdm_symbol_with(dft_matrix(static_cast<int>(m)), r_n, h_n, noise_var);
}

FTGrid ofdm_mmse_equalize(const TimeSignal& rx, std::span<const DDPath> paths, double noise_var,
                          const FrameParams& p) {
    if (rx.samples.size() != p.samples_per_frame())
        throw std::invalid_argument("ofdm_mmse_equalize: signal is not frame aligned");
    const int m = p.num_delay_bins;
    if (!(noise_var >= 0.0))
        throw std::invalid_argument("ofdm_mmse_equalize: noise variance must be >= 0");
    const Eigen::MatrixXcd f = dft_matrix(m);
    FTGrid out = FTGrid::zeros(p);
    for (int s = 0; s < p.num_doppler_bins; ++s) {
        Eigen::VectorXcd r(m);
        const std::size_t start = static_cast<std::size_t>(s) * p.block_len() + p.cp_len;
        for (int i = 0; i < m; ++i)
            r(i) = rx.samples[start + static_cast<std::size_t>(i)];
        out.values().col(s) = ofdm_symbol_with(f, r, build_hn(paths, p, s), noise_var);
    }
    return out;
}

} // namespace otfs
