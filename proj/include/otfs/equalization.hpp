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

#ifndef OTFS_EQUALIZATION_HPP
#define OTFS_EQUALIZATION_HPP

#include <optional>
#include <span>

#include <Eigen/Dense>

#include "otfs/ddmath.hpp"
#include "otfs/estimation.hpp"
#include "otfs/grid.hpp"

namespace otfs {

struct EqualizerConfig {
    double regularization_floor = 1e-6;   // lower bound on the Wiener denominator term
    std::optional<double> noise_var_override;

    void validate() const;
};

/// Per-row 2D Wiener deconvolution against the estimated kernels L'_l.
/// Row l of the output is row l of
///   IDFT2( conj(F_l) DFT2(Y) / (|F_l|^2 + max(sigma^2, floor)) ),
/// with F_l the 2D DFT of L'_l. Costs O(P M^2 N); rows run in parallel.
/// Throws std::invalid_argument for an empty path set.
DDGrid wiener_equalize(const DDGrid& y, std::span<const DDPath> paths, double noise_var,
                       const EqualizerConfig& cfg, const FrameParams& p);
DDGrid wiener_equalize(const DDGrid& y, std::span<const EstimatedPath> est, double noise_var,
                       const EqualizerConfig& cfg, const FrameParams& p);

/// Full-matrix LMMSE, x = Phi^H (Phi Phi^H + sigma^2 I)^{-1} y.
/// Throws std::runtime_error when the factorization fails.
Eigen::VectorXcd mmse_equalize(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& phi, double noise_var);

/// Same estimator with Phi Phi^H computed once and reused across noise levels.
class MmseSolver {
  public:
    explicit MmseSolver(Eigen::MatrixXcd phi);
    Eigen::VectorXcd solve(const Eigen::VectorXcd& y, double noise_var) const;
    const Eigen::MatrixXcd& phi() const noexcept { return phi_; }

  private:
    Eigen::MatrixXcd phi_;
    Eigen::MatrixXcd gram_;
};

/// Unitary M-point DFT matrix.
Eigen::MatrixXcd dft_matrix(int m);

/// Per-symbol CP-OFDM LMMSE on one post-CP block: G = F H_n F^H,
/// x = G^H (G G^H + sigma^2 I)^{-1} F r_n.
Eigen::VectorXcd ofdm_mmse_symbol(const Eigen::VectorXcd& r_n, const Eigen::MatrixXcd& h_n, double noise_var);

/// Whole-frame OFDM reference: demodulates `rx` block by block with the true
/// per-symbol matrices. Returns the frequency-time symbol estimates.
FTGrid ofdm_mmse_equalize(const TimeSignal& rx, std::span<const DDPath> paths, double noise_var,
                          const FrameParams& p);

} // namespace otfs

#endif
