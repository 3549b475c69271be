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

#ifndef OTFS_DDMATH_HPP
#define OTFS_DDMATH_HPP

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "otfs/channel.hpp"
#include "otfs/dd_path.hpp"
#include "otfs/grid.hpp"

namespace otfs {

inline constexpr std::size_t kDefaultPhiGuard = 4096;

/// Position of the unit pilot impulse on the delay-Doppler grid.
struct PilotPosition {
    int delay = 0;
    int doppler = 0;
};

/// Dirichlet-like Doppler kernel
///   U_N(x) = sum_{n=0}^{N-1} e^{j2pi n x / N}
///          = sin(pi x) / sin(pi x / N) * e^{j pi x (N-1) / N}.
/// Evaluated on x reduced modulo N so the only removable singularity is at
/// the reduced origin, where the value is N * e^{j pi x (N-1)/N}.
cplx upsilon(int n, double x);

/// Intra-frame Doppler phase of a path with Doppler `doppler` (bins) and
/// delay `path_delay` as seen on receive delay row `rx_delay`:
///   e^{j2pi doppler (Ncp - path_delay + rx_delay) / ((M+Ncp)N)}.
cplx psi(double doppler, int path_delay, int rx_delay, const FrameParams& p);

/// Effective delay-Doppler kernels of a path set.
///
/// For receive row l the kernel is
///   L'_l[d, k] = sum_p coeff_p psi_p(l) delta(d - d_p) U_N(a_p - k) / c,
/// with c the calibration constant, so that row l of the received grid is
/// row l of the 2D circular convolution of X with L'_l. Rows of different l
/// differ only by per-path unit phases; the Doppler profiles and their
/// spectra are built once and reused.
class EffectiveChannel {
  public:
    EffectiveChannel(std::vector<DDPath> paths, const FrameParams& p);

    const FrameParams& params() const noexcept { return params_; }
    const std::vector<DDPath>& paths() const noexcept { return paths_; }

    /// L'_l as an M x N grid.
    DDGrid kernel(int rx_delay) const;

    /// Unnormalized 2D DFT of L'_l, written into `out` (resized to M x N).
    /// Costs O(P M N).
    void kernel_spectrum(int rx_delay, Eigen::MatrixXcd& out) const;

  private:
    std::vector<DDPath> paths_;
    FrameParams params_;
    std::vector<CVec> doppler_rows_;    // U_N(a_p - k) / c, k = 0..N-1
    std::vector<CVec> doppler_spectra_; // N-point DFT of doppler_rows_
    std::vector<CVec> delay_phasors_;   // e^{-j2pi eta d_p / M}, eta = 0..M-1
};

/// L'_l for a path set (see EffectiveChannel). An empty path set gives the
/// zero grid.
DDGrid build_lambda(std::span<const DDPath> paths, int rx_delay, const FrameParams& p);

/// Noiseless response to the unit pilot at `pilot`, on the calibrated
/// (measured) scale:
///   H[(i + d_p)_M, k] += coeff_p psi_p((i + d_p)_M) U_N(a_p - (k - j)) / c.
DDGrid pilot_response_synthetic(std::span<const DDPath> paths, PilotPosition pilot, const FrameParams& p);

/// Exact delay-Doppler input-output relation (per-row psi):
///   Y[l,k] = sum_{l',k'} X[l',k'] L_l[(l-l')_M, (k-k')_N] / c.
DDGrid apply_dd_relation(const DDGrid& x, std::span<const DDPath> paths, const FrameParams& p);

/// Phi = (F_N kron I_M) blkdiag(H_1..H_N) (F_N^H kron I_M), so that
/// vec(Y) = Phi vec(X). Throws GuardError when M*N exceeds max_dim.
Eigen::MatrixXcd build_phi(std::span<const DDPath> paths, const FrameParams& p,
                           std::size_t max_dim = kDefaultPhiGuard);
Eigen::MatrixXcd build_phi(const ChannelRealization& ch, std::size_t max_dim = kDefaultPhiGuard);

} // namespace otfs

#endif
