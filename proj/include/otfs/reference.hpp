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

#ifndef OTFS_REFERENCE_HPP
#define OTFS_REFERENCE_HPP

// Straightforward serial versions of the kernels. They share no code with the
// fast paths beyond the frame/path types and exist for cross-checking and for
// the parallel-vs-serial benchmark.

#include <span>

#include <Eigen/Dense>

#include "otfs/ddmath.hpp"
#include "otfs/equalization.hpp"
#include "otfs/estimation.hpp"
#include "otfs/grid.hpp"

namespace otfs::reference {

/// sum_{n=0}^{N-1} e^{j2pi n x / N}
cplx upsilon_direct(int n, double x);

/// Double-sum ISFFT / SFFT, O(M^2 N^2).
FTGrid isfft_direct(const DDGrid& x, const FrameParams& p);
DDGrid sfft_direct(const FTGrid& y, const FrameParams& p);

/// Quadruple-sum delay-Doppler relation on the calibrated scale.
DDGrid dd_relation_direct(const DDGrid& x, std::span<const DDPath> paths, const FrameParams& p);

/// Phi from explicit Kronecker factors and a block-diagonal matrix.
Eigen::MatrixXcd phi_direct(std::span<const DDPath> paths, const FrameParams& p);

/// Direct O(N^2) correlation, same definition as xcorr_doppler.
CVec xcorr_direct(std::span<const cplx> row, double kappa);

/// Serial estimator using xcorr_direct and explicit kernel subtraction.
EstimationResult estimate_paths_serial(const DDGrid& response, PilotPosition pilot, const EstimatorConfig& cfg,
                                       double noise_var, const FrameParams& p);

/// Serial Wiener equalizer with a full 2D FFT round trip per output row.
DDGrid wiener_equalize_serial(const DDGrid& y, std::span<const DDPath> paths, double noise_var,
                              const EqualizerConfig& cfg, const FrameParams& p);

} // namespace otfs::reference

#endif
