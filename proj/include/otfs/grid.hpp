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

#ifndef OTFS_GRID_HPP
#define OTFS_GRID_HPP

#include <cstddef>
#include <span>
#include <utility>

#include <Eigen/Dense>

#include "otfs/common.hpp"

namespace otfs {

/// Static frame numerology shared by every transform in the pipeline.
///
/// M delay bins (= subcarriers), N Doppler bins (= OFDM symbols), a cyclic
/// prefix of cp_len samples per symbol and a sample rate of M * subcarrier
/// spacing. Defaults are the 0.8 GHz, 15 kHz, 256 x 14 numerology.
struct FrameParams {
    int num_delay_bins = 256;
    int num_doppler_bins = 14;
    double subcarrier_spacing_hz = 15e3;
    int cp_len = 17;
    double carrier_freq_hz = 0.8e9;

    /// Throws std::invalid_argument unless M >= 2, N >= 2, 0 <= cp_len < M,
    /// subcarrier spacing > 0 and carrier > 0.
    void validate() const;

    int block_len() const noexcept { return num_delay_bins + cp_len; }
    int grid_size() const noexcept { return num_delay_bins * num_doppler_bins; }
    double sample_rate_hz() const noexcept { return num_delay_bins * subcarrier_spacing_hz; }
    std::size_t samples_per_frame() const noexcept {
        return static_cast<std::size_t>(block_len()) * static_cast<std::size_t>(num_doppler_bins);
    }
    /// Width of one Doppler bin, M*df / ((M + cp_len) * N).
    double doppler_bin_hz() const noexcept {
        return sample_rate_hz() / (static_cast<double>(block_len()) * num_doppler_bins);
    }
};

/// Complex M x N matrix tagged with the domain it lives in. Storage is
/// column-major; row index is delay (or frequency), column index is
/// Doppler (or time).
template <class Domain>
class Grid {
  public:
    Grid() = default;
    Grid(int rows, int cols) : values_(Eigen::MatrixXcd::Zero(rows, cols)) {}
    explicit Grid(Eigen::MatrixXcd values) : values_(std::move(values)) {}

    static Grid zeros(const FrameParams& p) { return Grid(p.num_delay_bins, p.num_doppler_bins); }

    int rows() const noexcept { return static_cast<int>(values_.rows()); }
    int cols() const noexcept { return static_cast<int>(values_.cols()); }

    cplx& operator()(int r, int c) { return values_(r, c); }
    const cplx& operator()(int r, int c) const { return values_(r, c); }

    Eigen::MatrixXcd& values() noexcept { return values_; }
    const Eigen::MatrixXcd& values() const noexcept { return values_; }

    bool matches(const FrameParams& p) const noexcept {
        return rows() == p.num_delay_bins && cols() == p.num_doppler_bins;
    }

  private:
    Eigen::MatrixXcd values_;
};

struct DelayDopplerDomain {};
struct FreqTimeDomain {};

using DDGrid = Grid<DelayDopplerDomain>;
using FTGrid = Grid<FreqTimeDomain>;

/// Serial time-domain samples at sample_rate_hz.
struct TimeSignal {
    CVec samples;
    double sample_rate_hz = 0.0;
};

/// The constant c between the unitary pipeline and the literal closed-form
/// delay-Doppler relation: measured = literal / c. Equal to N.
double calibration_constant(const FrameParams& p);

// ISFFT: X_ft[m,n] = 1/sqrt(MN) sum_k sum_l X_dd[l,k] e^{-j2pi(ml/M - nk/N)}.
FTGrid isfft(const DDGrid& x_dd, const FrameParams& p);
// SFFT, exact inverse of isfft.
DDGrid sfft(const FTGrid& y_ft, const FrameParams& p);

/// OTFS transmitter: S = X_dd F_N^H, CP (tail copy) prepended to each of the
/// N columns, blocks serialized in time order.
TimeSignal modulate(const DDGrid& x_dd, const FrameParams& p);
/// Plain CP-OFDM transmitter for a frequency-time grid: S = F_M^H X_ft.
TimeSignal modulate_ft(const FTGrid& x_ft, const FrameParams& p);

/// CP removal and per-block M-point DFT, giving Y_ft.
FTGrid demodulate_ft(const TimeSignal& r, const FrameParams& p);
/// demodulate_ft followed by the SFFT. demodulate(modulate(X)) == X.
DDGrid demodulate(const TimeSignal& r, const FrameParams& p);

/// Column-major (delay-fastest) stacking.
CVec vectorize(const DDGrid& g);
DDGrid devectorize(std::span<const cplx> v, const FrameParams& p);

// Throws std::invalid_argument when the grid does not match p.
void check_dims(const DDGrid& g, const FrameParams& p, const char* what);
void check_dims(const FTGrid& g, const FrameParams& p, const char* what);

} // namespace otfs

#endif
