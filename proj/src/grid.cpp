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

#include "otfs/grid.hpp"

#include <cmath>
#include <string>

#include "otfs/fft.hpp"

namespace otfs {

void FrameParams::validate() const {
    if (num_delay_bins < 2)
        throw std::invalid_argument("FrameParams: num_delay_bins must be >= 2");
    if (num_doppler_bins < 2)
        throw std::invalid_argument("FrameParams: num_doppler_bins must be >= 2");
    if (cp_len < 0 || cp_len >= num_delay_bins)
        throw std::invalid_argument("FrameParams: cp_len must satisfy 0 <= cp_len < num_delay_bins");
    if (!(subcarrier_spacing_hz > 0.0) || !std::isfinite(subcarrier_spacing_hz))
        throw std::invalid_argument("FrameParams: subcarrier_spacing_hz must be positive");
    if (!(carrier_freq_hz > 0.0) || !std::isfinite(carrier_freq_hz))
        throw std::invalid_argument("FrameParams: carrier_freq_hz must be positive");
}

double calibration_constant(const FrameParams& p) { return static_cast<double>(p.num_doppler_bins); }

namespace {

template <class G>
void check_grid(const G& g, const FrameParams& p, const char* what) {
    if (!g.matches(p))
        throw std::invalid_argument(std::string(what) + ": grid is " + std::to_string(g.rows()) + "x" +
                                    std::to_string(g.cols()) + ", expected " +
                                    std::to_string(p.num_delay_bins) + "x" +
                                    std::to_string(p.num_doppler_bins));
}

// Serialize the M x N block matrix with a CP in front of every column.
TimeSignal add_cp(const Eigen::MatrixXcd& blocks, const FrameParams& p) {
    const int m = p.num_delay_bins;
    const int cp = p.cp_len;
    TimeSignal out;
    out.sample_rate_hz = p.sample_rate_hz();
    out.samples.resize(p.samples_per_frame());
    auto* dst = out.samples.data();
    for (int n = 0; n < p.num_doppler_bins; ++n) {
        for (int i = 0; i < cp; ++i)
            *dst++ = blocks(m - cp + i, n);
        for (int i = 0; i < m; ++i)
            *dst++ = blocks(i, n);
    }
    return out;
}

} // namespace

void check_dims(const DDGrid& g, const FrameParams& p, const char* what) { check_grid(g, p, what); }
void check_dims(const FTGrid& g, const FrameParams& p, const char* what) { check_grid(g, p, what); }

FTGrid isfft(const DDGrid& x_dd, const FrameParams& p) {
    check_grid(x_dd, p, "isfft");
    Eigen::MatrixXcd v = x_dd.values();
    fft::forward_columns(v, 1.0 / std::sqrt(static_cast<double>(p.num_delay_bins)));
    fft::inverse_rows(v, 1.0 / std::sqrt(static_cast<double>(p.num_doppler_bins)));
    return FTGrid(std::move(v));
}

DDGrid sfft(const FTGrid& y_ft, const FrameParams& p) {
    check_grid(y_ft, p, "sfft");
    Eigen::MatrixXcd v = y_ft.values();
    fft::inverse_columns(v, 1.0 / std::sqrt(static_cast<double>(p.num_delay_bins)));
    fft::forward_rows(v, 1.0 / std::sqrt(static_cast<double>(p.num_doppler_bins)));
    return DDGrid(std::move(v));
}

TimeSignal modulate(const DDGrid& x_dd, const FrameParams& p) {
    check_grid(x_dd, p, "modulate");
    Eigen::MatrixXcd s = x_dd.values();
    fft::inverse_rows(s, 1.0 / std::sqrt(static_cast<double>(p.num_doppler_bins)));
    return add_cp(s, p);
}

TimeSignal modulate_ft(const FTGrid& x_ft, const FrameParams& p) {
    check_grid(x_ft, p, "modulate_ft");
    Eigen::MatrixXcd s = x_ft.values();
    fft::inverse_columns(s, 1.0 / std::sqrt(static_cast<double>(p.num_delay_bins)));
    return add_cp(s, p);
}

FTGrid demodulate_ft(const TimeSignal& r, const FrameParams& p) {
    if (r.samples.size() != p.samples_per_frame())
        throw std::invalid_argument("demodulate: signal has " + std::to_string(r.samples.size()) +
                                    " samples, frame needs " + std::to_string(p.samples_per_frame()));
    const int m = p.num_delay_bins;
    Eigen::MatrixXcd y(m, p.num_doppler_bins);
    for (int n = 0; n < p.num_doppler_bins; ++n) {
        const std::size_t start = static_cast<std::size_t>(n) * p.block_len() + p.cp_len;
        for (int i = 0; i < m; ++i)
            y(i, n) = r.samples[start + static_cast<std::size_t>(i)];
    }
    fft::forward_columns(y, 1.0 / std::sqrt(static_cast<double>(m)));
    return FTGrid(std::move(y));
}

DDGrid demodulate(const TimeSignal& r, const FrameParams& p) { return sfft(demodulate_ft(r, p), p); }

CVec vectorize(const DDGrid& g) {
    const auto& v = g.values();
    return CVec(v.data(), v.data() + v.size());
}

DDGrid devectorize(std::span<const cplx> v, const FrameParams& p) {
    if (v.size() != static_cast<std::size_t>(p.grid_size()))
        throw std::invalid_argument("devectorize: length " + std::to_string(v.size()) + " != M*N = " +
                                    std::to_string(p.grid_size()));
    DDGrid g = DDGrid::zeros(p);
    std::copy(v.begin(), v.end(), g.values().data());
    return g;
}

} // namespace otfs
