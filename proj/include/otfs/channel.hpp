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

#ifndef OTFS_CHANNEL_HPP
#define OTFS_CHANNEL_HPP

#include <array>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "otfs/dd_path.hpp"
#include "otfs/grid.hpp"

namespace otfs {

using Rng = std::mt19937_64;

/// One ray of the ground-truth channel: linear amplitude, delay in seconds,
/// signed Doppler in Hz and initial phase in [0, 2pi).
struct PathSpec {
    double gain = 1.0;
    double delay_s = 0.0;
    double doppler_hz = 0.0;
    double init_phase = 0.0;
};

/// Quasi-static ray channel for one frame.
struct ChannelRealization {
    std::vector<PathSpec> paths;
    FrameParams params;

    /// At least one path, finite parameters, every path inside the CP budget.
    void validate() const;
};

struct ProfileTap {
    double delay_ns = 0.0;
    double power_db = 0.0;
};

/// Power-delay profile plus the maximum Doppler used for Jakes angles.
struct DopplerScenario {
    std::string name;
    double max_doppler_hz = 0.0;
    std::vector<ProfileTap> profile;

    void validate() const;
};

double max_doppler_hz(double speed_kmh, double carrier_freq_hz);

/// Built-in Extended Vehicular A profile (9 taps).
DopplerScenario eva_scenario(double max_doppler_hz);

/// Scenario file (JSON): {"name", "taps": [{"delay_ns", "power_db"}...],
/// and either "max_doppler_hz" or "speed_kmh"}. Speed is converted with the
/// carrier of `frame`. Throws ConfigError on malformed input.
DopplerScenario load_scenario(const std::filesystem::path& path, const FrameParams& frame);
DopplerScenario parse_scenario(const std::string& json_text, const FrameParams& frame);

/// Jakes draw: theta ~ U[-pi, pi), nu = nu_max cos(theta), phi ~ U[0, 2pi).
/// Throws ConfigError naming the first tap whose delay overruns the CP.
ChannelRealization draw_channel(const DopplerScenario& scenario, const FrameParams& p, Rng& rng);

/// Deterministic variant with explicit arrival angles and initial phases,
/// one per profile tap.
ChannelRealization make_channel(const DopplerScenario& scenario, const FrameParams& p,
                                std::span<const double> arrival_angles,
                                std::span<const double> init_phases);

// --- fractional delay --------------------------------------------------

/// Cubic-Lagrange Farrow branch weights for nodes at offsets -1, 0, 1, 2,
/// evaluated at fractional position mu (Horner over the branch outputs).
std::array<double, 4> farrow_weights(double mu);

/// Delays `s` by `frac` samples in [0, 1) with the 4-tap Farrow structure.
/// Taps are centered (one sample look-ahead); samples outside the input are
/// zero. frac == 0 returns the input unchanged.
CVec farrow_delay(std::span<const cplx> s, double frac);

/// Integer taps realizing a delay of `delay_samples`.
struct DelayTap {
    int delay = 0;
    double weight = 1.0;
};

/// Integer delays get a single unit tap. Fractional delays get the four
/// Farrow taps around the target; for delays below one sample the node
/// window is shifted to start at 0 so the channel stays causal.
std::vector<DelayTap> fractional_delay_taps(double delay_samples);

/// Largest integer delay touched by a path with this delay.
int delay_reach(double delay_samples);

/// Exact integer-delay representation of the realization: every Farrow tap
/// becomes one DDPath sharing the ray's Doppler.
std::vector<DDPath> dd_paths(const ChannelRealization& ch);

// --- application ---------------------------------------------------------

/// Time-domain channel. Each integer tap d contributes
/// coeff * w^{t-d} * s[t-d], w = e^{j2pi a / ((M+Ncp)N)}, with the
/// post-CP part of every block taken cyclically within the block and t the
/// global frame index.
TimeSignal apply_channel(const TimeSignal& s, const ChannelRealization& ch);
TimeSignal apply_channel(const TimeSignal& s, std::span<const DDPath> paths, const FrameParams& p);

/// Channel matrix of OFDM symbol n (0-based) acting on the post-CP block.
Eigen::MatrixXcd build_hn(const ChannelRealization& ch, int n);
Eigen::MatrixXcd build_hn(std::span<const DDPath> paths, const FrameParams& p, int n);

/// Adds circular complex Gaussian noise of variance noise_var per sample.
TimeSignal add_noise(const TimeSignal& s, double noise_var, Rng& rng);

/// sigma^2 = 10^(-snr/10) for unit symbol energy.
double noise_var_from_snr_db(double snr_db);

} // namespace otfs

#endif
