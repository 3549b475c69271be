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

#ifndef OTFS_VALIDATION_HPP
#define OTFS_VALIDATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "otfs/grid.hpp"

namespace otfs::validation {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;     // measured quantity (error, NMSE in dB, ...)
    double threshold = 0.0; // what it was compared against
    std::string detail;
};

struct FrameSize {
    int m;
    int n;
    int cp;
};

/// sfft(isfft(X)) and demodulate(modulate(X)) against X, max abs error.
CheckResult transform_identities(const std::vector<FrameSize>& sizes, double tol = 1e-12, std::uint64_t seed = 1);

/// FFT ISFFT/SFFT against the direct double sums.
CheckResult transforms_vs_direct(const std::vector<FrameSize>& sizes, double tol = 1e-10, std::uint64_t seed = 2);

/// Time-domain pipeline against the quadruple-sum delay-Doppler relation on
/// random integer-delay, fractional-Doppler channels.
CheckResult dd_relation_oracle(const std::vector<FrameSize>& sizes, int channels, double tol = 1e-9,
                               std::uint64_t seed = 3);

/// Phi * vec(X) against the pipeline, and build_phi against explicit Kronecker factors.
CheckResult phi_oracle(const std::vector<FrameSize>& sizes, double tol = 1e-9, std::uint64_t seed = 4);

/// Closed-form Doppler kernel against the direct sum at `points` random arguments.
CheckResult upsilon_closed_form(int points, double tol = 1e-9, std::uint64_t seed = 5);

/// (1/N^2) sum_k |U_N(k + kappa)|^2 = 1 for random kappa.
CheckResult upsilon_energy(int draws, double tol = 1e-10, std::uint64_t seed = 6);

/// Noiseless single path with kappa on the D-grid: exact delay/Doppler and
/// gain/phase within tol.
CheckResult estimation_single_path(int draws, double tol = 1e-6, std::uint64_t seed = 7);

/// Noiseless 9-path integer-delay channel with EVA powers and Jakes Doppler:
/// worst pilot-response NMSE (dB) over `draws` channels at D = 10.
CheckResult estimation_nine_path(int draws, double max_nmse_db = -25.0, std::uint64_t seed = 8);

/// Wiener with exact paths, no noise and tiny floor returns X.
CheckResult wiener_inverse(double tol = 1e-6, std::uint64_t seed = 9);

/// MMSE with sigma^2 = 0 inverts Phi.
CheckResult mmse_inverse(double tol = 1e-8, std::uint64_t seed = 10);

/// QAM map/demap round trip for 4/16/64 and unit mean energy.
CheckResult qam_round_trip(std::uint64_t seed = 11);

/// Two sweeps with the same config produce byte-identical CSV.
CheckResult sweep_determinism(int trials = 3, std::uint64_t seed = 12);

/// Quick subset used by `otfs validate`.
std::vector<CheckResult> run_suite();

/// "PASS name  value (threshold) detail"
std::string format(const CheckResult& r);

} // namespace otfs::validation

#endif
