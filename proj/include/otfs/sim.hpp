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

#ifndef OTFS_SIM_HPP
#define OTFS_SIM_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "otfs/channel.hpp"
#include "otfs/ddmath.hpp"
#include "otfs/equalization.hpp"
#include "otfs/estimation.hpp"
#include "otfs/grid.hpp"

namespace otfs {

enum class EstimatorKind { ideal, proposed, pn };
enum class EqualizerKind { wiener, mmse, ofdm_mmse };

std::string to_string(EstimatorKind k);
std::string to_string(EqualizerKind k);
EstimatorKind parse_estimator(const std::string& s); // ConfigError on unknown names
EqualizerKind parse_equalizer(const std::string& s);

struct Combo {
    EstimatorKind estimator = EstimatorKind::proposed;
    EqualizerKind equalizer = EqualizerKind::wiener;
    friend bool operator==(const Combo&, const Combo&) = default;
};

struct SimConfig {
    FrameParams frame;
    DopplerScenario scenario;
    int modulation_order = 16;
    std::vector<double> snr_db;
    int trials = 100;
    std::vector<EstimatorKind> estimators{EstimatorKind::proposed};
    std::vector<EqualizerKind> equalizers{EqualizerKind::wiener};
    EstimatorConfig estimator;
    PnConfig pn;
    EqualizerConfig equalizer;
    /// Pilot impulse amplitude. Unset means sqrt(M*N), which gives the pilot
    /// frame the same energy as a data frame.
    std::optional<double> pilot_amplitude;
    std::uint64_t seed = 1;
    std::filesystem::path output;
    std::size_t phi_guard = kDefaultPhiGuard;

    /// Throws ConfigError (GuardError when a matrix equalizer exceeds the
    /// size guard).
    void validate() const;

    /// Estimator x equalizer pairs in config order. Any estimator paired with
    /// ofdm-mmse collapses to (ideal, ofdm-mmse), which runs on true CSI.
    std::vector<Combo> combos() const;

    double effective_pilot_amplitude() const;
    EstimatorConfig effective_estimator() const; // delay span defaults to Ncp + 1
};

/// Outcome of one trial for one (SNR, combo) cell.
struct CellCounts {
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t frames = 0;
    std::uint64_t frame_errors = 0;
    double nmse_sum = 0.0;       // linear NMSE, summed
    std::uint64_t nmse_count = 0;
    double paths_sum = 0.0;

    CellCounts& operator+=(const CellCounts& o);
};

/// cells[snr_index * combos + combo_index]
struct TrialResult {
    std::vector<CellCounts> cells;
};

struct SweepRow {
    double snr_db = 0.0;
    Combo combo;
    CellCounts counts;
    double ber() const;
    double fer() const;
    double mean_nmse_db() const; // 10 log10 of the mean linear NMSE; NaN if none
    double mean_paths() const;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double wall_seconds = 0.0;
};

/// Per-trial RNG seed: splitmix64 finalizer chained over (seed, trial,
/// stream). Streams: 0 channel, 1 data bits, 2 data noise, 3 pilot/PN noise,
/// 4 PN sequence.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t stream);

/// One channel realization evaluated at every SNR point and combo. Errors
/// are rethrown with the trial index in the message.
TrialResult run_trial(const SimConfig& cfg, std::uint64_t trial);

/// All trials (OpenMP-parallel), reduced in trial order.
SweepResult run_sweep(const SimConfig& cfg);

inline constexpr const char* kRunCsvHeader =
    "snr_db,estimator,equalizer,trials,bits,bit_errors,ber,frames,frame_errors,fer,mean_nmse_db,mean_paths,seed";

void write_csv(const SweepResult& r, const SimConfig& cfg, std::ostream& os);
/// Throws std::runtime_error if the file cannot be written.
void write_csv(const SweepResult& r, const SimConfig& cfg, const std::filesystem::path& path);

/// NMSE of `est` against `ref`, ||est - ref||^2 / ||ref||^2.
double nmse(const DDGrid& est, const DDGrid& ref);

} // namespace otfs

#endif
