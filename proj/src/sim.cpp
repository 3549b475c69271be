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

#include "otfs/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>

#include "otfs/qam.hpp"

namespace otfs {

// --- names -------------------------------------------------------------------

std::string to_string(EstimatorKind k) {
    switch (k) {
    case EstimatorKind::ideal:
        return "ideal";
    case EstimatorKind::proposed:
        return "proposed";
    case EstimatorKind::pn:
        return "pn";
    }
    return "?";
}

std::string to_string(EqualizerKind k) {
    switch (k) {
    case EqualizerKind::wiener:
        return "wiener";
    case EqualizerKind::mmse:
        return "mmse";
    case EqualizerKind::ofdm_mmse:
        return "ofdm-mmse";
    }
    return "?";
}

EstimatorKind parse_estimator(const std::string& s) {
    if (s == "ideal")
        return EstimatorKind::ideal;
    if (s == "proposed")
        return EstimatorKind::proposed;
    if (s == "pn")
        return EstimatorKind::pn;
    throw ConfigError("unknown estimator '" + s + "' (expected ideal, proposed or pn)");
}

EqualizerKind parse_equalizer(const std::string& s) {
    if (s == "wiener")
        return EqualizerKind::wiener;
    if (s == "mmse")
        return EqualizerKind::mmse;
    if (s == "ofdm-mmse" || s == "ofdm_mmse")
        return EqualizerKind::ofdm_mmse;
    throw ConfigError("unknown equalizer '" + s + "' (expected wiener, mmse or ofdm-mmse)");
}

// --- config ------------------------------------------------------------------

void SimConfig::validate() const {
    try {
        frame.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("frame: ") + e.what());
    }
    scenario.validate();
    if (modulation_order != 4 && modulation_order != 16 && modulation_order != 64)
        throw ConfigError("modulation_order must be 4, 16 or 64");
    if (snr_db.empty())
        throw ConfigError("snr grid is empty");
    for (double s : snr_db)
        if (!std::isfinite(s))
            throw ConfigError("snr grid contains a non-finite value");
    if (trials < 1)
        throw ConfigError("trials must be >= 1");
    if (estimators.empty() || equalizers.empty())
        throw ConfigError("at least one estimator and one equalizer are required");
    estimator.validate();
    pn.validate();
    equalizer.validate();
    if (pilot_amplitude && !(*pilot_amplitude > 0.0 && std::isfinite(*pilot_amplitude)))
        throw ConfigError("pilot_amplitude must be > 0");

    const double fs = frame.sample_rate_hz();
    for (std::size_t i = 0; i < scenario.profile.size(); ++i) {
        const int reach = delay_reach(scenario.profile[i].delay_ns * 1e-9 * fs);
        if (reach > frame.cp_len)
            throw ConfigError("scenario tap " + std::to_string(i) + " (" +
                              std::to_string(scenario.profile[i].delay_ns) + " ns) reaches sample " +
                              std::to_string(reach) + ", beyond cp_len " + std::to_string(frame.cp_len));
    }
    for (auto eq : equalizers) {
        if (eq == EqualizerKind::mmse && static_cast<std::size_t>(frame.grid_size()) > phi_guard)
            throw GuardError("mmse equalizer needs M*N <= " + std::to_string(phi_guard) + ", got " +
                             std::to_string(frame.grid_size()));
        if (eq == EqualizerKind::ofdm_mmse && static_cast<std::size_t>(frame.num_delay_bins) > phi_guard)
            throw GuardError("ofdm-mmse equalizer needs M <= " + std::to_string(phi_guard));
    }
}

std::vector<Combo> SimConfig::combos() const {
    std::vector<Combo> out;
    for (auto est : estimators)
        for (auto eq : equalizers) {
            const Combo c{eq == EqualizerKind::ofdm_mmse ? EstimatorKind::ideal : est, eq};
            if (std::find(out.begin(), out.end(), c) == out.end())
                out.push_back(c);
        }
    return out;
}

double SimConfig::effective_pilot_amplitude() const {
    return pilot_amplitude.value_or(std::sqrt(static_cast<double>(frame.grid_size())));
}

EstimatorConfig SimConfig::effective_estimator() const {
    EstimatorConfig e = estimator;
    if (!e.delay_search_span)
        e.delay_search_span = frame.cp_len + 1;
    return e;
}

// --- counts ------------------------------------------------------------------

CellCounts& CellCounts::operator+=(const CellCounts& o) {
    bits += o.bits;
    bit_errors += o.bit_errors;
    frames += o.frames;
    frame_errors += o.frame_errors;
    nmse_sum += o.nmse_sum;
    nmse_count += o.nmse_count;
    paths_sum += o.paths_sum;
    return *this;
}

double SweepRow::ber() const {
    return counts.bits ? static_cast<double>(counts.bit_errors) / static_cast<double>(counts.bits) : 0.0;
}

double SweepRow::fer() const {
    return counts.frames ? static_cast<double>(counts.frame_errors) / static_cast<double>(counts.frames) : 0.0;
}

double SweepRow::mean_nmse_db() const {
    if (counts.nmse_count == 0)
        return std::numeric_limits<double>::quiet_NaN();
    return 10.0 * std::log10(counts.nmse_sum / static_cast<double>(counts.nmse_count));
}

double SweepRow::mean_paths() const {
    return counts.frames ? counts.paths_sum / static_cast<double>(counts.frames) : 0.0;
}

double nmse(const DDGrid& est, const DDGrid& ref) {
    const double den = ref.values().squaredNorm();
    if (!(den > 0.0))
        throw std::invalid_argument("nmse: reference has zero energy");
    return (est.values() - ref.values()).squaredNorm() / den;
}

// --- rng ---------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t stream) {
    return splitmix64(splitmix64(splitmix64(master) ^ trial) ^ stream);
}

// --- trial -------------------------------------------------------------------

namespace {

TimeSignal with_noise(const TimeSignal& clean, const CVec& unit_noise, double sigma) {
    TimeSignal out = clean;
    for (std::size_t i = 0; i < out.samples.size(); ++i)
        out.samples[i] += sigma * unit_noise[i];
    return out;
}

CVec unit_noise(std::size_t len, double rate, std::uint64_t seed) {
    Rng rng(seed);
    return add_noise(TimeSignal{CVec(len), rate}, 1.0, rng).samples;
}

std::uint64_t count_errors(const Bits& a, const Bits& b) {
    std::uint64_t e = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        e += a[i] != b[i];
    return e;
}

struct Estimate {
    std::vector<DDPath> paths;
    std::optional<double> nmse;
};

TrialResult run_trial_impl(const SimConfig& cfg, std::uint64_t trial) {
    const FrameParams& p = cfg.frame;
    const auto combos = cfg.combos();
    const std::size_t nc = combos.size();
    const std::size_t len = p.samples_per_frame();
    const double fs = p.sample_rate_hz();

    bool need_proposed = false, need_pn = false, need_ofdm = false;
    for (const auto& c : combos) {
        need_ofdm |= c.equalizer == EqualizerKind::ofdm_mmse;
        if (c.equalizer != EqualizerKind::ofdm_mmse) {
            need_pn |= c.estimator == EstimatorKind::pn;
            // PN is capped at the proposed path count, so it needs both.
            need_proposed |= c.estimator == EstimatorKind::proposed || c.estimator == EstimatorKind::pn;
        }
    }

    Rng chan_rng(stream_seed(cfg.seed, trial, 0));
    const ChannelRealization ch = draw_channel(cfg.scenario, p, chan_rng);
    const std::vector<DDPath> truth = dd_paths(ch);

    const QamConstellation qam(cfg.modulation_order);
    Bits bits(static_cast<std::size_t>(p.grid_size()) * static_cast<std::size_t>(qam.bits_per_symbol()));
    {
        Rng bit_rng(stream_seed(cfg.seed, trial, 1));
        std::uniform_int_distribution<int> coin(0, 1);
        for (auto& b : bits)
            b = static_cast<std::uint8_t>(coin(bit_rng));
    }
    const CVec w_data = unit_noise(len, fs, stream_seed(cfg.seed, trial, 2));
    const CVec w_pilot = unit_noise(len, fs, stream_seed(cfg.seed, trial, 3));

    const TimeSignal rx_data = apply_channel(modulate(qam_map(bits, cfg.modulation_order, p), p), truth, p);
    TimeSignal rx_ofdm, rx_pilot, rx_pn, pn;
    if (need_ofdm)
        rx_ofdm = apply_channel(modulate_ft(qam_map_ft(bits, cfg.modulation_order, p), p), truth, p);
    const double amp = cfg.effective_pilot_amplitude();
    if (need_proposed) {
        DDGrid pilot = DDGrid::zeros(p);
        pilot(0, 0) = amp;
        rx_pilot = apply_channel(modulate(pilot, p), truth, p);
    }
    if (need_pn) {
        Rng pn_rng(stream_seed(cfg.seed, trial, 4));
        pn = make_pn_frame(p, pn_rng);
        rx_pn = apply_channel(pn, truth, p);
    }
    const DDGrid reference = pilot_response_synthetic(truth, {0, 0}, p);
    const EstimatorConfig est_cfg = cfg.effective_estimator();

    std::optional<MmseSolver> ideal_solver;
    TrialResult out;
    out.cells.resize(cfg.snr_db.size() * nc);

    for (std::size_t s = 0; s < cfg.snr_db.size(); ++s) {
        const double sigma2 = noise_var_from_snr_db(cfg.snr_db[s]);
        const double sigma = std::sqrt(sigma2);
        const DDGrid y = demodulate(with_noise(rx_data, w_data, sigma), p);

        std::map<EstimatorKind, Estimate> est;
        est[EstimatorKind::ideal] = Estimate{truth, std::nullopt};
        if (need_proposed) {
            DDGrid resp = demodulate(with_noise(rx_pilot, w_pilot, sigma), p);
            resp.values() /= amp;
            // beta * sigma threshold on the per-sample noise, not the pilot-scaled one
            const auto r = estimate_paths(resp, {0, 0}, est_cfg, sigma2, p);
            Estimate e{to_dd_paths(r.paths), std::nullopt};
            e.nmse = nmse(pilot_response_synthetic(e.paths, {0, 0}, p), reference);
            est[EstimatorKind::proposed] = std::move(e);
        }
        if (need_pn) {
            PnConfig pc = cfg.pn;
            if (pc.match_path_count)
                pc.max_paths = std::max<int>(1, static_cast<int>(est[EstimatorKind::proposed].paths.size()));
            const auto r = pn_estimate(with_noise(rx_pn, w_pilot, sigma), pn, pc, cfg.scenario.max_doppler_hz, sigma2, p);
            Estimate e{to_dd_paths(r.paths), std::nullopt};
            e.nmse = nmse(pilot_response_synthetic(e.paths, {0, 0}, p), reference);
            est[EstimatorKind::pn] = std::move(e);
        }

        for (std::size_t c = 0; c < nc; ++c) {
            const Combo& combo = combos[c];
            Bits decided;
            if (combo.equalizer == EqualizerKind::ofdm_mmse) {
                const FTGrid xf = ofdm_mmse_equalize(with_noise(rx_ofdm, w_data, sigma), truth, sigma2, p);
                decided = qam_demap(xf, cfg.modulation_order);
            } else {
                const Estimate& e = est.at(combo.estimator);
                DDGrid xh = DDGrid::zeros(p);
                if (!e.paths.empty()) {
                    if (combo.equalizer == EqualizerKind::wiener) {
                        xh = wiener_equalize(y, e.paths, sigma2, cfg.equalizer, p);
                    } else {
                        std::optional<MmseSolver> local;
                        const MmseSolver* solver = nullptr;
                        if (combo.estimator == EstimatorKind::ideal) {
                            if (!ideal_solver)
                                ideal_solver.emplace(build_phi(truth, p, cfg.phi_guard));
                            solver = &*ideal_solver;
                        } else {
                            local.emplace(build_phi(e.paths, p, cfg.phi_guard));
                            solver = &*local;
                        }
                        const CVec yv = vectorize(y);
                        const Eigen::VectorXcd xv =
                            solver->solve(Eigen::Map<const Eigen::VectorXcd>(yv.data(), static_cast<Eigen::Index>(yv.size())), sigma2);
                        xh = devectorize(std::span<const cplx>(xv.data(), static_cast<std::size_t>(xv.size())), p);
                    }
                }
                decided = qam_demap(xh, cfg.modulation_order);
            }
            CellCounts& cell = out.cells[s * nc + c];
            cell.bits = bits.size();
            cell.bit_errors = count_errors(bits, decided);
            cell.frames = 1;
            cell.frame_errors = cell.bit_errors > 0 ? 1 : 0;
            if (combo.equalizer != EqualizerKind::ofdm_mmse) {
                const Estimate& e = est.at(combo.estimator);
                if (e.nmse) {
                    cell.nmse_sum = *e.nmse;
                    cell.nmse_count = 1;
                }
                cell.paths_sum = static_cast<double>(e.paths.size());
            } else {
                cell.paths_sum = static_cast<double>(truth.size());
            }
        }
    }
    return out;
}

} // namespace

TrialResult run_trial(const SimConfig& cfg, std::uint64_t trial) {
    const std::string tag = "trial " + std::to_string(trial) + ": ";
    try {
        return run_trial_impl(cfg, trial);
    } catch (const ConfigError& e) {
        throw ConfigError(tag + e.what());
    } catch (const GuardError& e) {
        throw GuardError(tag + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(tag + e.what());
    }
}

SweepResult run_sweep(const SimConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const auto combos = cfg.combos();
    const int trials = cfg.trials;
    std::vector<TrialResult> results(static_cast<std::size_t>(trials));
    std::exception_ptr failure;
    int failed_trial = std::numeric_limits<int>::max();

#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < trials; ++t) {
        try {
            results[static_cast<std::size_t>(t)] = run_trial(cfg, static_cast<std::uint64_t>(t));
        } catch (...) {
#pragma omp critical(otfs_sweep_failure)
            {
                if (t < failed_trial) {
                    failed_trial = t;
                    failure = std::current_exception();
                }
            }
        }
    }
    if (failure)
        std::rethrow_exception(failure);

    SweepResult res;
    for (std::size_t s = 0; s < cfg.snr_db.size(); ++s)
        for (std::size_t c = 0; c < combos.size(); ++c) {
            SweepRow row;
            row.snr_db = cfg.snr_db[s];
            row.combo = combos[c];
            for (const auto& tr : results)
                row.counts += tr.cells[s * combos.size() + c];
            res.rows.push_back(row);
        }
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

// --- csv ---------------------------------------------------------------------

namespace {

std::string num(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

void write_csv(const SweepResult& r, const SimConfig& cfg, std::ostream& os) {
    os << kRunCsvHeader << '\n';
    for (const auto& row : r.rows) {
        os << num(row.snr_db) << ',' << to_string(row.combo.estimator) << ',' << to_string(row.combo.equalizer)
           << ',' << row.counts.frames << ',' << row.counts.bits << ',' << row.counts.bit_errors << ','
           << num(row.ber()) << ',' << row.counts.frames << ',' << row.counts.frame_errors << ','
           << num(row.fer()) << ',' << num(row.mean_nmse_db()) << ',' << num(row.mean_paths()) << ','
           << cfg.seed << '\n';
    }
}

void write_csv(const SweepResult& r, const SimConfig& cfg, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_csv(r, cfg, f);
    f.flush();
    if (!f)
        throw std::runtime_error("write to '" + path.string() + "' failed");
}

} // namespace otfs
