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

#include "otfs/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace otfs {

namespace {

constexpr double kFracEps = 1e-12;

double delay_samples(const PathSpec& path, const FrameParams& p) { return path.delay_s * p.sample_rate_hz(); }

} // namespace

// --- scenario --------------------------------------------------------------

double max_doppler_hz(double speed_kmh, double carrier_freq_hz) {
    return (speed_kmh / 3.6) * carrier_freq_hz / kSpeedOfLight;
}

DopplerScenario eva_scenario(double max_doppler) {
    // 3GPP TS 36.104 Annex B.2, Extended Vehicular A.
    return DopplerScenario{"EVA",
                           max_doppler,
                           {{0, 0.0},
                            {30, -1.5},
                            {150, -1.4},
                            {310, -3.6},
                            {370, -0.6},
                            {710, -9.1},
                            {1090, -7.0},
                            {1730, -12.0},
                            {2510, -16.9}}};
}

void DopplerScenario::validate() const {
    if (profile.empty())
        throw ConfigError("scenario '" + name + "': profile has no taps");
    if (!(max_doppler_hz >= 0.0) || !std::isfinite(max_doppler_hz))
        throw ConfigError("scenario '" + name + "': max_doppler_hz must be finite and >= 0");
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const auto& tap = profile[i];
        if (!(tap.delay_ns >= 0.0) || !std::isfinite(tap.delay_ns) || !std::isfinite(tap.power_db))
            throw ConfigError("scenario '" + name + "': tap " + std::to_string(i) + " is malformed");
    }
}

DopplerScenario parse_scenario(const std::string& json_text, const FrameParams& frame) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text, nullptr, true, true);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    DopplerScenario s;
    try {
        s.name = doc.value("name", std::string("custom"));
        for (const auto& t : doc.at("taps"))
            s.profile.push_back({t.at("delay_ns").get<double>(), t.at("power_db").get<double>()});
        if (doc.contains("max_doppler_hz"))
            s.max_doppler_hz = doc.at("max_doppler_hz").get<double>();
        else if (doc.contains("speed_kmh"))
            s.max_doppler_hz = max_doppler_hz(doc.at("speed_kmh").get<double>(), frame.carrier_freq_hz);
        else
            throw ConfigError("scenario '" + s.name + "': needs max_doppler_hz or speed_kmh");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    s.validate();
    return s;
}

DopplerScenario load_scenario(const std::filesystem::path& path, const FrameParams& frame) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open scenario file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), frame);
}

// --- fractional delay --------------------------------------------------------

std::array<double, 4> farrow_weights(double mu) {
    // Rows: taps at offsets -1, 0, 1, 2. Columns: mu^0 .. mu^3.
    static constexpr double kCoeff[4][4] = {
        {0.0, -1.0 / 3.0, 0.5, -1.0 / 6.0},
        {1.0, -0.5, -1.0, 0.5},
        {0.0, 1.0, 0.5, -0.5},
        {0.0, -1.0 / 6.0, 0.0, 1.0 / 6.0},
    };
    std::array<double, 4> w{};
    for (int i = 0; i < 4; ++i)
        w[i] = ((kCoeff[i][3] * mu + kCoeff[i][2]) * mu + kCoeff[i][1]) * mu + kCoeff[i][0];
    return w;
}

CVec farrow_delay(std::span<const cplx> s, double frac) {
    if (frac == 0.0)
        return CVec(s.begin(), s.end());
    static constexpr double kCoeff[4][4] = {
        {0.0, -1.0 / 3.0, 0.5, -1.0 / 6.0},
        {1.0, -0.5, -1.0, 0.5},
        {0.0, 1.0, 0.5, -0.5},
        {0.0, -1.0 / 6.0, 0.0, 1.0 / 6.0},
    };
    const auto len = static_cast<long long>(s.size());
    auto at = [&](long long t) { return (t >= 0 && t < len) ? s[static_cast<std::size_t>(t)] : cplx{}; };
    CVec out(s.size());
    for (long long t = 0; t < len; ++t) {
        // Branch filters, then Horner in frac.
        cplx acc{};
        for (int k = 3; k >= 0; --k) {
            cplx branch{};
            for (int i = 0; i < 4; ++i)
                branch += kCoeff[i][k] * at(t - (i - 1));
            acc = acc * frac + branch;
        }
        out[static_cast<std::size_t>(t)] = acc;
    }
    return out;
}

std::vector<DelayTap> fractional_delay_taps(double delay) {
    if (!(delay >= 0.0) || !std::isfinite(delay))
        throw std::invalid_argument("fractional_delay_taps: delay must be finite and >= 0");
    const double nearest = std::round(delay);
    if (std::abs(delay - nearest) < kFracEps)
        return {{static_cast<int>(nearest), 1.0}};
    const int whole = static_cast<int>(std::floor(delay));
    const int base = std::max(whole, 1);
    const auto w = farrow_weights(delay - base);
    std::vector<DelayTap> taps;
    for (int i = 0; i < 4; ++i)
        taps.push_back({base - 1 + i, w[static_cast<std::size_t>(i)]});
    return taps;
}

int delay_reach(double delay) {
    int reach = 0;
    for (const auto& tap : fractional_delay_taps(delay))
        reach = std::max(reach, tap.delay);
    return reach;
}

// --- realization -------------------------------------------------------------

void ChannelRealization::validate() const {
    params.validate();
    if (paths.empty())
        throw std::invalid_argument("ChannelRealization: needs at least one path");
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const auto& path = paths[i];
        if (!(path.gain >= 0.0) || !std::isfinite(path.gain) || !std::isfinite(path.doppler_hz) ||
            !std::isfinite(path.init_phase) || !(path.delay_s >= 0.0) || !std::isfinite(path.delay_s))
            throw std::invalid_argument("ChannelRealization: path " + std::to_string(i) + " is malformed");
        const int reach = delay_reach(delay_samples(path, params));
        if (reach > params.cp_len)
            throw std::invalid_argument("ChannelRealization: path " + std::to_string(i) + " reaches delay " +
                                        std::to_string(reach) + " > cp_len " + std::to_string(params.cp_len) +
                                        " (inter-symbol interference is not modelled)");
    }
}

ChannelRealization make_channel(const DopplerScenario& scenario, const FrameParams& p,
                                std::span<const double> arrival_angles, std::span<const double> init_phases) {
    scenario.validate();
    p.validate();
    const std::size_t count = scenario.profile.size();
    if (arrival_angles.size() != count || init_phases.size() != count)
        throw std::invalid_argument("make_channel: need one angle and one phase per tap");

    double total = 0.0;
    for (const auto& tap : scenario.profile)
        total += std::pow(10.0, tap.power_db / 10.0);

    ChannelRealization ch;
    ch.params = p;
    for (std::size_t i = 0; i < count; ++i) {
        const auto& tap = scenario.profile[i];
        PathSpec path;
        path.gain = std::sqrt(std::pow(10.0, tap.power_db / 10.0) / total);
        path.delay_s = tap.delay_ns * 1e-9;
        path.doppler_hz = scenario.max_doppler_hz * std::cos(arrival_angles[i]);
        path.init_phase = init_phases[i];
        const int reach = delay_reach(delay_samples(path, p));
        if (reach > p.cp_len)
            throw ConfigError("scenario '" + scenario.name + "': tap " + std::to_string(i) + " (" +
                              std::to_string(tap.delay_ns) + " ns) reaches delay bin " + std::to_string(reach) +
                              " beyond cp_len " + std::to_string(p.cp_len));
        ch.paths.push_back(path);
    }
    return ch;
}

ChannelRealization draw_channel(const DopplerScenario& scenario, const FrameParams& p, Rng& rng) {
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    std::vector<double> angles;
    std::vector<double> phases;
    for (std::size_t i = 0; i < scenario.profile.size(); ++i) {
        angles.push_back(angle(rng));
        phases.push_back(phase(rng));
    }
    return make_channel(scenario, p, angles, phases);
}

std::vector<DDPath> dd_paths(const ChannelRealization& ch) {
    ch.validate();
    const auto& p = ch.params;
    std::vector<DDPath> out;
    for (const auto& path : ch.paths) {
        const cplx coeff = std::polar(path.gain, path.init_phase);
        const double doppler = path.doppler_hz / p.doppler_bin_hz();
        for (const auto& tap : fractional_delay_taps(delay_samples(path, p)))
            if (tap.weight != 0.0)
                out.push_back({tap.delay, doppler, coeff * tap.weight});
    }
    return out;
}

// --- application -------------------------------------------------------------

TimeSignal apply_channel(const TimeSignal& s, std::span<const DDPath> paths, const FrameParams& p) {
    if (s.samples.size() != p.samples_per_frame())
        throw std::invalid_argument("apply_channel: signal is not frame aligned");
    const int m = p.num_delay_bins;
    const int cp = p.cp_len;
    const int block = p.block_len();
    const double frame = static_cast<double>(block) * p.num_doppler_bins;

    TimeSignal out{CVec(s.samples.size()), s.sample_rate_hz};
    for (const auto& path : paths) {
        if (path.delay < 0 || path.delay > cp)
            throw std::invalid_argument("apply_channel: tap delay " + std::to_string(path.delay) +
                                        " outside [0, cp_len]");
        for (int n = 0; n < p.num_doppler_bins; ++n) {
            const long long start = static_cast<long long>(n) * block;
            for (int q = 0; q < block; ++q) {
                const long long t = start + q;
                long long src;
                if (q >= cp)
                    src = start + cp + wrap_index(q - cp - path.delay, m);
                else
                    src = t - path.delay;
                if (src < 0)
                    continue;
                const cplx rot = unit_phasor(path.doppler * static_cast<double>(t - path.delay) / frame);
                out.samples[static_cast<std::size_t>(t)] += path.coeff * rot * s.samples[static_cast<std::size_t>(src)];
            }
        }
    }
    return out;
}

TimeSignal apply_channel(const TimeSignal& s, const ChannelRealization& ch) {
    const auto paths = dd_paths(ch);
    return apply_channel(s, paths, ch.params);
}

Eigen::MatrixXcd build_hn(std::span<const DDPath> paths, const FrameParams& p, int n) {
    if (n < 0 || n >= p.num_doppler_bins)
        throw std::out_of_range("build_hn: symbol index " + std::to_string(n) + " outside [0, N)");
    const int m = p.num_delay_bins;
    const double frame = static_cast<double>(p.block_len()) * p.num_doppler_bins;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m, m);
    for (const auto& path : paths) {
        const long long origin = static_cast<long long>(p.block_len()) * n + p.cp_len - path.delay;
        for (int i = 0; i < m; ++i) {
            const cplx rot = unit_phasor(path.doppler * static_cast<double>(origin + i) / frame);
            h(i, wrap_index(i - path.delay, m)) += path.coeff * rot;
        }
    }
    return h;
}

Eigen::MatrixXcd build_hn(const ChannelRealization& ch, int n) {
    const auto paths = dd_paths(ch);
    return build_hn(paths, ch.params, n);
}

TimeSignal add_noise(const TimeSignal& s, double noise_var, Rng& rng) {
    if (!(noise_var >= 0.0))
        throw std::invalid_argument("add_noise: noise variance must be >= 0");
    TimeSignal out = s;
    if (noise_var == 0.0)
        return out;
    std::normal_distribution<double> normal(0.0, std::sqrt(noise_var / 2.0));
    for (auto& v : out.samples) {
        const double re = normal(rng);
        const double im = normal(rng);
        v += cplx(re, im);
    }
    return out;
}

double noise_var_from_snr_db(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

} // namespace otfs
