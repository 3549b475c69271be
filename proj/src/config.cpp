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

#include "otfs/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace otfs {

using nlohmann::json;

namespace {

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad number '" + s + "' in " + what);
    }
}

template <class T>
T get(const json& j, const char* key, const std::string& ctx) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(ctx + "." + key + ": " + e.what());
    }
}

void read_frame(const json& j, FrameParams& f) {
    if (!j.is_object())
        throw ConfigError("frame must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "M" || k == "num_delay_bins")
            f.num_delay_bins = get<int>(j, k.c_str(), "frame");
        else if (k == "N" || k == "num_doppler_bins")
            f.num_doppler_bins = get<int>(j, k.c_str(), "frame");
        else if (k == "subcarrier_spacing_hz")
            f.subcarrier_spacing_hz = get<double>(j, k.c_str(), "frame");
        else if (k == "cp_len")
            f.cp_len = get<int>(j, k.c_str(), "frame");
        else if (k == "carrier_freq_hz")
            f.carrier_freq_hz = get<double>(j, k.c_str(), "frame");
        else
            throw ConfigError("frame: unknown key '" + k + "'");
    }
}

void read_estimator(const json& j, EstimatorConfig& e) {
    if (!j.is_object())
        throw ConfigError("estimator must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "alpha")
            e.alpha = get<double>(j, "alpha", "estimator");
        else if (k == "beta")
            e.beta = get<double>(j, "beta", "estimator");
        else if (k == "doppler_resolution")
            e.doppler_resolution = get<int>(j, "doppler_resolution", "estimator");
        else if (k == "max_paths_per_delay")
            e.max_paths_per_delay = get<int>(j, "max_paths_per_delay", "estimator");
        else if (k == "doppler_search_halfwidth")
            e.doppler_search_halfwidth = get<double>(j, "doppler_search_halfwidth", "estimator");
        else if (k == "delay_search_span")
            e.delay_search_span = get<int>(j, "delay_search_span", "estimator");
        else
            throw ConfigError("estimator: unknown key '" + k + "'");
    }
}

void read_pn(const json& j, PnConfig& c) {
    if (!j.is_object())
        throw ConfigError("pn must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "doppler_resolution")
            c.doppler_resolution = get<int>(j, "doppler_resolution", "pn");
        else if (k == "max_paths")
            c.max_paths = get<int>(j, "max_paths", "pn");
        else if (k == "detection_threshold")
            c.detection_threshold = get<double>(j, "detection_threshold", "pn");
        else if (k == "relative_floor")
            c.relative_floor = get<double>(j, "relative_floor", "pn");
        else if (k == "stop_on_rise")
            c.stop_on_rise = get<bool>(j, "stop_on_rise", "pn");
        else if (k == "match_path_count")
            c.match_path_count = get<bool>(j, "match_path_count", "pn");
        else
            throw ConfigError("pn: unknown key '" + k + "'");
    }
}

void read_equalizer(const json& j, EqualizerConfig& c) {
    if (!j.is_object())
        throw ConfigError("equalizer must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "regularization_floor")
            c.regularization_floor = get<double>(j, "regularization_floor", "equalizer");
        else if (k == "noise_var_override")
            c.noise_var_override = get<double>(j, "noise_var_override", "equalizer");
        else
            throw ConfigError("equalizer: unknown key '" + k + "'");
    }
}

DopplerScenario read_scenario(const json& j, const FrameParams& f, double speed_kmh,
                              const std::filesystem::path& base_dir) {
    if (j.is_string()) {
        if (j.get<std::string>() != "eva")
            throw ConfigError("scenario: unknown builtin '" + j.get<std::string>() + "'");
        return eva_scenario(max_doppler_hz(speed_kmh, f.carrier_freq_hz));
    }
    if (!j.is_object())
        throw ConfigError("scenario must be a string or an object");
    if (j.contains("file")) {
        std::filesystem::path p = get<std::string>(j, "file", "scenario");
        if (p.is_relative() && !base_dir.empty())
            p = base_dir / p;
        return load_scenario(p, f);
    }
    if (j.contains("builtin")) {
        if (get<std::string>(j, "builtin", "scenario") != "eva")
            throw ConfigError("scenario: unknown builtin");
        double nu = max_doppler_hz(speed_kmh, f.carrier_freq_hz);
        if (j.contains("max_doppler_hz"))
            nu = get<double>(j, "max_doppler_hz", "scenario");
        else if (j.contains("speed_kmh"))
            nu = max_doppler_hz(get<double>(j, "speed_kmh", "scenario"), f.carrier_freq_hz);
        return eva_scenario(nu);
    }
    return parse_scenario(j.dump(), f);
}

std::vector<double> read_snr(const json& j) {
    if (j.is_string())
        return parse_snr_range(j.get<std::string>());
    if (j.is_number())
        return {j.get<double>()};
    if (j.is_array()) {
        std::vector<double> v;
        for (const auto& x : j) {
            if (!x.is_number())
                throw ConfigError("snr_db entries must be numbers");
            v.push_back(x.get<double>());
        }
        return v;
    }
    throw ConfigError("snr_db must be a list, a number or \"a:step:b\"");
}

template <class Kind, class Parse>
std::vector<Kind> read_kinds(const json& j, Parse parse, const char* key) {
    std::vector<Kind> v;
    if (j.is_string())
        v.push_back(parse(j.get<std::string>()));
    else if (j.is_array())
        for (const auto& x : j) {
            if (!x.is_string())
                throw ConfigError(std::string(key) + " entries must be strings");
            v.push_back(parse(x.get<std::string>()));
        }
    else
        throw ConfigError(std::string(key) + " must be a string or a list of strings");
    return v;
}

} // namespace

SimConfig default_config() {
    SimConfig c;
    c.scenario = eva_scenario(max_doppler_hz(500.0, c.frame.carrier_freq_hz));
    c.snr_db = {0, 5, 10, 15, 20, 25, 30};
    return c;
}

std::vector<double> parse_snr_range(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':'))
        parts.push_back(item);
    if (parts.size() == 1)
        return {parse_double(parts[0], "snr")};
    if (parts.size() != 3)
        throw ConfigError("snr range must look like a:step:b, got '" + spec + "'");
    const double a = parse_double(parts[0], "snr");
    const double step = parse_double(parts[1], "snr");
    const double b = parse_double(parts[2], "snr");
    if (!(step > 0.0) || !(b >= a))
        throw ConfigError("snr range needs step > 0 and b >= a, got '" + spec + "'");
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 100000)
        throw ConfigError("snr range has too many points");
    std::vector<double> v;
    for (long i = 0; i < count; ++i)
        v.push_back(a + static_cast<double>(i) * step);
    return v;
}

SimConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text, nullptr, true, true);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");

    SimConfig c = default_config();
    if (j.contains("frame"))
        read_frame(j["frame"], c.frame);
    const double speed = j.contains("speed_kmh") ? get<double>(j, "speed_kmh", "config") : 500.0;
    c.scenario = eva_scenario(max_doppler_hz(speed, c.frame.carrier_freq_hz));

    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        const json& v = it.value();
        if (k == "frame" || k == "speed_kmh" || k == "comment")
            continue;
        if (k == "scenario")
            c.scenario = read_scenario(v, c.frame, speed, base_dir);
        else if (k == "modulation_order")
            c.modulation_order = get<int>(j, "modulation_order", "config");
        else if (k == "snr_db")
            c.snr_db = read_snr(v);
        else if (k == "trials")
            c.trials = get<int>(j, "trials", "config");
        else if (k == "estimators" || k == "estimator_kind")
            c.estimators = read_kinds<EstimatorKind>(v, parse_estimator, "estimators");
        else if (k == "equalizers" || k == "equalizer_kind")
            c.equalizers = read_kinds<EqualizerKind>(v, parse_equalizer, "equalizers");
        else if (k == "estimator")
            read_estimator(v, c.estimator);
        else if (k == "pn")
            read_pn(v, c.pn);
        else if (k == "equalizer")
            read_equalizer(v, c.equalizer);
        else if (k == "pilot_amplitude")
            c.pilot_amplitude = get<double>(j, "pilot_amplitude", "config");
        else if (k == "seed")
            c.seed = get<std::uint64_t>(j, "seed", "config");
        else if (k == "output")
            c.output = get<std::string>(j, "output", "config");
        else if (k == "phi_guard")
            c.phi_guard = get<std::size_t>(j, "phi_guard", "config");
        else
            throw ConfigError("unknown config key '" + k + "'");
    }
    return c;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f)
        throw ConfigError("cannot read config '" + path.string() + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

} // namespace otfs
