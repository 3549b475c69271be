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

#ifndef OTFS_CONFIG_HPP
#define OTFS_CONFIG_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "otfs/sim.hpp"

namespace otfs {

/// Defaults: 256 x 14 frame, 15 kHz, CP 17, 0.8 GHz, 16-QAM, EVA at
/// 500 km/h, D = 10, proposed + wiener, SNR 0..30 dB in 5 dB steps.
SimConfig default_config();

/// JSON config. Every key is optional and overrides default_config():
///   frame: {M, N, subcarrier_spacing_hz, cp_len, carrier_freq_hz}
///   scenario: "eva" | {"builtin": "eva", "speed_kmh" | "max_doppler_hz"}
///             | {"file": path} | inline scenario object
///   speed_kmh, modulation_order, snr_db (list or "a:step:b"), trials,
///   estimators, equalizers, estimator{...}, pn{...}, equalizer{...},
///   pilot_amplitude, seed, output
/// Relative scenario files resolve against `base_dir`. Throws ConfigError.
SimConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
SimConfig load_config(const std::filesystem::path& path);

/// "a:step:b" -> a, a+step, ... up to b (inclusive, with a small tolerance).
/// A single number gives one point. Throws ConfigError.
std::vector<double> parse_snr_range(const std::string& spec);

} // namespace otfs

#endif
