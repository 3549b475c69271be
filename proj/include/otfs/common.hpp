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

#ifndef OTFS_COMMON_HPP
#define OTFS_COMMON_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace otfs {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;

// Invalid or inconsistent configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Size guard refused to materialize an operator (CLI exit code 2).
class GuardError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Non-negative remainder of i modulo n.
inline int wrap_index(long long i, int n) {
    long long r = i % n;
    return static_cast<int>(r < 0 ? r + n : r);
}

// e^{j*2*pi*x}
inline cplx unit_phasor(double cycles) {
    const double a = kTwoPi * cycles;
    return {std::cos(a), std::sin(a)};
}

} // namespace otfs

#endif
