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

#ifndef OTFS_TEST_HELPERS_HPP
#define OTFS_TEST_HELPERS_HPP

#include <algorithm>
#include <cmath>
#include <random>

#include "otfs/grid.hpp"

namespace otfs::test {

inline FrameParams frame(int m, int n, int cp) {
    FrameParams p;
    p.num_delay_bins = m;
    p.num_doppler_bins = n;
    p.cp_len = cp;
    return p;
}

template <class Rng>
Eigen::MatrixXcd random_matrix(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    Eigen::MatrixXcd m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r)
            m(r, c) = {g(rng), g(rng)};
    return m;
}

template <class Rng>
DDGrid random_grid(const FrameParams& p, Rng& rng) {
    return DDGrid(random_matrix(p.num_delay_bins, p.num_doppler_bins, rng));
}

inline double max_abs(const Eigen::MatrixXcd& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline double max_abs(const CVec& a, const CVec& b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

} // namespace otfs::test

#endif
