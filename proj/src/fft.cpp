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

#include "otfs/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace otfs::fft {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (length, sign) under a lock.
class PlanCache {
  public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    fftw_plan get(int n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find({n, sign});
        if (it != plans_.end())
            return it->second;
        CVec scratch(static_cast<std::size_t>(n));
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr)
            throw std::runtime_error("fftw: failed to create plan of length " + std::to_string(n));
        plans_.emplace(std::make_pair(n, sign), plan);
        return plan;
    }

  private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

void run(std::span<cplx> data, int sign) {
    if (data.size() <= 1)
        return;
    fftw_plan plan = cache().get(static_cast<int>(data.size()), sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

void columns(Eigen::MatrixXcd& m, int sign, double scale) {
    const auto rows = static_cast<std::size_t>(m.rows());
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        run(std::span<cplx>(m.col(c).data(), rows), sign);
    if (scale != 1.0)
        m *= scale;
}

void rows(Eigen::MatrixXcd& m, int sign, double scale) {
    CVec line(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            line[static_cast<std::size_t>(c)] = m(r, c);
        run(line, sign);
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            m(r, c) = line[static_cast<std::size_t>(c)] * scale;
    }
}

} // namespace

void forward(std::span<cplx> data) { run(data, FFTW_FORWARD); }
void inverse(std::span<cplx> data) { run(data, FFTW_BACKWARD); }

void forward_columns(Eigen::MatrixXcd& m, double scale) { columns(m, FFTW_FORWARD, scale); }
void inverse_columns(Eigen::MatrixXcd& m, double scale) { columns(m, FFTW_BACKWARD, scale); }
void forward_rows(Eigen::MatrixXcd& m, double scale) { rows(m, FFTW_FORWARD, scale); }
void inverse_rows(Eigen::MatrixXcd& m, double scale) { rows(m, FFTW_BACKWARD, scale); }

void forward_2d(Eigen::MatrixXcd& m) {
    forward_columns(m);
    forward_rows(m);
}

void inverse_2d(Eigen::MatrixXcd& m) {
    inverse_columns(m);
    inverse_rows(m);
}

} // namespace otfs::fft
