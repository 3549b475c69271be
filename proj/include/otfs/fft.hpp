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

#ifndef OTFS_FFT_HPP
#define OTFS_FFT_HPP

#include <span>

#include <Eigen/Dense>

#include "otfs/common.hpp"

// Thin thread-safe wrapper over FFTW. Transforms are unnormalized:
//   forward: X[k] = sum_n x[n] e^{-j 2 pi n k / L}
//   inverse: x[n] = sum_k X[k] e^{+j 2 pi n k / L}
namespace otfs::fft {

void forward(std::span<cplx> data);
void inverse(std::span<cplx> data);

// Apply along every column (length rows()) or every row (length cols()),
// scaling the result by `scale`.
void forward_columns(Eigen::MatrixXcd& m, double scale = 1.0);
void inverse_columns(Eigen::MatrixXcd& m, double scale = 1.0);
void forward_rows(Eigen::MatrixXcd& m, double scale = 1.0);
void inverse_rows(Eigen::MatrixXcd& m, double scale = 1.0);

// Unnormalized 2D transforms.
void forward_2d(Eigen::MatrixXcd& m);
void inverse_2d(Eigen::MatrixXcd& m);

} // namespace otfs::fft

#endif
