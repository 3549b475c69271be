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

#ifndef OTFS_DD_PATH_HPP
#define OTFS_DD_PATH_HPP

#include "otfs/common.hpp"

namespace otfs {

/// One propagation path expressed on the delay-Doppler lattice.
///
/// `delay` is an integer delay bin, `doppler` is k + kappa in (signed) Doppler
/// bins, and `coeff` is the complex amplitude h * e^{j phi}. The Doppler
/// value is kept signed because the intra-frame phase term depends on the
/// actual frequency, not just its residue modulo N.
struct DDPath {
    int delay = 0;
    double doppler = 0.0;
    cplx coeff{1.0, 0.0};
};

} // namespace otfs

#endif
