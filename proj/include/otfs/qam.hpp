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

#ifndef OTFS_QAM_HPP
#define OTFS_QAM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "otfs/grid.hpp"

namespace otfs {

using Bits = std::vector<std::uint8_t>;

/// Square Gray-coded QAM with unit average symbol energy. Each symbol takes
/// log2(order) bits: the first half select the in-phase level, the second
/// half the quadrature level, each through a binary-reflected Gray code.
class QamConstellation {
  public:
    /// order must be 4, 16 or 64 (std::invalid_argument otherwise).
    explicit QamConstellation(int order);

    int order() const noexcept { return order_; }
    int bits_per_symbol() const noexcept { return 2 * bits_per_axis_; }
    double min_distance() const noexcept { return 2.0 * scale_; }

    cplx map(std::span<const std::uint8_t> bits) const;
    /// Nearest-point hard decision, appends bits_per_symbol() bits.
    void demap(cplx symbol, Bits& out) const;

    CVec map_all(std::span<const std::uint8_t> bits) const;
    Bits demap_all(std::span<const cplx> symbols) const;

  private:
    double level(int gray_bits) const;
    int order_;
    int levels_;
    int bits_per_axis_;
    double scale_;
};

/// Maps M*N*log2(order) bits onto the grid in column-major order.
DDGrid qam_map(std::span<const std::uint8_t> bits, int order, const FrameParams& p);
FTGrid qam_map_ft(std::span<const std::uint8_t> bits, int order, const FrameParams& p);
Bits qam_demap(const DDGrid& x, int order);
Bits qam_demap(const FTGrid& x, int order);

} // namespace otfs

#endif
