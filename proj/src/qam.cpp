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

#include "otfs/qam.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace otfs {

namespace {

int gray_decode(int g) {
    int i = 0;
    for (; g; g >>= 1)
        i ^= g;
    return i;
}

Eigen::MatrixXcd grid_from(const CVec& sym, const FrameParams& p) {
    Eigen::MatrixXcd v(p.num_delay_bins, p.num_doppler_bins);
    std::copy(sym.begin(), sym.end(), v.data());
    return v;
}

CVec symbols_of(const Eigen::MatrixXcd& v) { return CVec(v.data(), v.data() + v.size()); }

} // namespace

QamConstellation::QamConstellation(int order) : order_(order) {
    if (order != 4 && order != 16 && order != 64)
        throw std::invalid_argument("qam: unsupported order " + std::to_string(order));
    levels_ = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
    bits_per_axis_ = static_cast<int>(std::lround(std::log2(static_cast<double>(levels_))));
    // mean of (2i - (L-1))^2 over i is (L^2 - 1)/3 per axis
    scale_ = 1.0 / std::sqrt(2.0 * (levels_ * levels_ - 1) / 3.0);
}

double QamConstellation::level(int gray_bits) const {
    return scale_ * (2.0 * gray_decode(gray_bits) - (levels_ - 1));
}

cplx QamConstellation::map(std::span<const std::uint8_t> bits) const {
    if (static_cast<int>(bits.size()) != bits_per_symbol())
        throw std::invalid_argument("qam: wrong number of bits per symbol");
    int gi = 0, gq = 0;
    for (int b = 0; b < bits_per_axis_; ++b) {
        gi = (gi << 1) | (bits[static_cast<std::size_t>(b)] & 1);
        gq = (gq << 1) | (bits[static_cast<std::size_t>(bits_per_axis_ + b)] & 1);
    }
    return {level(gi), level(gq)};
}

void QamConstellation::demap(cplx symbol, Bits& out) const {
    auto decide = [&](double x) {
        const double pos = (x / scale_ + (levels_ - 1)) / 2.0;
        const int i = std::clamp(static_cast<int>(std::lround(pos)), 0, levels_ - 1);
        return i ^ (i >> 1);
    };
    const int gi = std::isfinite(symbol.real()) ? decide(symbol.real()) : 0;
    const int gq = std::isfinite(symbol.imag()) ? decide(symbol.imag()) : 0;
    for (int b = bits_per_axis_ - 1; b >= 0; --b)
        out.push_back(static_cast<std::uint8_t>((gi >> b) & 1));
    for (int b = bits_per_axis_ - 1; b >= 0; --b)
        out.push_back(static_cast<std::uint8_t>((gq >> b) & 1));
}

CVec QamConstellation::map_all(std::span<const std::uint8_t> bits) const {
    const auto bps = static_cast<std::size_t>(bits_per_symbol());
    if (bits.size() % bps != 0)
        throw std::invalid_argument("qam: bit count is not a multiple of bits per symbol");
    CVec out;
    out.reserve(bits.size() / bps);
    for (std::size_t i = 0; i < bits.size(); i += bps)
        out.push_back(map(bits.subspan(i, bps)));
    return out;
}

Bits QamConstellation::demap_all(std::span<const cplx> symbols) const {
    Bits out;
    out.reserve(symbols.size() * static_cast<std::size_t>(bits_per_symbol()));
    for (const auto& s : symbols)
        demap(s, out);
    return out;
}

DDGrid qam_map(std::span<const std::uint8_t> bits, int order, const FrameParams& p) {
    const QamConstellation q(order);
    if (bits.size() != static_cast<std::size_t>(p.grid_size()) * static_cast<std::size_t>(q.bits_per_symbol()))
        throw std::invalid_argument("qam_map: expected M*N*log2(order) bits");
    return DDGrid(grid_from(q.map_all(bits), p));
}

FTGrid qam_map_ft(std::span<const std::uint8_t> bits, int order, const FrameParams& p) {
    const QamConstellation q(order);
    if (bits.size() != static_cast<std::size_t>(p.grid_size()) * static_cast<std::size_t>(q.bits_per_symbol()))
        throw std::invalid_argument("qam_map_ft: expected M*N*log2(order) bits");
    return FTGrid(grid_from(q.map_all(bits), p));
}

Bits qam_demap(const DDGrid& x, int order) { return QamConstellation(order).demap_all(symbols_of(x.values())); }

Bits qam_demap(const FTGrid& x, int order) { return QamConstellation(order).demap_all(symbols_of(x.values())); }

} // namespace otfs
