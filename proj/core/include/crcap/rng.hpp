// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The crcap Authors

#ifndef CRCAP_RNG_HPP
#define CRCAP_RNG_HPP

#include <array>
#include <cstdint>

namespace crcap {

/// Philox4x32-10 block function: 10 rounds over a 128-bit counter with a 64-bit key.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Random stream addressed by (seed, stream id).
///
/// The counter is (block, stream id), the key is the seed, so stream k of a
/// seed is the same sequence no matter which thread draws it or in which
/// order. The Monte Carlo driver uses the sample index as the stream id.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id);

    /// Uniform on (0, 1], 53 random bits.
    double uniform();

    /// Standard normal by Box-Muller; pairs are cached.
    double normal();

private:
    std::uint32_t next_word();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace crcap

#endif
