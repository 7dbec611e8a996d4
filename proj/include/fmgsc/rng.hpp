// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The fmgsc authors

#pragma once

#include <complex>
#include <cstdint>

namespace fmgsc {

/// Seeded xoshiro256++ stream with splitmix64-based stream derivation.
///
/// Streams derived from the same master seed and distinct index tuples are
/// statistically independent and do not depend on the order in which they
/// are created or consumed, so Monte-Carlo trials can run in any order or
/// thread layout and still reproduce bit-identical draws.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    /// Derive an independent stream from (master, a, b, c, d).
    static RandomStream derive(std::uint64_t master, std::uint64_t a = 0,
                               std::uint64_t b = 0, std::uint64_t c = 0,
                               std::uint64_t d = 0);

    /// The 64-bit seed a derive() call with these arguments starts from;
    /// usable as a compact stream label.
    static std::uint64_t derive_id(std::uint64_t master, std::uint64_t a = 0,
                                   std::uint64_t b = 0, std::uint64_t c = 0,
                                   std::uint64_t d = 0);

    std::uint64_t next_u64();

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform();

    /// Uniform integer in [0, bound); bound must be > 0.
    std::uint64_t uniform_int(std::uint64_t bound);

    /// Standard normal via Box-Muller (one pair per call, sine part unused).
    double gaussian();

    /// Circularly symmetric complex Gaussian with the given total variance.
    std::complex<double> cscg(double variance);

private:
    std::uint64_t state_[4];
};

}  // namespace fmgsc
