// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The fmgsc authors

#include "fmgsc/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fmgsc {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) {
    // splitmix64 expansion; guarantees a nonzero xoshiro state.
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
}

std::uint64_t RandomStream::derive_id(std::uint64_t master, std::uint64_t a,
                                      std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    std::uint64_t s = master;
    std::uint64_t h = splitmix64(s);
    s ^= a;
    h ^= splitmix64(s);
    s ^= b;
    h ^= splitmix64(s);
    s ^= c;
    h ^= splitmix64(s);
    s ^= d;
    h ^= splitmix64(s);
    return h;
}

RandomStream RandomStream::derive(std::uint64_t master, std::uint64_t a,
                                  std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    return RandomStream(derive_id(master, a, b, c, d));
}

std::uint64_t RandomStream::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::uniform_int(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_int: bound must be > 0");
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
}

double RandomStream::gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> RandomStream::cscg(double variance) {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-variance * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace fmgsc
