// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The fmgsc authors

#include "fmgsc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fmgsc {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 transform, unnormalized.
// sign = -1 for the forward transform, +1 for the inverse.
void fft_radix2(cvec& a, double sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    std::vector<cplx> w;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        w.resize(half);
        for (std::size_t j = 0; j < half; ++j)
            w[j] = std::polar(1.0, sign * 2.0 * std::numbers::pi *
                                       static_cast<double>(j) / static_cast<double>(len));
        for (std::size_t blk = 0; blk < n; blk += len) {
            for (std::size_t j = 0; j < half; ++j) {
                const cplx u = a[blk + j];
                const cplx t = w[j] * a[blk + j + half];
                a[blk + j] = u + t;
                a[blk + j + half] = u - t;
            }
        }
    }
}

// Direct evaluation for non power-of-two lengths. The twiddle table is
// indexed by (j*k) mod n so large angles never hit argument reduction.
cvec dft_direct(const cvec& v, double sign) {
    const std::size_t n = v.size();
    std::vector<cplx> w(n);
    for (std::size_t t = 0; t < n; ++t)
        w[t] = std::polar(1.0, sign * 2.0 * std::numbers::pi *
                                   static_cast<double>(t) / static_cast<double>(n));
    cvec out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) acc += v[j] * w[(j * k) % n];
        out[k] = acc;
    }
    return out;
}

cvec transform(const cvec& v, double sign) {
    if (v.empty()) throw std::invalid_argument("dft: empty input");
    const std::size_t n = v.size();
    cvec out;
    if (is_pow2(n)) {
        out = v;
        fft_radix2(out, sign);
    } else {
        out = dft_direct(v, sign);
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& x : out) x *= scale;
    return out;
}

}  // namespace

cvec dft(const cvec& v) { return transform(v, -1.0); }

cvec idft(const cvec& v) { return transform(v, +1.0); }

cvec circular_convolve(const cvec& a, const cvec& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("circular_convolve: empty input");
    if (a.size() != b.size())
        throw std::invalid_argument("circular_convolve: length mismatch");
    const std::size_t n = a.size();
    cvec out(n);
    for (std::size_t m = 0; m < n; ++m) {
        cplx acc{0.0, 0.0};
        for (std::size_t l = 0; l < n; ++l) acc += a[l] * b[(m + n - l) % n];
        out[m] = acc;
    }
    return out;
}

double energy(const cvec& v) {
    double e = 0.0;
    for (const auto& x : v) e += std::norm(x);
    return e;
}

double mean_power(const cvec& v) {
    if (v.empty()) return 0.0;
    return energy(v) / static_cast<double>(v.size());
}

double peak_power(const cvec& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::norm(x));
    return m;
}

}  // namespace fmgsc
