// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The fmgsc authors

#include <cmath>

#include <doctest.h>

#include "fmgsc/numerics.hpp"
#include "fmgsc/rng.hpp"

using namespace fmgsc;

namespace {

cvec random_vector(int n, RandomStream& rng) {
    cvec v(n);
    for (auto& x : v) x = rng.cscg(1.0);
    return v;
}

double max_abs_diff(const cvec& a, const cvec& b) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

TEST_CASE("dft of a delta is flat") {
    cvec v(8, cplx{});
    v[0] = 1.0;
    const cvec f = dft(v);
    const double expect = 1.0 / std::sqrt(8.0);
    for (const cplx& x : f) {
        CHECK(x.real() == doctest::Approx(expect).epsilon(1e-14));
        CHECK(x.imag() == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    }
}

TEST_CASE("dft of a constant concentrates at bin zero") {
    const cvec f = dft(cvec(4, cplx{1.0, 0.0}));
    CHECK(std::abs(f[0] - cplx{2.0, 0.0}) < 1e-14);
    for (int i = 1; i < 4; ++i) CHECK(std::abs(f[i]) < 1e-14);
}

TEST_CASE("transform round trip at mixed sizes") {
    RandomStream rng(11);
    for (const int n : {1, 2, 3, 4, 5, 6, 7, 8, 12, 16, 27, 64, 100, 128, 256}) {
        const cvec v = random_vector(n, rng);
        CHECK(max_abs_diff(idft(dft(v)), v) < 1e-10);
        CHECK(max_abs_diff(dft(idft(v)), v) < 1e-10);
    }
}

TEST_CASE("unitary transform preserves energy") {
    RandomStream rng(12);
    for (const int n : {2, 3, 8, 31, 64, 256}) {
        const cvec v = random_vector(n, rng);
        CHECK(energy(dft(v)) == doctest::Approx(energy(v)).epsilon(1e-12));
        CHECK(energy(idft(v)) == doctest::Approx(energy(v)).epsilon(1e-12));
    }
}

TEST_CASE("transform is linear") {
    RandomStream rng(13);
    const int n = 24;
    const cvec a = random_vector(n, rng);
    const cvec b = random_vector(n, rng);
    const cplx alpha{0.7, -1.3};
    cvec combo(n);
    for (int i = 0; i < n; ++i) combo[i] = alpha * a[i] + b[i];
    const cvec fa = dft(a);
    const cvec fb = dft(b);
    cvec expect(n);
    for (int i = 0; i < n; ++i) expect[i] = alpha * fa[i] + fb[i];
    CHECK(max_abs_diff(dft(combo), expect) < 1e-10);
}

TEST_CASE("convolution theorem links dft products and circular convolution") {
    RandomStream rng(14);
    for (const int n : {3, 8, 17, 64}) {
        const cvec a = random_vector(n, rng);
        const cvec b = random_vector(n, rng);
        const cvec fa = dft(a);
        const cvec fb = dft(b);
        cvec spectral(n);
        const double root_n = std::sqrt(static_cast<double>(n));
        for (int i = 0; i < n; ++i) spectral[i] = root_n * fa[i] * fb[i];
        CHECK(max_abs_diff(circular_convolve(a, b), idft(spectral)) < 1e-10);
    }
}

TEST_CASE("convolving with a shifted delta rotates the input") {
    RandomStream rng(15);
    const int n = 9;
    const cvec a = random_vector(n, rng);
    cvec e1(n, cplx{});
    e1[1] = 1.0;
    const cvec shifted = circular_convolve(a, e1);
    for (int i = 0; i < n; ++i) CHECK(std::abs(shifted[i] - a[(i + n - 1) % n]) < 1e-12);
}

TEST_CASE("circular convolution hand example") {
    const cvec a = {cplx{1, 0}, cplx{2, 0}, cplx{3, 0}};
    const cvec b = {cplx{1, 0}, cplx{0, 0}, cplx{1, 0}};
    // b = delta + delay-2 kernel: out[m] = a[m] + a[(m-2) mod 3]
    const cvec out = circular_convolve(a, b);
    CHECK(std::abs(out[0] - cplx{3, 0}) < 1e-12);
    CHECK(std::abs(out[1] - cplx{5, 0}) < 1e-12);
    CHECK(std::abs(out[2] - cplx{4, 0}) < 1e-12);
}

TEST_CASE("transforms reject empty input and length mismatches") {
    CHECK_THROWS_AS(dft(cvec{}), std::invalid_argument);
    CHECK_THROWS_AS(idft(cvec{}), std::invalid_argument);
    CHECK_THROWS_AS(circular_convolve(cvec(3), cvec(4)), std::invalid_argument);
}

TEST_CASE("power helpers") {
    const cvec v = {cplx{3, 4}, cplx{0, 0}, cplx{1, 0}};
    CHECK(energy(v) == doctest::Approx(26.0));
    CHECK(mean_power(v) == doctest::Approx(26.0 / 3.0));
    CHECK(peak_power(v) == doctest::Approx(25.0));
    CHECK(mean_power(cvec{}) == 0.0);
    CHECK(peak_power(cvec{}) == 0.0);
}
