// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The fmgsc authors

#pragma once

#include <complex>
#include <vector>

namespace fmgsc {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

/// Unitary DFT (1/sqrt(n) scaling), any length >= 1.
cvec dft(const cvec& v);

/// Unitary inverse DFT; dft followed by idft is the identity.
cvec idft(const cvec& v);

/// Circular convolution, out[m] = sum_l a[l] * b[(m-l) mod n]. Lengths must match.
cvec circular_convolve(const cvec& a, const cvec& b);

/// Sum of |v[i]|^2.
double energy(const cvec& v);

/// Mean of |v[i]|^2 (zero for empty input).
double mean_power(const cvec& v);

/// Max of |v[i]|^2 (zero for empty input).
double peak_power(const cvec& v);

}  // namespace fmgsc
