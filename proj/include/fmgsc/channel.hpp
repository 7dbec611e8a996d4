// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The fmgsc authors

#pragma once

#include <vector>

#include "fmgsc/numerics.hpp"
#include "fmgsc/rng.hpp"

namespace fmgsc {

/// Tap variances proportional to exp(-decay_rate * l), normalized to unit
/// total power over the num_taps symbol-spaced delays.
struct PowerDelayProfile {
    int num_taps = 0;
    double decay_rate = 0.0;
    std::vector<double> tap_variances;

    static PowerDelayProfile exponential(int num_taps, double decay_rate);
};

/// One draw of the time-domain channel taps.
struct ChannelRealization {
    cvec taps;
};

/// Per-subcarrier complex gains h_n plus the receiver noise variance.
struct FrequencyResponse {
    cvec gains;
    double noise_var = 1.0;
};

/// Draw taps as independent CSCG variables with the profile's variances.
ChannelRealization sample_channel(const PowerDelayProfile& pdp, RandomStream& rng);

/// h_n = sum_l taps[l] * exp(-j 2 pi n l / n_subcarriers): the eigenvalues of
/// the circulant channel matrix under the unitary DFT convention.
FrequencyResponse frequency_response(const ChannelRealization& ch, int n_subcarriers,
                                     double noise_var);

/// |h_n|^2 / sigma^2 for every subcarrier.
std::vector<double> subcarrier_gain_ratios(const FrequencyResponse& fr);

}  // namespace fmgsc
