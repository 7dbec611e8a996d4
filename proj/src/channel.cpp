// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The fmgsc authors

#include "fmgsc/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fmgsc {

PowerDelayProfile PowerDelayProfile::exponential(int num_taps, double decay_rate) {
    if (num_taps < 1) throw std::invalid_argument("pdp: num_taps must be >= 1");
    if (decay_rate < 0.0) throw std::invalid_argument("pdp: decay_rate must be >= 0");
    PowerDelayProfile pdp;
    pdp.num_taps = num_taps;
    pdp.decay_rate = decay_rate;
    pdp.tap_variances.resize(num_taps);
    double total = 0.0;
    for (int l = 0; l < num_taps; ++l) {
        pdp.tap_variances[l] = std::exp(-decay_rate * l);
        total += pdp.tap_variances[l];
    }
    for (auto& v : pdp.tap_variances) v /= total;
    return pdp;
}

ChannelRealization sample_channel(const PowerDelayProfile& pdp, RandomStream& rng) {
    if (pdp.num_taps < 1 || static_cast<int>(pdp.tap_variances.size()) != pdp.num_taps)
        throw std::invalid_argument("sample_channel: invalid power delay profile");
    ChannelRealization ch;
    ch.taps.resize(pdp.num_taps);
    for (int l = 0; l < pdp.num_taps; ++l) ch.taps[l] = rng.cscg(pdp.tap_variances[l]);
    return ch;
}

FrequencyResponse frequency_response(const ChannelRealization& ch, int n_subcarriers,
                                     double noise_var) {
    const int num_taps = static_cast<int>(ch.taps.size());
    if (num_taps < 1) throw std::invalid_argument("frequency_response: empty channel");
    if (n_subcarriers < num_taps)
        throw std::invalid_argument("frequency_response: need n_subcarriers >= tap count");
    if (noise_var <= 0.0)
        throw std::invalid_argument("frequency_response: noise variance must be > 0");
    FrequencyResponse fr;
    fr.noise_var = noise_var;
    fr.gains.resize(n_subcarriers);
    std::vector<cplx> w(n_subcarriers);
    for (int t = 0; t < n_subcarriers; ++t)
        w[t] = std::polar(1.0, -2.0 * std::numbers::pi * t / n_subcarriers);
    for (int n = 0; n < n_subcarriers; ++n) {
        cplx acc{0.0, 0.0};
        for (int l = 0; l < num_taps; ++l)
            acc += ch.taps[l] * w[(static_cast<std::size_t>(n) * l) % n_subcarriers];
        fr.gains[n] = acc;
    }
    return fr;
}

std::vector<double> subcarrier_gain_ratios(const FrequencyResponse& fr) {
    std::vector<double> ratios(fr.gains.size());
    for (std::size_t n = 0; n < fr.gains.size(); ++n)
        ratios[n] = std::norm(fr.gains[n]) / fr.noise_var;
    return ratios;
}

}  // namespace fmgsc
