// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The fmgsc authors

#include "fmgsc/waveform.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fmgsc {

std::vector<std::vector<int>> mapping_indices(const Grouping& g) {
    g.validate();
    std::vector<std::vector<int>> indices(g.num_groups);
    for (std::size_t n = 0; n < g.labels.size(); ++n) {
        const int k = g.labels[n];
        if (k > 0) indices[k - 1].push_back(static_cast<int>(n));
    }
    return indices;
}

TxBlock modulate(const Grouping& g, const std::vector<cvec>& symbols, double p, int cp_len) {
    if (p <= 0.0) throw std::invalid_argument("modulate: power must be > 0");
    const auto indices = mapping_indices(g);
    if (symbols.size() != indices.size())
        throw std::invalid_argument("modulate: need one symbol vector per group");
    const int n = static_cast<int>(g.labels.size());

    TxBlock blk;
    blk.symbols = symbols;
    blk.freq.assign(n, cplx{});
    const double scale = std::sqrt(p);
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (symbols[k].size() != indices[k].size())
            throw std::invalid_argument("modulate: symbol vector length must match group size");
        const cvec spread = dft(symbols[k]);
        for (std::size_t j = 0; j < indices[k].size(); ++j)
            blk.freq[indices[k][j]] = scale * spread[j];
    }
    blk.time_signal = idft(blk.freq);
    blk.cp_len = cp_len;
    blk.cp_signal = add_cp(blk.time_signal, cp_len);
    return blk;
}

cvec add_cp(const cvec& x, int cp_len) {
    const int n = static_cast<int>(x.size());
    if (cp_len < 0 || cp_len > n) throw std::invalid_argument("add_cp: need 0 <= cp_len <= N");
    cvec out;
    out.reserve(x.size() + cp_len);
    out.insert(out.end(), x.end() - cp_len, x.end());
    out.insert(out.end(), x.begin(), x.end());
    return out;
}

cvec remove_cp(const cvec& samples, int cp_len) {
    if (cp_len < 0 || cp_len > static_cast<int>(samples.size()))
        throw std::invalid_argument("remove_cp: prefix longer than the input");
    return cvec(samples.begin() + cp_len, samples.end());
}

cvec apply_channel(const TxBlock& tx, const ChannelRealization& ch, double noise_var,
                   RandomStream& rng) {
    const int taps = static_cast<int>(ch.taps.size());
    if (taps < 1) throw std::invalid_argument("apply_channel: empty channel");
    if (tx.cp_len < taps - 1)
        throw std::invalid_argument("apply_channel: cyclic prefix shorter than channel memory");
    if (noise_var < 0.0) throw std::invalid_argument("apply_channel: noise_var must be >= 0");
    const int n = static_cast<int>(tx.time_signal.size());

    cvec y(n);
    for (int m = 0; m < n; ++m) {
        const int pos = m + tx.cp_len;
        cplx acc{};
        for (int l = 0; l < taps; ++l) acc += ch.taps[l] * tx.cp_signal[pos - l];
        y[m] = acc;
    }
    if (noise_var > 0.0)
        for (auto& sample : y) sample += rng.cscg(noise_var);
    return y;
}

std::vector<cvec> mmse_fde(const cvec& received, const Grouping& g,
                           const FrequencyResponse& fr, double p) {
    const auto indices = mapping_indices(g);
    if (received.size() != g.labels.size() || fr.gains.size() != g.labels.size())
        throw std::invalid_argument("mmse_fde: block/grouping/response size mismatch");
    if (p <= 0.0) throw std::invalid_argument("mmse_fde: power must be > 0");

    const cvec spectrum = dft(received);
    const double scale = std::sqrt(p);
    std::vector<cvec> out;
    out.reserve(indices.size());
    for (const auto& group : indices) {
        cvec z(group.size());
        for (std::size_t j = 0; j < group.size(); ++j) {
            const cplx h = fr.gains[group[j]];
            const double den = p * std::norm(h) + fr.noise_var;
            const cplx t = den > 0.0 ? scale * std::conj(h) / den : cplx{};
            z[j] = t * spectrum[group[j]];
        }
        out.push_back(idft(z));
    }
    return out;
}

std::vector<double> measure_sinr_empirical(const Grouping& g, const ChannelRealization& ch,
                                           const FrequencyResponse& fr,
                                           const LinkParams& params, int num_blocks,
                                           RandomStream& rng) {
    params.validate();
    if (num_blocks < 1) throw std::invalid_argument("measure_sinr: need num_blocks >= 1");
    const double p = equal_power(g, params);
    const int cp_len = static_cast<int>(ch.taps.size());
    const auto indices = mapping_indices(g);
    const int num_groups = g.num_groups;
    const cvec qpsk = qam_constellation(2.0, 1.0);

    std::vector<cplx> cross(num_groups, cplx{});
    std::vector<double> out_power(num_groups, 0.0);
    std::vector<double> in_power(num_groups, 0.0);

    std::vector<cvec> symbols(num_groups);
    for (int block = 0; block < num_blocks; ++block) {
        for (int k = 0; k < num_groups; ++k) {
            symbols[k].resize(indices[k].size());
            for (auto& s : symbols[k]) s = draw_symbol(qpsk, rng);
        }
        const TxBlock tx = modulate(g, symbols, p, cp_len);
        const cvec y = apply_channel(tx, ch, params.noise_var, rng);
        const auto est = mmse_fde(y, g, fr, p);
        for (int k = 0; k < num_groups; ++k) {
            for (std::size_t j = 0; j < est[k].size(); ++j) {
                cross[k] += est[k][j] * std::conj(symbols[k][j]);
                out_power[k] += std::norm(est[k][j]);
                in_power[k] += std::norm(symbols[k][j]);
            }
        }
    }

    std::vector<double> sinr(num_groups);
    for (int k = 0; k < num_groups; ++k) {
        const double signal = std::norm(cross[k]) / in_power[k];
        const double noise = out_power[k] - signal;
        sinr[k] = noise > 0.0 ? signal / noise : std::numeric_limits<double>::infinity();
    }
    return sinr;
}

double papr_of_block(const cvec& samples) {
    const double mean = mean_power(samples);
    if (samples.empty() || mean <= 0.0)
        throw std::invalid_argument("papr_of_block: empty or all-zero block");
    return peak_power(samples) / mean;
}

double rrc_weight(double x, double rolloff) {
    const double lo = 0.5 * (1.0 - rolloff);
    const double hi = 0.5 * (1.0 + rolloff);
    if (x <= lo) return 1.0;
    if (x >= hi) return 0.0;
    return std::sqrt(0.5 * (1.0 + std::cos(std::numbers::pi * (x - lo) / rolloff)));
}

cvec shape_spectrum(const cvec& freq, int oversample, double rolloff) {
    const int n = static_cast<int>(freq.size());
    if (n < 1) throw std::invalid_argument("shape_spectrum: empty spectrum");
    if (oversample < 1) throw std::invalid_argument("shape_spectrum: oversample must be >= 1");
    if (rolloff < 0.0 || rolloff > 1.0)
        throw std::invalid_argument("shape_spectrum: rolloff must be in [0, 1]");
    const int grid = oversample * n;
    cvec spec(grid, cplx{});
    for (int i = 0; i < n; ++i) {
        const int nu = i < (n + 1) / 2 ? i : i - n;
        const double w = rrc_weight(std::abs(nu) / static_cast<double>(n), rolloff);
        spec[(nu + grid) % grid] = freq[i] * w;
    }
    return spec;
}

ShapedOutput synthesize_shaped(const std::vector<TxBlock>& blocks, int oversample,
                               double rolloff) {
    if (blocks.empty()) throw std::invalid_argument("synthesize_shaped: no blocks");
    ShapedOutput out;
    out.stream.reserve(blocks.size() * blocks.front().freq.size() * oversample);
    double sum = 0.0;
    for (const TxBlock& blk : blocks) {
        const cvec shaped = idft(shape_spectrum(blk.freq, oversample, rolloff));
        const double papr = papr_of_block(shaped);
        out.stats.samples.push_back(papr);
        sum += papr;
        out.stream.insert(out.stream.end(), shaped.begin(), shaped.end());
    }
    out.stats.block_count = static_cast<int>(blocks.size());
    out.stats.mean_linear = sum / out.stats.block_count;
    out.stats.mean_db = 10.0 * std::log10(out.stats.mean_linear);
    return out;
}

cvec qam_constellation(double bits_per_symbol, double granularity) {
    if (!(bits_per_symbol >= 2.0 - 1e-9))
        throw std::invalid_argument("qam_constellation: need at least 2 bits per symbol");
    double bits = bits_per_symbol;
    if (granularity > 0.0) bits = std::round(bits / granularity) * granularity;
    const int order = std::max(2, static_cast<int>(std::ceil(bits - 1e-9)));

    cvec points;
    points.reserve(std::size_t{1} << order);
    const auto emit = [&](double re, double im) { points.emplace_back(re, im); };
    if (order % 2 == 0) {
        const int side = 1 << (order / 2);
        for (int i = 0; i < side; ++i)
            for (int j = 0; j < side; ++j) emit(2 * i - side + 1, 2 * j - side + 1);
    } else if (order == 3) {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 2; ++j) emit(2 * i - 3, 2 * j - 1);
    } else {
        // Cross constellation: a 6w x 6w grid of odd levels minus the four
        // w x w corner blocks, w = 2^((order-5)/2); 32 w^2 = 2^order points.
        const int corner = 1 << ((order - 5) / 2);
        const int side = 6 * corner;
        const auto in_corner = [&](int u) { return u < corner || u >= side - corner; };
        for (int i = 0; i < side; ++i)
            for (int j = 0; j < side; ++j)
                if (!(in_corner(i) && in_corner(j))) emit(2 * i - side + 1, 2 * j - side + 1);
    }

    double mean = 0.0;
    for (const cplx& pt : points) mean += std::norm(pt);
    mean /= static_cast<double>(points.size());
    const double scale = 1.0 / std::sqrt(mean);
    for (cplx& pt : points) pt *= scale;
    return points;
}

cplx draw_symbol(const cvec& constellation, RandomStream& rng) {
    if (constellation.empty()) throw std::invalid_argument("draw_symbol: empty constellation");
    return constellation[rng.uniform_int(constellation.size())];
}

}  // namespace fmgsc
