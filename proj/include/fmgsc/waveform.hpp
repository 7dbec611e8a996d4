// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The fmgsc authors

#pragma once

#include <vector>

#include "fmgsc/channel.hpp"
#include "fmgsc/linkmodel.hpp"
#include "fmgsc/numerics.hpp"
#include "fmgsc/rng.hpp"

namespace fmgsc {

/// Ordered subcarrier indices of each group k = 1..K. Column j of the
/// group-k mapping matrix has its single 1 at row indices[k-1][j].
std::vector<std::vector<int>> mapping_indices(const Grouping& g);

/// One transmitted block. freq holds the N-point spectrum right before the
/// final inverse transform; it is what pulse shaping re-samples.
struct TxBlock {
    std::vector<cvec> symbols;  // per-group unit-variance constellation points
    cvec freq;                  // length N
    cvec time_signal;           // length N
    cvec cp_signal;             // length N + cp_len
    int cp_len = 0;
};

/// DFT-spread modulation: per group, spread the symbols with a DFT of the
/// group size, scale by sqrt(p), map onto the group's subcarriers, then
/// inverse-transform the assembled spectrum and prepend the cyclic prefix.
TxBlock modulate(const Grouping& g, const std::vector<cvec>& symbols, double p, int cp_len);

cvec add_cp(const cvec& x, int cp_len);
cvec remove_cp(const cvec& samples, int cp_len);

/// Linear convolution of the CP-extended block with the channel taps,
/// evaluated at the payload positions (CP absorbed), plus CSCG noise of the
/// given per-sample variance. The CP must cover the channel memory.
cvec apply_channel(const TxBlock& tx, const ChannelRealization& ch, double noise_var,
                   RandomStream& rng);

/// Per-group MMSE frequency-domain equalization: take the N-point DFT of the
/// received block, weight bin n by sqrt(p) h_n* / (p |h_n|^2 + sigma^2),
/// gather each group's bins and inverse-transform at the group size.
std::vector<cvec> mmse_fde(const cvec& received, const Grouping& g,
                           const FrequencyResponse& fr, double p);

/// Monte-Carlo SINR of every group through the full modulate/channel/FDE
/// chain with QPSK symbols. Per group the equalizer output is decomposed as
/// y = a x + e with a the least-squares gain; SINR = |a|^2 E|x|^2 / E|e|^2.
std::vector<double> measure_sinr_empirical(const Grouping& g, const ChannelRealization& ch,
                                           const FrequencyResponse& fr,
                                           const LinkParams& params, int num_blocks,
                                           RandomStream& rng);

/// Peak sample power over mean sample power.
double papr_of_block(const cvec& samples);

/// Root-raised-cosine magnitude response at normalized frequency x >= 0
/// (cycles per symbol): 1 below (1-rolloff)/2, 0 above (1+rolloff)/2, the
/// square-root raised-cosine taper in between.
double rrc_weight(double x, double rolloff);

/// Re-sample a block's N-point spectrum onto an oversample*N grid with the
/// bins centered around DC and weighted by the RRC response.
cvec shape_spectrum(const cvec& freq, int oversample, double rolloff);

struct PaprStats {
    std::vector<double> samples;  // per-block PAPR, linear
    double mean_linear = 0.0;
    double mean_db = 0.0;
    int block_count = 0;
};

struct ShapedOutput {
    cvec stream;  // concatenated shaped blocks, oversample*N samples each
    PaprStats stats;
};

/// Shape every block, concatenate the oversampled time samples, and collect
/// per-block PAPR statistics.
ShapedOutput synthesize_shaped(const std::vector<TxBlock>& blocks, int oversample,
                               double rolloff);

/// Unit-energy M-QAM with M = 2^ceil(bits) and at least 4 points. Bits are
/// snapped to the loading granularity first so values like 2 + 1e-16 do not
/// jump an order. Orders 8 and odd >= 5 use the rectangular and cross
/// layouts; even orders are square.
cvec qam_constellation(double bits_per_symbol, double granularity);

/// Uniform draw from a constellation.
cplx draw_symbol(const cvec& constellation, RandomStream& rng);

}  // namespace fmgsc
