// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The fmgsc authors

#pragma once

#include <vector>

#include "fmgsc/channel.hpp"

namespace fmgsc {

/// Static link parameters. The SNR gap is stored in linear units; dB
/// conversion happens once at the configuration boundary.
struct LinkParams {
    int num_subcarriers = 0;
    int num_groups = 1;
    double total_power = 1.0;
    double noise_var = 1.0;
    double gap = 1.0;

    void validate() const;
};

/// Subcarrier-to-group assignment. Label 0 marks the unused set S0,
/// labels 1..num_groups the transmission groups. Every group must be
/// nonempty; S0 may be empty.
struct Grouping {
    std::vector<int> labels;
    int num_groups = 0;

    /// Sizes indexed by label (index 0 = |S0|).
    std::vector<int> group_sizes() const;
    int used_count() const;
    void validate() const;
};

struct GroupMetrics {
    std::vector<double> sinr;  // gamma_k, k = 1..num_groups
    std::vector<double> rate;  // R_k in bps/Hz
    double sum_rate = 0.0;
};

/// Power per used subcarrier under equal allocation: P / |used|.
double equal_power(const Grouping& g, const LinkParams& params);

/// Effective post-equalization SINR of group k: 1 + gamma_k is the harmonic
/// mean of {1 + p * ratio_n} over the group's subcarriers.
double group_sinr(const Grouping& g, int k, const std::vector<double>& ratios, double p);

/// R_k = (M_k / N) * log2(1 + gamma_k / gap).
double group_rate(double sinr, int group_size, const LinkParams& params);

/// Equal power, then per-group SINRs and rates, then the sum rate.
GroupMetrics sum_rate(const Grouping& g, const std::vector<double>& ratios,
                      const LinkParams& params);
GroupMetrics sum_rate(const Grouping& g, const FrequencyResponse& fr,
                      const LinkParams& params);

/// Harmonic-mean bound: gamma_k <= group_size * (1 + min_snr) - 1.
double sinr_upper_bound(int group_size, double min_snr);

/// Reusable sum-rate evaluator with preallocated scratch buffers. Every
/// optimizer inner loop funnels through this arithmetic, so searches that
/// visit the same assignment agree on its objective bit for bit. Holds a
/// view of the ratio vector; the caller keeps it alive.
class RateEvaluator {
public:
    RateEvaluator(const std::vector<double>& ratios, const LinkParams& params);

    /// Sum rate of an assignment. Groups must be nonempty (not rechecked
    /// here); pass used_count when the caller already tracks it.
    double evaluate(const std::vector<int>& labels, GroupMetrics* metrics = nullptr);
    double evaluate(const std::vector<int>& labels, int used_count,
                    GroupMetrics* metrics);

private:
    const std::vector<double>& ratios_;
    LinkParams params_;
    std::vector<double> recip_;
    std::vector<int> sizes_;
};

}  // namespace fmgsc
