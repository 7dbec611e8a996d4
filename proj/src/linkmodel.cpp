// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The fmgsc authors

#include "fmgsc/linkmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fmgsc {

void LinkParams::validate() const {
    if (num_subcarriers < 1)
        throw std::invalid_argument("link params: num_subcarriers must be >= 1");
    if (num_groups < 1 || num_groups > num_subcarriers)
        throw std::invalid_argument("link params: need 1 <= num_groups <= num_subcarriers");
    if (total_power <= 0.0) throw std::invalid_argument("link params: total_power must be > 0");
    if (noise_var <= 0.0) throw std::invalid_argument("link params: noise_var must be > 0");
    if (gap < 1.0) throw std::invalid_argument("link params: gap must be >= 1 (linear)");
}

std::vector<int> Grouping::group_sizes() const {
    std::vector<int> sizes(num_groups + 1, 0);
    for (int label : labels) ++sizes[label];
    return sizes;
}

int Grouping::used_count() const {
    int used = 0;
    for (int label : labels) used += label != 0;
    return used;
}

void Grouping::validate() const {
    if (labels.empty()) throw std::invalid_argument("grouping: empty assignment");
    if (num_groups < 1) throw std::invalid_argument("grouping: num_groups must be >= 1");
    std::vector<int> sizes(num_groups + 1, 0);
    for (int label : labels) {
        if (label < 0 || label > num_groups)
            throw std::invalid_argument("grouping: label out of range");
        ++sizes[label];
    }
    for (int k = 1; k <= num_groups; ++k)
        if (sizes[k] == 0) throw std::invalid_argument("grouping: empty group");
}

double equal_power(const Grouping& g, const LinkParams& params) {
    const int used = g.used_count();
    if (used == 0) throw std::invalid_argument("equal_power: all subcarriers unused");
    return params.total_power / used;
}

double group_sinr(const Grouping& g, int k, const std::vector<double>& ratios, double p) {
    if (k < 1 || k > g.num_groups) throw std::invalid_argument("group_sinr: bad group index");
    if (p <= 0.0) throw std::invalid_argument("group_sinr: power must be > 0");
    double recip = 0.0;
    int size = 0;
    for (std::size_t n = 0; n < g.labels.size(); ++n) {
        if (g.labels[n] != k) continue;
        recip += 1.0 / (1.0 + p * ratios[n]);
        ++size;
    }
    if (size == 0) throw std::invalid_argument("group_sinr: empty group");
    return static_cast<double>(size) / recip - 1.0;
}

double group_rate(double sinr, int group_size, const LinkParams& params) {
    if (sinr < 0.0) sinr = 0.0;
    return (static_cast<double>(group_size) / params.num_subcarriers) *
           std::log2(1.0 + sinr / params.gap);
}

GroupMetrics sum_rate(const Grouping& g, const std::vector<double>& ratios,
                      const LinkParams& params) {
    g.validate();
    if (ratios.size() != g.labels.size())
        throw std::invalid_argument("sum_rate: ratio/assignment length mismatch");
    if (g.num_groups != params.num_groups)
        throw std::invalid_argument("sum_rate: grouping/params group count mismatch");
    RateEvaluator eval(ratios, params);
    GroupMetrics m;
    eval.evaluate(g.labels, g.used_count(), &m);
    return m;
}

GroupMetrics sum_rate(const Grouping& g, const FrequencyResponse& fr,
                      const LinkParams& params) {
    return sum_rate(g, subcarrier_gain_ratios(fr), params);
}

RateEvaluator::RateEvaluator(const std::vector<double>& ratios, const LinkParams& params)
    : ratios_(ratios), params_(params) {
    params_.validate();
    if (static_cast<int>(ratios.size()) != params.num_subcarriers)
        throw std::invalid_argument("rate evaluator: ratio vector length mismatch");
    recip_.resize(params.num_groups + 1);
    sizes_.resize(params.num_groups + 1);
}

double RateEvaluator::evaluate(const std::vector<int>& labels, GroupMetrics* metrics) {
    int used = 0;
    for (int label : labels) used += label != 0;
    return evaluate(labels, used, metrics);
}

double RateEvaluator::evaluate(const std::vector<int>& labels, int used_count,
                               GroupMetrics* metrics) {
    const double p = params_.total_power / used_count;
    const int num_groups = params_.num_groups;
    std::fill(recip_.begin(), recip_.end(), 0.0);
    std::fill(sizes_.begin(), sizes_.end(), 0);
    for (std::size_t n = 0; n < labels.size(); ++n) {
        const int k = labels[n];
        if (k == 0) continue;
        recip_[k] += 1.0 / (1.0 + p * ratios_[n]);
        ++sizes_[k];
    }
    if (metrics != nullptr) {
        metrics->sinr.resize(num_groups);
        metrics->rate.resize(num_groups);
    }
    double total = 0.0;
    for (int k = 1; k <= num_groups; ++k) {
        const double sinr = static_cast<double>(sizes_[k]) / recip_[k] - 1.0;
        const double rate = group_rate(sinr, sizes_[k], params_);
        if (metrics != nullptr) {
            metrics->sinr[k - 1] = sinr;
            metrics->rate[k - 1] = rate;
        }
        total += rate;
    }
    if (metrics != nullptr) metrics->sum_rate = total;
    return total;
}

double sinr_upper_bound(int group_size, double min_snr) {
    if (group_size < 1) throw std::invalid_argument("sinr_upper_bound: group_size must be >= 1");
    if (min_snr < 0.0) throw std::invalid_argument("sinr_upper_bound: min_snr must be >= 0");
    return group_size * (1.0 + min_snr) - 1.0;
}

}  // namespace fmgsc
