// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The fmgsc authors

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fmgsc/linkmodel.hpp"

namespace fmgsc {

/// Subcarrier indices sorted by increasing SNR ratio, plus the sorted ratios.
struct SortedSubcarriers {
    std::vector<int> order;           // order[m] = original index of m-th smallest
    std::vector<double> sorted_ratios;
};

/// K strictly increasing cut positions over the sorted subcarriers, each in
/// {0..N-1}. The band below bars[0] is S0; band k spans sorted positions
/// [bars[k-1], bars[k]) with an implicit sentinel of N after the last bar.
struct BarPlacement {
    std::vector<int> bars;
};

struct OptimizerResult {
    Grouping grouping;
    GroupMetrics metrics;
    long long evaluations = 0;  // objective evaluations
    int iterations = 0;         // outer iterations (coordinate search only)
};

/// Stable ascending sort; ties keep the lower original index first.
SortedSubcarriers sort_subcarriers(const std::vector<double>& ratios);

/// Expand a bar placement into a full subcarrier-to-group assignment.
Grouping bars_to_grouping(const BarPlacement& b, const SortedSubcarriers& sorted,
                          int num_groups);

/// Global search over all (K+1)^N assignments (K^N when nulling is disabled),
/// skipping assignments with an empty group. First assignment found in
/// lexicographic label order wins ties. Refuses N above size_cap.
OptimizerResult exhaustive_search(const FrequencyResponse& fr, const LinkParams& params,
                                  bool allow_null, int size_cap = 14);

/// Scan of every bar placement over the SNR-sorted subcarriers: C(N,K)
/// placements, or C(N-1,K-1) with bars[0] pinned to 0 when nulling is
/// disabled. Lexicographically smallest placement wins ties.
OptimizerResult spos(const FrequencyResponse& fr, const LinkParams& params, bool allow_null);

struct SpgsOptions {
    int restarts = 1;                      // 1 = deterministic initializer only
    std::uint64_t restart_seed = 0;        // stream for random restarts
    int max_outer_iterations_per_n = 10;   // safety cap factor
    std::vector<double>* iteration_rates = nullptr;  // optional per-pass trace
};

/// Coordinate search over bar positions: each pass moves every bar at most
/// one slot toward the best objective, stopping at the first pass with no
/// change (or the safety cap).
OptimizerResult spgs(const FrequencyResponse& fr, const LinkParams& params, bool allow_null,
                     const SpgsOptions& options = {});

/// Equal partition of the subcarriers in original index order, no nulling.
OptimizerResult ep_us(const FrequencyResponse& fr, const LinkParams& params);

/// Equal partition of the SNR-sorted subcarriers, no nulling.
OptimizerResult ep_ss(const FrequencyResponse& fr, const LinkParams& params);

struct WaterFillingAllocation {
    std::vector<double> power;  // per subcarrier
    std::vector<double> bits;   // per subcarrier (continuous or granular)
    double rate = 0.0;          // bps/Hz
};

/// Gap-adjusted water-filling over all subcarriers. With a granularity the
/// allocation is greedy incremental bit loading on that grid; without one it
/// is the continuous water level found by bisection on the power budget.
WaterFillingAllocation wf_ofdm_allocate(const FrequencyResponse& fr, const LinkParams& params,
                                        std::optional<double> granularity);
double wf_ofdm_rate(const FrequencyResponse& fr, const LinkParams& params,
                    std::optional<double> granularity);

/// Rate of the single-group, all-subcarriers configuration.
double scfde_rate(const FrequencyResponse& fr, const LinkParams& params);

/// The K=1, S0-empty grouping.
Grouping single_group_all_used(int n_subcarriers);

}  // namespace fmgsc
