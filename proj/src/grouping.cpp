// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The fmgsc authors

#include "fmgsc/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

#include "fmgsc/rng.hpp"

namespace fmgsc {

namespace {

void bars_to_labels(const BarPlacement& b, const SortedSubcarriers& sorted, int num_groups,
                    std::vector<int>& labels) {
    const int n = static_cast<int>(sorted.order.size());
    labels.assign(n, 0);
    for (int k = 1; k <= num_groups; ++k) {
        const int begin = b.bars[k - 1];
        const int end = (k < num_groups) ? b.bars[k] : n;
        for (int m = begin; m < end; ++m) labels[sorted.order[m]] = k;
    }
}

// Objective for bar placements. Routes through the shared RateEvaluator so
// every optimizer agrees bit for bit on equal candidates.
double placement_rate(const BarPlacement& b, const SortedSubcarriers& sorted,
                      RateEvaluator& eval, int num_groups, std::vector<int>& scratch) {
    bars_to_labels(b, sorted, num_groups, scratch);
    const int n = static_cast<int>(sorted.order.size());
    return eval.evaluate(scratch, n - b.bars[0], nullptr);
}

OptimizerResult finish(Grouping grouping, const std::vector<double>& ratios,
                       const LinkParams& params, long long evaluations, int iterations) {
    OptimizerResult res;
    res.grouping = std::move(grouping);
    res.metrics = sum_rate(res.grouping, ratios, params);
    res.evaluations = evaluations;
    res.iterations = iterations;
    return res;
}

// Advance a strictly increasing K-combination over {first..n-1} in
// lexicographic order; false once exhausted. Positions below fixed_prefix
// never move.
bool next_combination(std::vector<int>& b, int n, int fixed_prefix) {
    const int k = static_cast<int>(b.size());
    for (int i = k - 1; i >= fixed_prefix; --i) {
        if (b[i] < n - k + i) {
            ++b[i];
            for (int j = i + 1; j < k; ++j) b[j] = b[j - 1] + 1;
            return true;
        }
    }
    return false;
}

// Initial bars split the sorted subcarriers into K+1 equal bands, the lowest
// band becoming S0. With nulling disabled the first bar is pinned to 0 and
// the rest reproduce the sorted equal-partition baseline exactly (remainder
// subcarriers go to the lowest groups), so gradient descent starts from that
// baseline and can only improve on it.
BarPlacement spgs_initial_bars(int n, int k, bool allow_null) {
    BarPlacement b;
    b.bars.resize(k);
    if (allow_null) {
        for (int i = 0; i < k; ++i)
            b.bars[i] = static_cast<int>(static_cast<long long>(n) * (i + 1) / (k + 1));
    } else {
        const int base = n / k;
        const int extra = n % k;
        for (int i = 0; i < k; ++i) b.bars[i] = i * base + std::min(i, extra);
    }
    return b;
}

void check_bars(const BarPlacement& b, int n) {
    int prev = -1;
    for (int bar : b.bars) {
        if (bar <= prev || bar >= n) throw std::invalid_argument("bar placement invalid");
        prev = bar;
    }
}

BarPlacement random_bars(int n, int k, bool allow_null, RandomStream& rng) {
    // Sample a strictly increasing k-subset of {0..n-1} (with bars[0]=0 when
    // nulling is disabled) by a partial Fisher-Yates over the candidates.
    const int lo = allow_null ? 0 : 1;
    std::vector<int> pool;
    for (int v = lo; v < n; ++v) pool.push_back(v);
    const int need = allow_null ? k : k - 1;
    for (int i = 0; i < need; ++i) {
        const auto j = i + static_cast<int>(rng.uniform_int(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    BarPlacement b;
    if (!allow_null) b.bars.push_back(0);
    b.bars.insert(b.bars.end(), pool.begin(), pool.begin() + need);
    std::sort(b.bars.begin(), b.bars.end());
    return b;
}

struct SpgsRun {
    BarPlacement bars;
    double rate = 0.0;
    long long evaluations = 0;
    int iterations = 0;
};

SpgsRun spgs_descend(BarPlacement b, const SortedSubcarriers& sorted, RateEvaluator& eval,
                     const LinkParams& params, bool allow_null, int max_outer,
                     std::vector<double>* trace) {
    const int n = params.num_subcarriers;
    const int k = params.num_groups;
    SpgsRun run;
    std::vector<int> scratch;
    double rate = placement_rate(b, sorted, eval, k, scratch);
    run.evaluations = 1;
    const int first_movable = allow_null ? 0 : 1;
    BarPlacement trial = b;
    while (run.iterations < max_outer) {
        bool changed = false;
        for (int i = first_movable; i < k; ++i) {
            const int left = (i == 0) ? -1 : b.bars[i - 1];
            const int right = (i == k - 1) ? n : b.bars[i + 1];
            int best_pos = b.bars[i];
            double best_rate = rate;
            for (int delta : {-1, +1}) {
                const int cand = b.bars[i] + delta;
                if (cand <= left || cand >= right) continue;
                trial.bars = b.bars;
                trial.bars[i] = cand;
                const double trial_rate = placement_rate(trial, sorted, eval, k, scratch);
                ++run.evaluations;
                if (trial_rate > best_rate) {
                    best_rate = trial_rate;
                    best_pos = cand;
                }
            }
            if (best_pos != b.bars[i]) {
                b.bars[i] = best_pos;
                rate = best_rate;
                changed = true;
            }
        }
        ++run.iterations;
        if (trace) trace->push_back(rate);
        if (!changed) break;
    }
    run.bars = std::move(b);
    run.rate = rate;
    return run;
}

}  // namespace

SortedSubcarriers sort_subcarriers(const std::vector<double>& ratios) {
    if (ratios.empty()) throw std::invalid_argument("sort_subcarriers: empty input");
    SortedSubcarriers s;
    s.order.resize(ratios.size());
    std::iota(s.order.begin(), s.order.end(), 0);
    std::stable_sort(s.order.begin(), s.order.end(),
                     [&](int a, int b) { return ratios[a] < ratios[b]; });
    s.sorted_ratios.resize(ratios.size());
    for (std::size_t m = 0; m < ratios.size(); ++m) s.sorted_ratios[m] = ratios[s.order[m]];
    return s;
}

Grouping bars_to_grouping(const BarPlacement& b, const SortedSubcarriers& sorted,
                          int num_groups) {
    const int n = static_cast<int>(sorted.order.size());
    if (static_cast<int>(b.bars.size()) != num_groups)
        throw std::invalid_argument("bars_to_grouping: bar count must equal group count");
    check_bars(b, n);
    Grouping g;
    g.num_groups = num_groups;
    bars_to_labels(b, sorted, num_groups, g.labels);
    return g;
}

OptimizerResult exhaustive_search(const FrequencyResponse& fr, const LinkParams& params,
                                  bool allow_null, int size_cap) {
    params.validate();
    const int n = params.num_subcarriers;
    const int k = params.num_groups;
    if (static_cast<int>(fr.gains.size()) != n)
        throw std::invalid_argument("exhaustive_search: response size mismatch");
    if (n > size_cap)
        throw std::invalid_argument("exhaustive_search: N=" + std::to_string(n) +
                                    " exceeds the size cap " + std::to_string(size_cap) +
                                    "; the assignment space grows as (K+1)^N");
    const std::vector<double> ratios = subcarrier_gain_ratios(fr);
    RateEvaluator eval(ratios, params);

    const int lowest = allow_null ? 0 : 1;
    std::vector<int> labels(n, lowest);
    std::vector<int> counts(k + 1, 0);
    counts[lowest] = n;

    long long evaluations = 0;
    double best_rate = -1.0;
    std::vector<int> best_labels;
    for (;;) {
        bool feasible = true;
        for (int grp = 1; grp <= k; ++grp) feasible = feasible && counts[grp] > 0;
        if (feasible) {
            ++evaluations;
            const double rate = eval.evaluate(labels, n - counts[0], nullptr);
            if (rate > best_rate) {
                best_rate = rate;
                best_labels = labels;
            }
        }
        // Odometer step in lexicographic label order, last position fastest.
        int pos = n - 1;
        while (pos >= 0 && labels[pos] == k) {
            --counts[k];
            labels[pos] = lowest;
            ++counts[lowest];
            --pos;
        }
        if (pos < 0) break;
        --counts[labels[pos]];
        ++labels[pos];
        ++counts[labels[pos]];
    }
    if (best_labels.empty())
        throw std::invalid_argument("exhaustive_search: no feasible assignment");
    return finish(Grouping{std::move(best_labels), k}, ratios, params, evaluations, 0);
}

OptimizerResult spos(const FrequencyResponse& fr, const LinkParams& params, bool allow_null) {
    params.validate();
    const int n = params.num_subcarriers;
    const int k = params.num_groups;
    if (static_cast<int>(fr.gains.size()) != n)
        throw std::invalid_argument("spos: response size mismatch");
    const std::vector<double> ratios = subcarrier_gain_ratios(fr);
    const SortedSubcarriers sorted = sort_subcarriers(ratios);
    RateEvaluator eval(ratios, params);
    std::vector<int> scratch;

    BarPlacement b;
    b.bars.resize(k);
    const int fixed_prefix = allow_null ? 0 : 1;
    std::iota(b.bars.begin(), b.bars.end(), 0);  // first combination, bars[0] = 0

    long long evaluations = 0;
    double best_rate = -1.0;
    BarPlacement best = b;
    do {
        ++evaluations;
        const double rate = placement_rate(b, sorted, eval, k, scratch);
        if (rate > best_rate) {
            best_rate = rate;
            best = b;
        }
    } while (next_combination(b.bars, n, fixed_prefix));
    return finish(bars_to_grouping(best, sorted, k), ratios, params, evaluations, 0);
}

OptimizerResult spgs(const FrequencyResponse& fr, const LinkParams& params, bool allow_null,
                     const SpgsOptions& options) {
    params.validate();
    const int n = params.num_subcarriers;
    const int k = params.num_groups;
    if (static_cast<int>(fr.gains.size()) != n)
        throw std::invalid_argument("spgs: response size mismatch");
    if (options.restarts < 1) throw std::invalid_argument("spgs: restarts must be >= 1");
    const std::vector<double> ratios = subcarrier_gain_ratios(fr);
    const SortedSubcarriers sorted = sort_subcarriers(ratios);
    RateEvaluator eval(ratios, params);
    const int max_outer = options.max_outer_iterations_per_n * n;

    SpgsRun best = spgs_descend(spgs_initial_bars(n, k, allow_null), sorted, eval, params,
                                allow_null, max_outer, options.iteration_rates);
    long long evaluations = best.evaluations;
    for (int r = 1; r < options.restarts; ++r) {
        RandomStream rng = RandomStream::derive(options.restart_seed, 0x5067u, r);
        SpgsRun run = spgs_descend(random_bars(n, k, allow_null, rng), sorted, eval, params,
                                   allow_null, max_outer, nullptr);
        evaluations += run.evaluations;
        if (run.rate > best.rate) best = std::move(run);
    }
    return finish(bars_to_grouping(best.bars, sorted, k), ratios, params, evaluations,
                  best.iterations);
}

namespace {

OptimizerResult equal_partition(const FrequencyResponse& fr, const LinkParams& params,
                                bool sorted_order) {
    params.validate();
    const int n = params.num_subcarriers;
    const int k = params.num_groups;
    if (static_cast<int>(fr.gains.size()) != n)
        throw std::invalid_argument("equal partition: response size mismatch");
    const std::vector<double> ratios = subcarrier_gain_ratios(fr);
    std::vector<int> position(n);
    std::iota(position.begin(), position.end(), 0);
    if (sorted_order) position = sort_subcarriers(ratios).order;

    Grouping g;
    g.num_groups = k;
    g.labels.assign(n, 0);
    const int base = n / k;
    const int extra = n % k;
    int at = 0;
    for (int grp = 1; grp <= k; ++grp) {
        const int size = base + (grp <= extra ? 1 : 0);
        for (int i = 0; i < size; ++i) g.labels[position[at++]] = grp;
    }
    return finish(std::move(g), ratios, params, 1, 0);
}

}  // namespace

OptimizerResult ep_us(const FrequencyResponse& fr, const LinkParams& params) {
    return equal_partition(fr, params, false);
}

OptimizerResult ep_ss(const FrequencyResponse& fr, const LinkParams& params) {
    return equal_partition(fr, params, true);
}

WaterFillingAllocation wf_ofdm_allocate(const FrequencyResponse& fr, const LinkParams& params,
                                        std::optional<double> granularity) {
    const int n = static_cast<int>(fr.gains.size());
    if (n < 1) throw std::invalid_argument("wf_ofdm: empty response");
    if (params.total_power <= 0.0) throw std::invalid_argument("wf_ofdm: total_power must be > 0");
    const std::vector<double> ratios = subcarrier_gain_ratios(fr);

    WaterFillingAllocation alloc;
    alloc.power.assign(n, 0.0);
    alloc.bits.assign(n, 0.0);

    // Per-bit power cost of subcarrier n is gap/ratio_n; dead subcarriers are
    // never loaded.
    std::vector<double> cost(n, std::numeric_limits<double>::infinity());
    bool any = false;
    for (int i = 0; i < n; ++i) {
        if (ratios[i] > 0.0) {
            cost[i] = params.gap / ratios[i];
            any = true;
        }
    }
    if (!any) return alloc;  // all subcarriers dead: zero rate, not an error

    if (!granularity) {
        double lo = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) lo = std::min(lo, cost[i]);
        double hi = lo + params.total_power;
        const auto budget = [&](double level) {
            double sum = 0.0;
            for (int i = 0; i < n; ++i)
                if (level > cost[i]) sum += level - cost[i];
            return sum;
        };
        double level = hi;
        for (int iter = 0; iter < 200; ++iter) {
            level = 0.5 * (lo + hi);
            const double used = budget(level);
            if (std::abs(used - params.total_power) <= 1e-10 * params.total_power) break;
            if (used > params.total_power)
                hi = level;
            else
                lo = level;
        }
        for (int i = 0; i < n; ++i) {
            const double p = std::max(0.0, level - cost[i]);
            alloc.power[i] = p;
            if (p > 0.0) {
                alloc.bits[i] = std::log2(1.0 + p * ratios[i] / params.gap);
                alloc.rate += alloc.bits[i];
            }
        }
        alloc.rate /= n;
        return alloc;
    }

    const double g = *granularity;
    if (g <= 0.0) throw std::invalid_argument("wf_ofdm: granularity must be > 0");
    // Greedy loading: always grant the increment with the cheapest marginal
    // power. Optimal here because the per-subcarrier power curves are convex
    // in the bit level.
    std::vector<int> steps(n, 0);
    const auto marginal = [&](int i) {
        const double b = steps[i] * g;
        return (std::exp2(b + g) - std::exp2(b)) * cost[i];
    };
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    for (int i = 0; i < n; ++i)
        if (ratios[i] > 0.0) heap.emplace(marginal(i), i);
    double remaining = params.total_power;
    while (!heap.empty()) {
        const auto [dp, i] = heap.top();
        if (dp > remaining) break;  // cheapest increment unaffordable: done
        heap.pop();
        remaining -= dp;
        ++steps[i];
        heap.emplace(marginal(i), i);
    }
    for (int i = 0; i < n; ++i) {
        alloc.bits[i] = steps[i] * g;
        if (steps[i] > 0) alloc.power[i] = (std::exp2(alloc.bits[i]) - 1.0) * cost[i];
        alloc.rate += alloc.bits[i];
    }
    alloc.rate /= n;
    return alloc;
}

double wf_ofdm_rate(const FrequencyResponse& fr, const LinkParams& params,
                    std::optional<double> granularity) {
    return wf_ofdm_allocate(fr, params, granularity).rate;
}

Grouping single_group_all_used(int n_subcarriers) {
    Grouping g;
    g.num_groups = 1;
    g.labels.assign(n_subcarriers, 1);
    return g;
}

double scfde_rate(const FrequencyResponse& fr, const LinkParams& params) {
    LinkParams single = params;
    single.num_groups = 1;
    single.validate();
    return sum_rate(single_group_all_used(single.num_subcarriers), fr, single).sum_rate;
}

}  // namespace fmgsc
