// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The fmgsc authors

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <doctest.h>

#include "fmgsc/grouping.hpp"
#include "fmgsc/rng.hpp"

using namespace fmgsc;

namespace {

// Response whose gain ratios are (up to one rounding) the given values at
// unit noise.
FrequencyResponse response_for_ratios(const std::vector<double>& ratios) {
    FrequencyResponse fr;
    fr.noise_var = 1.0;
    for (double r : ratios) fr.gains.emplace_back(std::sqrt(r), 0.0);
    return fr;
}

LinkParams make_params(int n, int k, double power, double gap = 1.0) {
    LinkParams params;
    params.num_subcarriers = n;
    params.num_groups = k;
    params.total_power = power;
    params.noise_var = 1.0;
    params.gap = gap;
    return params;
}

FrequencyResponse random_response(int n, int taps, RandomStream& rng, double noise_var = 1.0) {
    const auto pdp = PowerDelayProfile::exponential(taps, 0.7);
    const auto ch = sample_channel(pdp, rng);
    return frequency_response(ch, n, noise_var);
}

}  // namespace

TEST_CASE("sort is ascending and stable on ties") {
    const auto s = sort_subcarriers({2.0, 1.0, 2.0, 0.5});
    CHECK(s.order == std::vector<int>{3, 1, 0, 2});
    CHECK(s.sorted_ratios == std::vector<double>{0.5, 1.0, 2.0, 2.0});
    CHECK_THROWS_AS(sort_subcarriers({}), std::invalid_argument);
}

TEST_CASE("bar placements expand to banded assignments") {
    const auto s = sort_subcarriers({1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
    const auto g = bars_to_grouping(BarPlacement{{1, 4}}, s, 2);
    CHECK(g.labels == std::vector<int>{0, 1, 1, 1, 2, 2});
    CHECK(g.num_groups == 2);

    // Bands follow sorted positions, not original indices.
    const auto shuffled = sort_subcarriers({6.0, 1.0, 4.0, 2.0});
    const auto h = bars_to_grouping(BarPlacement{{0, 2}}, shuffled, 2);
    CHECK(h.labels == std::vector<int>{2, 1, 2, 1});

    CHECK_THROWS_AS(bars_to_grouping(BarPlacement{{1}}, s, 2), std::invalid_argument);
    CHECK_THROWS_AS(bars_to_grouping(BarPlacement{{4, 2}}, s, 2), std::invalid_argument);
    CHECK_THROWS_AS(bars_to_grouping(BarPlacement{{0, 6}}, s, 2), std::invalid_argument);
}

TEST_CASE("single-group scan picks the best prefix drop") {
    // Ratios 1..4 at P = 4: dropping the weakest subcarrier wins.
    const auto fr = response_for_ratios({1.0, 2.0, 3.0, 4.0});
    const auto params = make_params(4, 1, 4.0);

    const auto with_null = spos(fr, params, true);
    CHECK(with_null.evaluations == 4);
    CHECK(with_null.grouping.labels == std::vector<int>{0, 1, 1, 1});
    CHECK(with_null.metrics.sum_rate == doctest::Approx(1.687586304511012).epsilon(1e-14));

    const auto pinned = spos(fr, params, false);
    CHECK(pinned.evaluations == 1);
    CHECK(pinned.grouping.labels == std::vector<int>{1, 1, 1, 1});
    CHECK(pinned.metrics.sum_rate == doctest::Approx(1.6401040549136172).epsilon(1e-14));
    CHECK(scfde_rate(fr, params) == pinned.metrics.sum_rate);
}

TEST_CASE("global search agrees on the four-subcarrier instance") {
    const auto fr = response_for_ratios({1.0, 2.0, 3.0, 4.0});
    const auto params = make_params(4, 1, 4.0);

    const auto es = exhaustive_search(fr, params, true);
    CHECK(es.evaluations == 15);  // 2^4 label vectors minus the all-null one
    CHECK(es.grouping.labels == std::vector<int>{0, 1, 1, 1});
    CHECK(es.metrics.sum_rate == spos(fr, params, true).metrics.sum_rate);

    const auto full = exhaustive_search(fr, params, false);
    CHECK(full.evaluations == 1);
    CHECK(full.metrics.sum_rate == doctest::Approx(1.6401040549136172).epsilon(1e-14));
}

TEST_CASE("global search refuses oversized instances") {
    const auto fr = response_for_ratios(std::vector<double>(15, 1.0));
    const auto params = make_params(15, 2, 15.0);
    try {
        exhaustive_search(fr, params, true);
        FAIL("expected a size-cap rejection");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("15") != std::string::npos);
        CHECK(msg.find("14") != std::string::npos);
    }
    CHECK_NOTHROW(exhaustive_search(fr, params, true, 15));
}

TEST_CASE("bar scan matches an independent bar enumeration") {
    RandomStream rng(41);
    for (int rep = 0; rep < 30; ++rep) {
        const int n = 6 + static_cast<int>(rng.uniform_int(5));
        const int k = 1 + static_cast<int>(rng.uniform_int(2));
        const auto fr = random_response(n, 4, rng);
        const auto params = make_params(n, k, static_cast<double>(n) * 2.0);

        const auto res = spos(fr, params, true);

        // Reference: walk every strictly increasing bar tuple ourselves.
        const auto ratios = subcarrier_gain_ratios(fr);
        const auto sorted = sort_subcarriers(ratios);
        double best = -1.0;
        long long count = 0;
        std::vector<int> bars(k);
        const auto visit = [&](const auto& self, int depth, int lo) -> void {
            if (depth == k) {
                ++count;
                const auto g = bars_to_grouping(BarPlacement{bars}, sorted, k);
                const double rate = sum_rate(g, ratios, params).sum_rate;
                if (rate > best) best = rate;
                return;
            }
            for (int b = lo; b < n; ++b) {
                bars[depth] = b;
                self(self, depth + 1, b + 1);
            }
        };
        visit(visit, 0, 0);
        CHECK(count == res.evaluations);
        CHECK(res.metrics.sum_rate == best);
    }
}

TEST_CASE("global search dominates the bar scan") {
    RandomStream rng(42);
    for (int rep = 0; rep < 15; ++rep) {
        const int n = 6 + static_cast<int>(rng.uniform_int(3));
        const int k = 1 + static_cast<int>(rng.uniform_int(2));
        const auto fr = random_response(n, 3, rng);
        const auto params = make_params(n, k, static_cast<double>(n));
        for (bool allow_null : {false, true}) {
            const auto es = exhaustive_search(fr, params, allow_null);
            const auto scan = spos(fr, params, allow_null);
            CHECK(es.metrics.sum_rate >= scan.metrics.sum_rate);
        }
    }
}

TEST_CASE("coordinate search improves monotonically and stops") {
    RandomStream rng(43);
    for (int rep = 0; rep < 25; ++rep) {
        const int n = 16;
        const int k = 3;
        const auto fr = random_response(n, 6, rng);
        const auto params = make_params(n, k, static_cast<double>(n) * 4.0);
        for (bool allow_null : {false, true}) {
            std::vector<double> trace;
            SpgsOptions opts;
            opts.iteration_rates = &trace;
            const auto res = spgs(fr, params, allow_null, opts);
            REQUIRE(!trace.empty());
            for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] >= trace[i - 1]);
            CHECK(res.iterations == static_cast<int>(trace.size()));
            CHECK(res.iterations <= 10 * n);
            CHECK(res.metrics.sum_rate == trace.back());
        }
    }
}

TEST_CASE("coordinate search never falls below the sorted equal partition") {
    RandomStream rng(44);
    for (int rep = 0; rep < 25; ++rep) {
        const int n = 12 + static_cast<int>(rng.uniform_int(10));
        const int k = 2 + static_cast<int>(rng.uniform_int(3));
        const auto fr = random_response(n, 5, rng);
        const auto params = make_params(n, k, static_cast<double>(n) * 2.0);
        const auto descent = spgs(fr, params, false);
        const auto baseline = ep_ss(fr, params);
        CHECK(descent.metrics.sum_rate >= baseline.metrics.sum_rate);
    }
}

TEST_CASE("random restarts only help") {
    RandomStream rng(45);
    for (int rep = 0; rep < 10; ++rep) {
        const auto fr = random_response(20, 6, rng);
        const auto params = make_params(20, 3, 40.0);
        const auto single = spgs(fr, params, true);
        SpgsOptions opts;
        opts.restarts = 5;
        opts.restart_seed = 99;
        const auto multi = spgs(fr, params, true, opts);
        CHECK(multi.metrics.sum_rate >= single.metrics.sum_rate);
        CHECK(multi.evaluations > single.evaluations);
    }
}

TEST_CASE("equal partitions place the remainder in the lowest groups") {
    const auto fr = response_for_ratios({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    const auto params = make_params(10, 3, 10.0);
    const auto us = ep_us(fr, params);
    CHECK(us.grouping.labels == std::vector<int>{1, 1, 1, 1, 2, 2, 2, 3, 3, 3});

    // Ascending ratios: sorted order is the identity, so both agree.
    const auto ss = ep_ss(fr, params);
    CHECK(ss.grouping.labels == us.grouping.labels);

    // Shuffled ratios: the sorted split tracks SNR, not index.
    const auto shuffled = response_for_ratios({10, 1, 8, 3, 6, 5, 4, 7, 2, 9});
    const auto ss2 = ep_ss(shuffled, params);
    // Four smallest ratios (1, 2, 3, 4) sit at indices 1, 8, 3, 6.
    CHECK(ss2.grouping.labels == std::vector<int>{3, 1, 3, 1, 2, 2, 1, 2, 1, 3});
}

TEST_CASE("water filling splits power evenly on a flat channel") {
    FrequencyResponse fr;
    fr.noise_var = 0.5;
    fr.gains.assign(8, cplx(1.0, 1.0));  // |h|^2 = 2 everywhere, ratio = 4
    auto params = make_params(8, 1, 16.0, 2.0);
    const auto alloc = wf_ofdm_allocate(fr, params, std::nullopt);
    const double expected_rate = std::log2(1.0 + 2.0 * 4.0 / 2.0);
    for (int i = 0; i < 8; ++i) CHECK(alloc.power[i] == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(alloc.rate == doctest::Approx(expected_rate).epsilon(1e-9));
    CHECK(wf_ofdm_rate(fr, params, std::nullopt) == alloc.rate);
}

TEST_CASE("water filling skips dead subcarriers") {
    FrequencyResponse fr;
    fr.noise_var = 1.0;
    fr.gains = {cplx(1.0, 1.0), cplx(0.0, 0.0)};  // ratios {2, 0}
    const auto params = make_params(2, 1, 1.0);
    const auto alloc = wf_ofdm_allocate(fr, params, std::nullopt);
    CHECK(alloc.power[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(alloc.power[1] == 0.0);
    CHECK(alloc.bits[1] == 0.0);
    CHECK(alloc.rate == doctest::Approx(0.792481250360578).epsilon(1e-9));

    FrequencyResponse dead;
    dead.noise_var = 1.0;
    dead.gains.assign(4, cplx(0.0, 0.0));
    CHECK(wf_ofdm_rate(dead, params, std::nullopt) == 0.0);
}

TEST_CASE("granular loading stays on the bit grid and inside the budget") {
    RandomStream rng(46);
    const double g = 1.0 / 3.0;
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 8 + static_cast<int>(rng.uniform_int(9));
        const auto fr = random_response(n, 4, rng);
        const auto params = make_params(n, 1, static_cast<double>(n) * 3.0, 2.0);
        const auto alloc = wf_ofdm_allocate(fr, params, g);
        double spent = 0.0;
        for (int i = 0; i < n; ++i) {
            const double steps = alloc.bits[i] / g;
            CHECK(std::abs(steps - std::round(steps)) < 1e-9);
            spent += alloc.power[i];
        }
        CHECK(spent <= params.total_power * (1.0 + 1e-12));
        CHECK(wf_ofdm_rate(fr, params, g) <= wf_ofdm_rate(fr, params, std::nullopt) + 1e-9);
    }
}

TEST_CASE("single-group rate helper matches the generic evaluator") {
    RandomStream rng(47);
    const auto fr = random_response(12, 4, rng);
    const auto params = make_params(12, 3, 24.0);  // group count ignored by the helper
    const auto g = single_group_all_used(12);
    auto single = params;
    single.num_groups = 1;
    CHECK(scfde_rate(fr, params) == sum_rate(g, fr, single).sum_rate);
    CHECK(g.used_count() == 12);
}
