// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The fmgsc authors

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "fmgsc/harness.hpp"

using namespace fmgsc;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    REQUIRE(file.good());
    std::stringstream buf;
    buf << file.rdbuf();
    return buf.str();
}

struct TempPaths {
    std::vector<std::string> paths;
    std::string fresh(const std::string& tag) {
        const std::string p = "fmgsc_harness_test_" + tag + ".csv";
        paths.push_back(p);
        paths.push_back(summary_path_for(p));
        return p;
    }
    ~TempPaths() {
        for (const auto& p : paths) std::remove(p.c_str());
    }
};

ExperimentConfig small_sweep_config(const std::string& out) {
    ExperimentConfig cfg;
    cfg.N = 8;
    cfg.K = 2;
    cfg.L = 3;
    cfg.trials = 3;
    cfg.snr_db_grid = {0.0, 10.0};
    cfg.schemes = {"SPOS", "EP-SS", "SC-FDE"};
    cfg.master_seed = 7;
    cfg.output_path = out;
    return cfg;
}

int count_lines(const std::string& text) {
    int lines = 0;
    for (char c : text) lines += c == '\n';
    return lines;
}

}  // namespace

TEST_CASE("transmit power follows the snr grid") {
    CHECK(power_for_snr_db(0.0, 64) == 64.0);
    CHECK(power_for_snr_db(10.0, 64) == doctest::Approx(640.0).epsilon(1e-12));
    CHECK(power_for_snr_db(20.0, 8) == doctest::Approx(800.0).epsilon(1e-12));
    CHECK(power_for_snr_db(-10.0, 10) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("csv reals use shortest nine-digit formatting") {
    CHECK(format_real(1.0) == "1");
    CHECK(format_real(0.5) == "0.5");
    CHECK(format_real(-2.5) == "-2.5");
    CHECK(format_real(1e-10) == "1e-10");
    CHECK(format_real(3.141592653589793) == "3.14159265");
    CHECK(format_real(1234567890.0) == "1.23456789e+09");
    CHECK(format_real(0.0) == "0");
}

TEST_CASE("summary path slots in before the extension") {
    CHECK(summary_path_for("results.csv") == "results_summary.csv");
    CHECK(summary_path_for("out/run.csv") == "out/run_summary.csv");
    CHECK(summary_path_for("noext") == "noext_summary");
    CHECK(summary_path_for("dir.d/file") == "dir.d/file_summary");
}

TEST_CASE("per-scheme rates match the underlying optimizers") {
    RandomStream rng(71);
    const auto pdp = PowerDelayProfile::exponential(3, 0.5);
    const auto ch = sample_channel(pdp, rng);
    const auto fr = frequency_response(ch, 8, 1.0);
    ExperimentConfig cfg;
    cfg.N = 8;
    cfg.K = 2;
    LinkParams params;
    params.num_subcarriers = 8;
    params.num_groups = 2;
    params.total_power = 32.0;
    params.noise_var = 1.0;
    params.gap = cfg.gap_linear();

    CHECK(evaluate_scheme_rate("SC-FDE", fr, cfg, params) == scfde_rate(fr, params));
    CHECK(evaluate_scheme_rate("SPOS", fr, cfg, params) ==
          spos(fr, params, false).metrics.sum_rate);
    CHECK(evaluate_scheme_rate("FMG-SC", fr, cfg, params) ==
          spos(fr, params, true).metrics.sum_rate);
    CHECK(evaluate_scheme_rate("EP-US", fr, cfg, params) == ep_us(fr, params).metrics.sum_rate);
    CHECK(evaluate_scheme_rate("WF-OFDM-CONT", fr, cfg, params) ==
          wf_ofdm_rate(fr, params, std::nullopt));
    CHECK(evaluate_scheme_rate("WF-OFDM-DISC", fr, cfg, params) ==
          wf_ofdm_rate(fr, params, cfg.granularity));
    CHECK_THROWS_AS(evaluate_scheme_rate("TONE", fr, cfg, params), ConfigError);
}

TEST_CASE("rate sweep emits the canonical row grid") {
    TempPaths tmp;
    auto cfg = small_sweep_config(tmp.fresh("grid"));
    const auto rows = run_rate_sweep(cfg);
    REQUIRE(rows.size() == 3u * 2u * 3u);

    // Scheme-major, then snr, then trial.
    std::size_t i = 0;
    for (const auto& scheme : cfg.schemes) {
        for (double snr : cfg.snr_db_grid) {
            for (int t = 0; t < cfg.trials; ++t, ++i) {
                CHECK(rows[i].scheme == scheme);
                CHECK(rows[i].snr_db == snr);
                CHECK(rows[i].trial == t);
                CHECK(rows[i].metric == "rate_bpshz");
                CHECK(rows[i].value > 0.0);
            }
        }
    }

    const std::string text = slurp(cfg.output_path);
    CHECK(text.substr(0, text.find('\n')) == "scheme,snr_db,trial,metric,value");
    CHECK(count_lines(text) == 19);
    const std::string summary = slurp(summary_path_for(cfg.output_path));
    CHECK(summary.substr(0, summary.find('\n')) == "scheme,snr_db,metric,mean,stderr,count");
    CHECK(count_lines(summary) == 7);
}

TEST_CASE("rate sweep pairs schemes on shared channels") {
    TempPaths tmp;
    auto cfg = small_sweep_config(tmp.fresh("paired"));
    const auto rows = run_rate_sweep(cfg);
    const auto at = [&](int scheme, int snr, int trial) {
        return rows[(scheme * 2 + snr) * cfg.trials + trial];
    };
    for (int s = 0; s < 2; ++s) {
        for (int t = 0; t < cfg.trials; ++t) {
            // Same channel stream seed across schemes of a trial.
            CHECK(at(0, s, t).seed == at(1, s, t).seed);
            CHECK(at(0, s, t).seed == at(2, s, t).seed);
            // The scan is exact over a space containing the sorted partition.
            CHECK(at(0, s, t).value >= at(1, s, t).value);
        }
    }
}

TEST_CASE("rate sweep output is byte-stable across runs and thread counts") {
    TempPaths tmp;
    auto cfg1 = small_sweep_config(tmp.fresh("bytes1"));
    run_rate_sweep(cfg1);
    auto cfg2 = small_sweep_config(tmp.fresh("bytes2"));
    run_rate_sweep(cfg2);
    CHECK(slurp(cfg1.output_path) == slurp(cfg2.output_path));

    auto cfg3 = small_sweep_config(tmp.fresh("bytes3"));
    cfg3.threads = 3;
    run_rate_sweep(cfg3);
    CHECK(slurp(cfg1.output_path) == slurp(cfg3.output_path));
    CHECK(slurp(summary_path_for(cfg1.output_path)) ==
          slurp(summary_path_for(cfg3.output_path)));
}

TEST_CASE("rate sweep rejects bad scheme lists up front") {
    TempPaths tmp;
    auto cfg = small_sweep_config(tmp.fresh("reject"));
    cfg.schemes = {"TONE"};
    CHECK_THROWS_AS(run_rate_sweep(cfg), ConfigError);
    cfg.schemes = {"ES"};
    cfg.N = 16;
    CHECK_THROWS_AS(run_rate_sweep(cfg), ConfigError);
    cfg.es_cap = 16;
    cfg.K = 2;
    cfg.trials = 1;
    cfg.snr_db_grid = {10.0};
    CHECK_NOTHROW(run_rate_sweep(cfg));
}

TEST_CASE("papr sweep measures the tone at exactly zero db") {
    TempPaths tmp;
    ExperimentConfig cfg;
    cfg.N = 16;
    cfg.K = 2;
    cfg.L = 4;
    cfg.trials = 2;
    cfg.snr_db_grid = {0.0};
    cfg.schemes = {"TONE", "SC-FDE"};
    cfg.master_seed = 9;
    cfg.output_path = tmp.fresh("papr");
    const auto rows = run_papr_sweep(cfg);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        CHECK(row.metric == "papr_db");
        if (row.scheme == "TONE")
            CHECK(row.value == 0.0);
        else
            CHECK(row.value > 0.0);
    }
}

TEST_CASE("papr draws are keyed by scheme identity, not list position") {
    TempPaths tmp;
    ExperimentConfig cfg;
    cfg.N = 8;
    cfg.K = 1;
    cfg.L = 3;
    cfg.trials = 2;
    cfg.snr_db_grid = {10.0};
    cfg.master_seed = 11;
    cfg.schemes = {"SC-FDE", "EP-US"};
    cfg.output_path = tmp.fresh("keyed1");
    const auto first = run_papr_sweep(cfg);

    cfg.schemes = {"EP-US", "SC-FDE"};
    cfg.output_path = tmp.fresh("keyed2");
    const auto second = run_papr_sweep(cfg);

    const auto value_of = [](const std::vector<ResultRow>& rows, const std::string& scheme,
                             int trial) {
        for (const auto& row : rows)
            if (row.scheme == scheme && row.trial == trial) return row.value;
        FAIL("row not found");
        return 0.0;
    };
    for (int t = 0; t < 2; ++t) {
        CHECK(value_of(first, "SC-FDE", t) == value_of(second, "SC-FDE", t));
        CHECK(value_of(first, "EP-US", t) == value_of(second, "EP-US", t));
    }
}

TEST_CASE("row and summary writers produce the documented schema") {
    TempPaths tmp;
    const std::string rows_path = tmp.fresh("writer");
    const std::vector<ResultRow> rows = {
        {"A", 2.5, 7, "m", 0.125, 0}, {"A", 2.5, 8, "m", 1.0, 0},
        {"A", 2.5, 9, "m", 2.875, 0}, {"B", 2.5, 7, "m", 4.0, 0}};
    write_rows_csv(rows_path, rows);
    CHECK(slurp(rows_path) ==
          "scheme,snr_db,trial,metric,value\n"
          "A,2.5,7,m,0.125\n"
          "A,2.5,8,m,1\n"
          "A,2.5,9,m,2.875\n"
          "B,2.5,7,m,4\n");

    const std::string summary_path = summary_path_for(rows_path);
    write_summary_csv(summary_path, rows);
    // Mean of {0.125, 1, 2.875} is 4/3; the single B row has zero stderr.
    const std::string summary = slurp(summary_path);
    CHECK(summary.find("scheme,snr_db,metric,mean,stderr,count\n") == 0);
    CHECK(summary.find("A,2.5,m,1.33333333,") != std::string::npos);
    CHECK(summary.find("B,2.5,m,4,0,1\n") != std::string::npos);
    CHECK(count_lines(summary) == 3);
}

TEST_CASE("summary statistics are recomputable from the rows") {
    TempPaths tmp;
    auto cfg = small_sweep_config(tmp.fresh("recompute"));
    const auto rows = run_rate_sweep(cfg);

    double sum = 0.0;
    int count = 0;
    for (const auto& row : rows) {
        if (row.scheme == "SPOS" && row.snr_db == 10.0) {
            sum += row.value;
            ++count;
        }
    }
    REQUIRE(count == cfg.trials);
    const std::string summary = slurp(summary_path_for(cfg.output_path));
    const std::string needle = "SPOS,10,rate_bpshz," + format_real(sum / count) + ",";
    CHECK(summary.find(needle) != std::string::npos);
}

TEST_CASE("validation suite passes on a small config and reports each check") {
    ExperimentConfig cfg;
    cfg.N = 16;
    cfg.K = 2;
    cfg.L = 4;
    cfg.master_seed = 3;
    std::ostringstream out;
    const int failures = run_validation(cfg, out);
    CHECK(failures == 0);
    const std::string text = out.str();
    for (const char* name :
         {"numerics-identities", "cp-linear-vs-circular", "circulant-diagonalization",
          "channel-tap-power", "spos-equals-bar-enumeration", "spos-below-global-es",
          "spgs-monotone-improvement", "spgs-terminates", "spgs-dominates-ep-ss",
          "sinr-empirical-vs-analytic"}) {
        CHECK_MESSAGE(text.find(std::string("PASS ") + name) != std::string::npos, name);
    }
}
