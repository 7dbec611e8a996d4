// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The fmgsc authors

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fmgsc/config.hpp"
#include "fmgsc/grouping.hpp"
#include "fmgsc/waveform.hpp"

namespace fmgsc {

/// One measurement. The stream seed is kept for in-memory consumers; the CSV
/// row format is the fixed five-column schema.
struct ResultRow {
    std::string scheme;
    double snr_db = 0.0;
    int trial = 0;
    std::string metric;
    double value = 0.0;
    std::uint64_t seed = 0;
};

/// Substream domains under the master seed. Channel streams are shared by
/// every scheme of a trial (paired design); symbol streams are additionally
/// keyed by scheme so adding a scheme never shifts another scheme's draws.
inline constexpr std::uint64_t kStreamChannel = 1;
inline constexpr std::uint64_t kStreamSymbols = 2;
inline constexpr std::uint64_t kStreamValidation = 3;

/// Total transmit power for an SNR point: SNR = P / (N sigma^2), sigma^2 = 1.
double power_for_snr_db(double snr_db, int n_subcarriers);

/// Analytic rate of one scheme on one channel realization.
double evaluate_scheme_rate(const std::string& scheme, const FrequencyResponse& fr,
                            const ExperimentConfig& cfg, const LinkParams& params);

/// Monte-Carlo sweep of analytic rates; writes the row CSV to
/// cfg.output_path and a sibling summary CSV. Returns the rows.
std::vector<ResultRow> run_rate_sweep(const ExperimentConfig& cfg);

/// Monte-Carlo sweep of shaped-waveform PAPR, one block per trial.
std::vector<ResultRow> run_papr_sweep(const ExperimentConfig& cfg);

/// Oracle and property suite. Prints one PASS/FAIL line per check with the
/// measured value against its threshold; returns the number of failures.
int run_validation(const ExperimentConfig& cfg, std::ostream& out);

/// "results.csv" -> "results_summary.csv" (extension-aware).
std::string summary_path_for(const std::string& rows_path);

/// Shortest round-trip decimal formatting used for every CSV real: %.9g.
std::string format_real(double v);

void write_rows_csv(const std::string& path, const std::vector<ResultRow>& rows);

/// Per (scheme, snr, metric) mean, standard error, and count, aggregated in
/// row order; written as the six-column summary schema.
void write_summary_csv(const std::string& path, const std::vector<ResultRow>& rows);

}  // namespace fmgsc
