// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The fmgsc authors

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmgsc {

/// Error in a config file or flag value; the message names the key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scheme identifiers accepted in scheme lists. TONE is a constant-envelope
/// debug scheme for the PAPR path only.
inline const std::vector<std::string>& known_schemes() {
    static const std::vector<std::string> names = {
        "ES",     "SPOS",        "SPGS",        "EP-US", "EP-SS",
        "SC-FDE", "WF-OFDM-CONT", "WF-OFDM-DISC", "FMG-SC", "TONE"};
    return names;
}

/// One experiment: sweep grid, trial count, seed, scheme list, and waveform
/// options. Defaults follow the reference setup: N=64 subcarriers, L=8 taps,
/// 4.54 dB SNR gap, 1/3-bit loading granularity, RRC rolloff 0.1, 1000
/// trials.
struct ExperimentConfig {
    int N = 64;
    int K = 2;
    int L = 8;
    double pdp_decay = 1.0;
    std::vector<double> snr_db_grid = {0.0, 5.0, 10.0, 15.0, 20.0};
    int trials = 1000;
    std::uint64_t master_seed = 1;
    std::vector<std::string> schemes = {"SPOS",   "SPGS",         "EP-US",
                                        "EP-SS",  "SC-FDE",       "FMG-SC",
                                        "WF-OFDM-CONT", "WF-OFDM-DISC"};
    double gamma_db = 4.54;
    double granularity = 1.0 / 3.0;
    double rolloff = 0.1;
    int oversample = 4;
    bool allow_null = false;
    int threads = 1;
    int es_cap = 14;
    std::string output_path = "results.csv";
    std::string metadata;

    double gap_linear() const;

    /// Throws ConfigError naming the offending key.
    void validate() const;
};

/// Parse a flat key=value file ('#' starts a comment). Unknown keys are
/// rejected. Values overwrite the corresponding fields of cfg in place, so
/// defaults and later flag overrides compose naturally.
void parse_config_file(const std::string& path, ExperimentConfig& cfg);

/// Comma-separated helpers shared by the file parser and the CLI flags.
std::vector<double> parse_double_list(const std::string& text, const std::string& key);
std::vector<std::string> parse_scheme_list(const std::string& text, const std::string& key);

}  // namespace fmgsc
