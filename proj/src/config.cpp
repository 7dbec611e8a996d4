// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The fmgsc authors

#include "fmgsc/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fmgsc {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

long long parse_int(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const long long parsed = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not an integer: '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const unsigned long long parsed = std::stoull(value, &used);
        if (used != value.size() || (!value.empty() && value[0] == '-'))
            throw std::invalid_argument("");
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not an unsigned integer: '" + value + "'");
    }
}

double parse_real(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const double parsed = std::stod(value, &used);
        if (used != value.size() || !std::isfinite(parsed)) throw std::invalid_argument("");
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a finite number: '" + value + "'");
    }
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw ConfigError("config key '" + key + "': not a boolean: '" + value + "'");
}

}  // namespace

double ExperimentConfig::gap_linear() const { return std::pow(10.0, gamma_db / 10.0); }

void ExperimentConfig::validate() const {
    if (N < 1) throw ConfigError("config key 'N': must be >= 1");
    if (K < 1) throw ConfigError("config key 'K': must be >= 1");
    if (K > N) throw ConfigError("config key 'K': must not exceed N");
    if (L < 1) throw ConfigError("config key 'L': must be >= 1");
    if (pdp_decay < 0.0) throw ConfigError("config key 'pdp_decay': must be >= 0");
    if (snr_db_grid.empty()) throw ConfigError("config key 'snr_db_grid': must be nonempty");
    if (trials < 1) throw ConfigError("config key 'trials': must be >= 1");
    if (schemes.empty()) throw ConfigError("config key 'schemes': must be nonempty");
    for (const std::string& s : schemes) {
        const auto& known = known_schemes();
        if (std::find(known.begin(), known.end(), s) == known.end())
            throw ConfigError("config key 'schemes': unknown scheme '" + s + "'");
    }
    if (gamma_db < 0.0) throw ConfigError("config key 'gamma_db': must be >= 0");
    if (granularity <= 0.0) throw ConfigError("config key 'granularity': must be > 0");
    if (rolloff < 0.0 || rolloff > 1.0)
        throw ConfigError("config key 'rolloff': must be in [0, 1]");
    if (oversample < 1) throw ConfigError("config key 'oversample': must be >= 1");
    if (threads < 1) throw ConfigError("config key 'threads': must be >= 1");
    if (es_cap < 1) throw ConfigError("config key 'es_cap': must be >= 1");
    if (output_path.empty()) throw ConfigError("config key 'output_path': must be nonempty");
}

std::vector<double> parse_double_list(const std::string& text, const std::string& key) {
    std::vector<double> out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_real(item, key));
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

std::vector<std::string> parse_scheme_list(const std::string& text, const std::string& key) {
    std::vector<std::string> out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

void parse_config_file(const std::string& path, ExperimentConfig& cfg) {
    std::ifstream file(path);
    if (!file) throw ConfigError("config file not readable: " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "N")
            cfg.N = static_cast<int>(parse_int(value, key));
        else if (key == "K")
            cfg.K = static_cast<int>(parse_int(value, key));
        else if (key == "L")
            cfg.L = static_cast<int>(parse_int(value, key));
        else if (key == "pdp_decay")
            cfg.pdp_decay = parse_real(value, key);
        else if (key == "snr_db_grid")
            cfg.snr_db_grid = parse_double_list(value, key);
        else if (key == "trials")
            cfg.trials = static_cast<int>(parse_int(value, key));
        else if (key == "master_seed")
            cfg.master_seed = parse_u64(value, key);
        else if (key == "schemes")
            cfg.schemes = parse_scheme_list(value, key);
        else if (key == "gamma_db")
            cfg.gamma_db = parse_real(value, key);
        else if (key == "granularity")
            cfg.granularity = parse_real(value, key);
        else if (key == "rolloff")
            cfg.rolloff = parse_real(value, key);
        else if (key == "oversample")
            cfg.oversample = static_cast<int>(parse_int(value, key));
        else if (key == "allow_null")
            cfg.allow_null = parse_bool(value, key);
        else if (key == "threads")
            cfg.threads = static_cast<int>(parse_int(value, key));
        else if (key == "es_cap")
            cfg.es_cap = static_cast<int>(parse_int(value, key));
        else if (key == "output_path")
            cfg.output_path = value;
        else if (key == "metadata")
            cfg.metadata = value;
        else
            throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown key '" + key +
                              "'");
    }
}

}  // namespace fmgsc
