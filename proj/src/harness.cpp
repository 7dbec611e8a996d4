// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The fmgsc authors

#include "fmgsc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace fmgsc {

namespace {

// Static contiguous partition of [0, total) across worker threads. Slots
// written by the body are disjoint, so no synchronization beyond the final
// join is needed and the result is independent of the thread count.
void parallel_for(int total, int threads, const std::function<void(int)>& body) {
    if (total <= 0) return;
    threads = std::clamp(threads, 1, total);
    if (threads == 1) {
        for (int i = 0; i < total; ++i) body(i);
        return;
    }
    std::mutex mutex;
    std::exception_ptr error;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const int chunk = (total + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        const int lo = w * chunk;
        const int hi = std::min(total, lo + chunk);
        pool.emplace_back([&, lo, hi] {
            try {
                for (int i = lo; i < hi; ++i) body(i);
            } catch (...) {
                const std::lock_guard<std::mutex> guard(mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// Stable per-scheme stream tag: position in the known-scheme table, so a
// reordered scheme list never shifts another scheme's symbol draws.
std::uint64_t scheme_stream_tag(const std::string& scheme) {
    const auto& known = known_schemes();
    const auto it = std::find(known.begin(), known.end(), scheme);
    return static_cast<std::uint64_t>(it - known.begin());
}

bool is_grouped_scheme(const std::string& s) {
    return s == "ES" || s == "SPOS" || s == "SPGS" || s == "EP-US" || s == "EP-SS" ||
           s == "SC-FDE" || s == "FMG-SC";
}

OptimizerResult grouped_result(const std::string& scheme, const FrequencyResponse& fr,
                               const ExperimentConfig& cfg, const LinkParams& params) {
    if (scheme == "SC-FDE") {
        LinkParams single = params;
        single.num_groups = 1;
        OptimizerResult res;
        res.grouping = single_group_all_used(params.num_subcarriers);
        res.metrics = sum_rate(res.grouping, fr, single);
        res.evaluations = 1;
        return res;
    }
    if (scheme == "ES") return exhaustive_search(fr, params, cfg.allow_null, cfg.es_cap);
    if (scheme == "SPOS") return spos(fr, params, cfg.allow_null);
    if (scheme == "SPGS") return spgs(fr, params, cfg.allow_null);
    if (scheme == "EP-US") return ep_us(fr, params);
    if (scheme == "EP-SS") return ep_ss(fr, params);
    if (scheme == "FMG-SC") return spos(fr, params, true);
    throw std::logic_error("grouped_result: not a grouped scheme: " + scheme);
}

void check_sweep_schemes(const ExperimentConfig& cfg, bool rate_only) {
    for (const std::string& scheme : cfg.schemes) {
        if (rate_only && scheme == "TONE")
            throw ConfigError("rate-sweep: scheme 'TONE' measures PAPR only");
        if (scheme == "ES" && cfg.N > cfg.es_cap)
            throw ConfigError("scheme 'ES': N=" + std::to_string(cfg.N) +
                              " exceeds es_cap=" + std::to_string(cfg.es_cap));
    }
}

// Bits loaded on a group with the given analytic SINR: the largest multiple
// of the granularity not above capacity, floored at QPSK.
double loaded_bits(double sinr, double gap, double granularity) {
    const double cap = std::log2(1.0 + std::max(sinr, 0.0) / gap);
    const double bits = std::floor(cap / granularity + 1e-9) * granularity;
    return std::max(2.0, bits);
}

class ConstellationCache {
public:
    explicit ConstellationCache(double granularity) : granularity_(granularity) {}

    const cvec& get(double bits) {
        const long long key = std::llround(bits * 1048576.0);
        auto it = cache_.find(key);
        if (it == cache_.end())
            it = cache_.emplace(key, qam_constellation(bits, granularity_)).first;
        return it->second;
    }

private:
    double granularity_;
    std::map<long long, cvec> cache_;
};

double papr_db_for_scheme(const std::string& scheme, const FrequencyResponse& fr,
                          const ExperimentConfig& cfg, const LinkParams& params,
                          RandomStream& rng) {
    const int n = params.num_subcarriers;
    ConstellationCache cache(cfg.granularity);
    TxBlock blk;
    if (scheme == "TONE") {
        blk.freq.assign(n, cplx{});
        blk.freq[0] = std::sqrt(params.total_power);
    } else if (scheme == "WF-OFDM-CONT" || scheme == "WF-OFDM-DISC") {
        const bool discrete = scheme == "WF-OFDM-DISC";
        const auto alloc = wf_ofdm_allocate(
            fr, params, discrete ? std::optional<double>(cfg.granularity) : std::nullopt);
        blk.freq.assign(n, cplx{});
        for (int i = 0; i < n; ++i) {
            if (alloc.power[i] <= 0.0) continue;
            const double bits = discrete ? std::max(2.0, alloc.bits[i]) : 2.0;
            blk.freq[i] = std::sqrt(alloc.power[i]) * draw_symbol(cache.get(bits), rng);
        }
    } else {
        const OptimizerResult res = grouped_result(scheme, fr, cfg, params);
        const double p = equal_power(res.grouping, params);
        const auto indices = mapping_indices(res.grouping);
        std::vector<cvec> symbols(indices.size());
        for (std::size_t k = 0; k < indices.size(); ++k) {
            const cvec& points =
                cache.get(loaded_bits(res.metrics.sinr[k], params.gap, cfg.granularity));
            symbols[k].resize(indices[k].size());
            for (auto& s : symbols[k]) s = draw_symbol(points, rng);
        }
        blk = modulate(res.grouping, symbols, p, 0);
    }
    if (blk.time_signal.empty()) {
        blk.time_signal = idft(blk.freq);
        blk.cp_signal = blk.time_signal;
    }
    const ShapedOutput shaped = synthesize_shaped({blk}, cfg.oversample, cfg.rolloff);
    return shaped.stats.mean_db;
}

struct SweepGrid {
    int num_snr = 0;
    int trials = 0;
    int num_schemes = 0;

    int flat_total() const { return num_snr * trials; }
    std::size_t slot(int scheme, int snr, int trial) const {
        return (static_cast<std::size_t>(scheme) * num_snr + snr) * trials + trial;
    }
};

std::vector<ResultRow> assemble_rows(const ExperimentConfig& cfg, const SweepGrid& grid,
                                     const std::vector<double>& values,
                                     const std::vector<std::uint64_t>& seeds,
                                     const std::string& metric) {
    std::vector<ResultRow> rows;
    rows.reserve(values.size());
    for (int c = 0; c < grid.num_schemes; ++c)
        for (int s = 0; s < grid.num_snr; ++s)
            for (int t = 0; t < grid.trials; ++t)
                rows.push_back({cfg.schemes[c], cfg.snr_db_grid[s], t, metric,
                                values[grid.slot(c, s, t)], seeds[grid.slot(c, s, t)]});
    return rows;
}

void write_outputs(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows) {
    write_rows_csv(cfg.output_path, rows);
    write_summary_csv(summary_path_for(cfg.output_path), rows);
}

}  // namespace

double power_for_snr_db(double snr_db, int n_subcarriers) {
    return n_subcarriers * std::pow(10.0, snr_db / 10.0);
}

double evaluate_scheme_rate(const std::string& scheme, const FrequencyResponse& fr,
                            const ExperimentConfig& cfg, const LinkParams& params) {
    if (scheme == "WF-OFDM-CONT") return wf_ofdm_rate(fr, params, std::nullopt);
    if (scheme == "WF-OFDM-DISC") return wf_ofdm_rate(fr, params, cfg.granularity);
    if (!is_grouped_scheme(scheme))
        throw ConfigError("scheme '" + scheme + "' has no rate definition");
    return grouped_result(scheme, fr, cfg, params).metrics.sum_rate;
}

std::vector<ResultRow> run_rate_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    check_sweep_schemes(cfg, true);
    const auto pdp = PowerDelayProfile::exponential(cfg.L, cfg.pdp_decay);
    const double gap = cfg.gap_linear();
    const SweepGrid grid{static_cast<int>(cfg.snr_db_grid.size()), cfg.trials,
                         static_cast<int>(cfg.schemes.size())};

    std::vector<double> values(static_cast<std::size_t>(grid.num_schemes) * grid.flat_total());
    std::vector<std::uint64_t> seeds(values.size());
    parallel_for(grid.flat_total(), cfg.threads, [&](int idx) {
        const int s = idx / grid.trials;
        const int t = idx % grid.trials;
        const std::uint64_t stream_id =
            RandomStream::derive_id(cfg.master_seed, kStreamChannel, s, t);
        RandomStream rng = RandomStream::derive(cfg.master_seed, kStreamChannel, s, t);
        const ChannelRealization ch = sample_channel(pdp, rng);
        const FrequencyResponse fr = frequency_response(ch, cfg.N, 1.0);
        LinkParams params;
        params.num_subcarriers = cfg.N;
        params.num_groups = cfg.K;
        params.total_power = power_for_snr_db(cfg.snr_db_grid[s], cfg.N);
        params.noise_var = 1.0;
        params.gap = gap;
        for (int c = 0; c < grid.num_schemes; ++c) {
            const std::size_t slot = grid.slot(c, s, t);
            values[slot] = evaluate_scheme_rate(cfg.schemes[c], fr, cfg, params);
            seeds[slot] = stream_id;
        }
    });

    const auto rows = assemble_rows(cfg, grid, values, seeds, "rate_bpshz");
    write_outputs(cfg, rows);
    return rows;
}

std::vector<ResultRow> run_papr_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    check_sweep_schemes(cfg, false);
    const auto pdp = PowerDelayProfile::exponential(cfg.L, cfg.pdp_decay);
    const double gap = cfg.gap_linear();
    const SweepGrid grid{static_cast<int>(cfg.snr_db_grid.size()), cfg.trials,
                         static_cast<int>(cfg.schemes.size())};

    std::vector<double> values(static_cast<std::size_t>(grid.num_schemes) * grid.flat_total());
    std::vector<std::uint64_t> seeds(values.size());
    parallel_for(grid.flat_total(), cfg.threads, [&](int idx) {
        const int s = idx / grid.trials;
        const int t = idx % grid.trials;
        RandomStream rng = RandomStream::derive(cfg.master_seed, kStreamChannel, s, t);
        const ChannelRealization ch = sample_channel(pdp, rng);
        const FrequencyResponse fr = frequency_response(ch, cfg.N, 1.0);
        LinkParams params;
        params.num_subcarriers = cfg.N;
        params.num_groups = cfg.K;
        params.total_power = power_for_snr_db(cfg.snr_db_grid[s], cfg.N);
        params.noise_var = 1.0;
        params.gap = gap;
        for (int c = 0; c < grid.num_schemes; ++c) {
            const std::uint64_t tag = scheme_stream_tag(cfg.schemes[c]);
            RandomStream sym_rng =
                RandomStream::derive(cfg.master_seed, kStreamSymbols, s, t, tag);
            const std::size_t slot = grid.slot(c, s, t);
            values[slot] = papr_db_for_scheme(cfg.schemes[c], fr, cfg, params, sym_rng);
            seeds[slot] = RandomStream::derive_id(cfg.master_seed, kStreamSymbols, s, t, tag);
        }
    });

    const auto rows = assemble_rows(cfg, grid, values, seeds, "papr_db");
    write_outputs(cfg, rows);
    return rows;
}

std::string summary_path_for(const std::string& rows_path) {
    const auto slash = rows_path.find_last_of('/');
    const auto dot = rows_path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return rows_path + "_summary";
    return rows_path.substr(0, dot) + "_summary" + rows_path.substr(dot);
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_rows_csv(const std::string& path, const std::vector<ResultRow>& rows) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path);
    file << "scheme,snr_db,trial,metric,value\n";
    for (const ResultRow& row : rows) {
        file << row.scheme << ',' << format_real(row.snr_db) << ',' << row.trial << ','
             << row.metric << ',' << format_real(row.value) << '\n';
    }
    if (!file) throw std::runtime_error("write failed: " + path);
}

void write_summary_csv(const std::string& path, const std::vector<ResultRow>& rows) {
    struct Cell {
        double sum = 0.0;
        double sum_sq = 0.0;
        long long count = 0;
    };
    // Aggregate in first-appearance order so the summary ordering follows the
    // canonical row ordering.
    std::vector<std::tuple<std::string, double, std::string>> order;
    std::map<std::tuple<std::string, double, std::string>, Cell> cells;
    for (const ResultRow& row : rows) {
        const auto key = std::make_tuple(row.scheme, row.snr_db, row.metric);
        auto it = cells.find(key);
        if (it == cells.end()) {
            it = cells.emplace(key, Cell{}).first;
            order.push_back(key);
        }
        it->second.sum += row.value;
        it->second.sum_sq += row.value * row.value;
        ++it->second.count;
    }

    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path);
    file << "scheme,snr_db,metric,mean,stderr,count\n";
    for (const auto& key : order) {
        const Cell& cell = cells.at(key);
        const double mean = cell.sum / cell.count;
        double se = 0.0;
        if (cell.count > 1) {
            const double var =
                std::max(0.0, (cell.sum_sq - cell.sum * mean) / (cell.count - 1));
            se = std::sqrt(var / cell.count);
        }
        file << std::get<0>(key) << ',' << format_real(std::get<1>(key)) << ','
             << std::get<2>(key) << ',' << format_real(mean) << ',' << format_real(se) << ','
             << cell.count << '\n';
    }
    if (!file) throw std::runtime_error("write failed: " + path);
}

namespace {

double max_abs_diff(const cvec& a, const cvec& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

cvec random_cvec(int n, RandomStream& rng) {
    cvec v(n);
    for (auto& x : v) x = rng.cscg(1.0);
    return v;
}

}  // namespace

int run_validation(const ExperimentConfig& cfg, std::ostream& out) {
    cfg.validate();
    int failures = 0;
    const auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        out << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
        if (!ok) ++failures;
    };
    const std::uint64_t seed = cfg.master_seed;
    const double gap = cfg.gap_linear();

    {
        RandomStream rng = RandomStream::derive(seed, kStreamValidation, 1);
        double worst = 0.0;
        for (const int n : {1, 2, 3, 4, 5, 8, 13, 16, 27, 64, 128, 256}) {
            for (int rep = 0; rep < 4; ++rep) {
                const cvec v = random_cvec(n, rng);
                const cvec w = random_cvec(n, rng);
                worst = std::max(worst, max_abs_diff(idft(dft(v)), v));
                worst = std::max(worst, std::abs(energy(dft(v)) - energy(v)) /
                                            std::max(1.0, energy(v)));
                cvec spectral(n);
                const cvec fv = dft(v);
                const cvec fw = dft(w);
                const double root_n = std::sqrt(static_cast<double>(n));
                for (int i = 0; i < n; ++i) spectral[i] = root_n * fv[i] * fw[i];
                worst = std::max(worst, max_abs_diff(circular_convolve(v, w), idft(spectral)));
            }
        }
        report("numerics-identities", worst <= 1e-10,
               "max error " + format_real(worst) + " vs 1e-10");
    }

    {
        RandomStream rng = RandomStream::derive(seed, kStreamValidation, 2);
        const auto pdp = PowerDelayProfile::exponential(cfg.L, cfg.pdp_decay);
        double worst_cp = 0.0;
        double worst_diag = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            const ChannelRealization ch = sample_channel(pdp, rng);
            const cvec v = random_cvec(cfg.N, rng);
            TxBlock tx;
            tx.time_signal = v;
            tx.cp_len = cfg.L;
            tx.cp_signal = add_cp(v, cfg.L);
            const cvec y = apply_channel(tx, ch, 0.0, rng);
            cvec taps_padded(cfg.N, cplx{});
            std::copy(ch.taps.begin(), ch.taps.end(), taps_padded.begin());
            worst_cp = std::max(worst_cp, max_abs_diff(y, circular_convolve(v, taps_padded)));
            const FrequencyResponse fr = frequency_response(ch, cfg.N, 1.0);
            const cvec fy = dft(y);
            const cvec fv = dft(v);
            cvec prod(cfg.N);
            for (int i = 0; i < cfg.N; ++i) prod[i] = fr.gains[i] * fv[i];
            worst_diag = std::max(worst_diag, max_abs_diff(fy, prod));
        }
        report("cp-linear-vs-circular", worst_cp <= 1e-10,
               "max error " + format_real(worst_cp) + " vs 1e-10");
        report("circulant-diagonalization", worst_diag <= 1e-10,
               "max error " + format_real(worst_diag) + " vs 1e-10");
    }

    {
        RandomStream rng = RandomStream::derive(seed, kStreamValidation, 3);
        const auto pdp = PowerDelayProfile::exponential(cfg.L, cfg.pdp_decay);
        const int draws = (100000 + cfg.L - 1) / cfg.L;
        double total = 0.0;
        for (int i = 0; i < draws; ++i) total += energy(sample_channel(pdp, rng).taps);
        const double mean = total / draws;
        report("channel-tap-power", std::abs(mean - 1.0) <= 0.02,
               "mean tap energy " + format_real(mean) + " vs 1 +- 2%");
    }

    {
        const int n = 10;
        const int k = 2;
        const int trials = 200;
        const auto pdp = PowerDelayProfile::exponential(cfg.L, cfg.pdp_decay);
        bool spos_exact = true;
        bool es_bound = true;
        for (int t = 0; t < trials && (spos_exact || es_bound); ++t) {
            RandomStream rng = RandomStream::derive(seed, kStreamValidation, 4, t);
            const ChannelRealization ch = sample_channel(pdp, rng);
            const FrequencyResponse fr = frequency_response(ch, n, 1.0);
            LinkParams params;
            params.num_subcarriers = n;
            params.num_groups = k;
            params.total_power = power_for_snr_db(10.0, n);
            params.noise_var = 1.0;
            params.gap = gap;
            const OptimizerResult via_spos = spos(fr, params, true);

            // Independent enumeration of every strictly increasing bar pair.
            const auto sorted = sort_subcarriers(subcarrier_gain_ratios(fr));
            double best = -1.0;
            for (int b1 = 0; b1 < n; ++b1) {
                for (int b2 = b1 + 1; b2 < n; ++b2) {
                    BarPlacement b;
                    b.bars = {b1, b2};
                    const auto g = bars_to_grouping(b, sorted, k);
                    best = std::max(best, sum_rate(g, fr, params).sum_rate);
                }
            }
            if (via_spos.metrics.sum_rate != best) spos_exact = false;
            const OptimizerResult es = exhaustive_search(fr, params, true, 14);
            if (es.metrics.sum_rate < via_spos.metrics.sum_rate) es_bound = false;
        }
        report("spos-equals-bar-enumeration", spos_exact,
               spos_exact ? "bit-identical on 200 trials" : "mismatch found");
        report("spos-below-global-es", es_bound,
               es_bound ? "bounded on 200 trials" : "violation found");
    }

    {
        const int trials = 100;
        const auto pdp = PowerDelayProfile::exponential(cfg.L, cfg.pdp_decay);
        bool monotone = true;
        bool terminated = true;
        bool dominates = true;
        for (int t = 0; t < trials; ++t) {
            RandomStream rng = RandomStream::derive(seed, kStreamValidation, 5, t);
            const ChannelRealization ch = sample_channel(pdp, rng);
            const FrequencyResponse fr = frequency_response(ch, cfg.N, 1.0);
            LinkParams params;
            params.num_subcarriers = cfg.N;
            params.num_groups = std::min(cfg.K, cfg.N);
            params.total_power = power_for_snr_db(10.0, cfg.N);
            params.noise_var = 1.0;
            params.gap = gap;
            std::vector<double> trace;
            SpgsOptions options;
            options.iteration_rates = &trace;
            const OptimizerResult via_spgs = spgs(fr, params, false, options);
            for (std::size_t i = 1; i < trace.size(); ++i)
                if (trace[i] < trace[i - 1]) monotone = false;
            if (via_spgs.iterations > 10 * cfg.N) terminated = false;
            if (via_spgs.metrics.sum_rate < ep_ss(fr, params).metrics.sum_rate)
                dominates = false;
        }
        report("spgs-monotone-improvement", monotone,
               monotone ? "nondecreasing on 100 trials" : "decrease found");
        report("spgs-terminates", terminated,
               terminated ? "within 10N passes on 100 trials" : "cap exceeded");
        report("spgs-dominates-ep-ss", dominates,
               dominates ? "per-trial bound held on 100 trials" : "violation found");
    }

    {
        const int cases = 20;
        const int blocks = 10000;
        const int n = 32;
        const auto pdp = PowerDelayProfile::exponential(cfg.L, cfg.pdp_decay);
        double worst_rel = 0.0;
        std::vector<double> rel(cases, 0.0);
        parallel_for(cases, cfg.threads, [&](int c) {
            RandomStream rng = RandomStream::derive(seed, kStreamValidation, 6, c);
            const ChannelRealization ch = sample_channel(pdp, rng);
            const FrequencyResponse fr = frequency_response(ch, n, 1.0);
            LinkParams params;
            params.num_subcarriers = n;
            params.num_groups = 1 + static_cast<int>(rng.uniform_int(3));
            params.total_power = power_for_snr_db(10.0, n);
            params.noise_var = 1.0;
            params.gap = gap;
            // Random feasible grouping, unused set allowed.
            Grouping g;
            g.num_groups = params.num_groups;
            for (;;) {
                g.labels.assign(n, 0);
                for (auto& label : g.labels)
                    label = static_cast<int>(rng.uniform_int(params.num_groups + 1));
                const auto sizes = g.group_sizes();
                bool ok = true;
                for (int grp = 1; grp <= g.num_groups; ++grp) ok = ok && sizes[grp] > 0;
                if (ok) break;
            }
            const double p = equal_power(g, params);
            const auto ratios = subcarrier_gain_ratios(fr);
            const auto empirical = measure_sinr_empirical(g, ch, fr, params, blocks, rng);
            for (int grp = 1; grp <= g.num_groups; ++grp) {
                const double analytic = group_sinr(g, grp, ratios, p);
                rel[c] = std::max(rel[c],
                                  std::abs(empirical[grp - 1] - analytic) / analytic);
            }
        });
        for (int c = 0; c < cases; ++c) worst_rel = std::max(worst_rel, rel[c]);
        report("sinr-empirical-vs-analytic", worst_rel <= 0.05,
               "worst relative error " + format_real(worst_rel) + " vs 0.05");
    }

    return failures;
}

}  // namespace fmgsc
