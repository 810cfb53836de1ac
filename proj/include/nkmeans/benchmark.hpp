#pragma once

// Benchmark harness: run the deterministic pipeline and the random-init
// baseline over a grid of k values and seeds, then emit the comparison as an
// aligned table, CSV, or JSON.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nkmeans/centroid_init.hpp"
#include "nkmeans/clustering.hpp"
#include "nkmeans/dataset.hpp"
#include "nkmeans/preprocessing.hpp"

namespace nkmeans {

enum class Algorithm { nk_means, kmeans_random };

inline const char* to_string(Algorithm a) {
    return a == Algorithm::nk_means ? "nk_means" : "kmeans_random";
}

struct RunSpec {
    std::string input_path;
    ParseOptions parse;
    std::vector<std::size_t> k_values = {1, 3, 5, 7};
    std::vector<Algorithm> algorithms = {Algorithm::nk_means, Algorithm::kmeans_random};
    std::vector<std::uint64_t> seeds = default_seeds(20);
    std::optional<WeightVector> weights;  // uniform when unset
    ImputeStrategy impute = ImputeStrategy::mean();
    KMeansConfig kmeans;
    bool baseline_on_raw = false;  // run the baseline on un-normalized data

    static std::vector<std::uint64_t> default_seeds(std::size_t count) {
        std::vector<std::uint64_t> out(count);
        for (std::size_t i = 0; i < count; ++i) out[i] = i;
        return out;
    }
};

struct StatSummary {
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// One clustering run within the grid; seed is empty for the deterministic
/// algorithm.
struct RunRecord {
    std::optional<std::uint64_t> seed;
    std::size_t iterations = 0;
    double sse = 0.0;
    double time_ms = 0.0;
    bool converged = false;
};

struct ReportEntry {
    std::size_t k = 0;
    Algorithm algorithm = Algorithm::nk_means;
    std::vector<RunRecord> runs;
    StatSummary time_ms;
    StatSummary iterations;
    StatSummary sse;
    double converged_fraction = 0.0;
};

struct RunReport {
    std::string input_path;
    std::size_t n_rows = 0;
    std::size_t n_features = 0;
    std::vector<std::string> feature_names;
    bool has_labels = false;
    FeatureBounds bounds;
    RunSpec spec;                     // configuration echo
    std::vector<std::string> notes;   // diagnostics (degenerate features, k = 1, ...)
    std::vector<ReportEntry> entries;
};

enum class ReportFormat { table, csv, json };

namespace detail {

inline StatSummary summarize(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    StatSummary s;
    s.min = values.front();
    s.max = values.back();
    s.median = n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
    return s;
}

inline void finalize_entry(ReportEntry& entry) {
    std::vector<double> times, iters, sses;
    std::size_t converged = 0;
    for (const auto& run : entry.runs) {
        times.push_back(run.time_ms);
        iters.push_back(static_cast<double>(run.iterations));
        sses.push_back(run.sse);
        if (run.converged) ++converged;
    }
    entry.time_ms = summarize(std::move(times));
    entry.iterations = summarize(std::move(iters));
    entry.sse = summarize(std::move(sses));
    entry.converged_fraction =
        static_cast<double>(converged) / static_cast<double>(entry.runs.size());
}

inline RunRecord timed_run(const Dataset& data, const CentroidSet& init,
                           const KMeansConfig& config, std::optional<std::uint64_t> seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const ClusteringResult res = lloyd(data, init, config);
    const std::chrono::duration<double, std::milli> elapsed =
        std::chrono::steady_clock::now() - t0;
    return {seed, res.iterations, res.sse, elapsed.count(), res.converged};
}

}  // namespace detail

/// Execute the whole grid: parse -> impute -> bounds -> normalize, then for
/// every requested k the deterministic pipeline (once) and the baseline (once
/// per seed). Timing covers initialization plus the Lloyd loop.
inline RunReport run_pipeline(const RunSpec& spec) {
    if (spec.k_values.empty())
        throw std::invalid_argument("run_pipeline: k_values must not be empty");
    if (spec.algorithms.empty())
        throw std::invalid_argument("run_pipeline: algorithms must not be empty");

    std::ifstream in(spec.input_path);
    if (!in)
        throw std::runtime_error("run_pipeline: cannot open '" + spec.input_path + "'");
    const RawDataset raw = parse_delimited(in, spec.parse);
    const Dataset data = impute_missing(raw, spec.impute);
    const FeatureBounds bounds = compute_bounds(data);
    const Dataset normalized = min_max_normalize(data, bounds);

    const WeightVector weights =
        spec.weights ? *spec.weights : WeightVector::uniform(data.n_features());
    if (weights.size() != data.n_features())
        throw std::invalid_argument("run_pipeline: " + std::to_string(weights.size()) +
                                    " weights for " + std::to_string(data.n_features()) +
                                    " features");

    const bool wants_baseline =
        std::find(spec.algorithms.begin(), spec.algorithms.end(), Algorithm::kmeans_random) !=
        spec.algorithms.end();
    if (wants_baseline && spec.seeds.empty())
        throw std::invalid_argument("run_pipeline: kmeans_random requires at least one seed");
    for (std::size_t k : spec.k_values)
        if (k < 1 || k > data.n_rows())
            throw std::invalid_argument("run_pipeline: k = " + std::to_string(k) +
                                        " invalid for a " + std::to_string(data.n_rows()) +
                                        "-row dataset");

    RunReport report;
    report.input_path = spec.input_path;
    report.n_rows = data.n_rows();
    report.n_features = data.n_features();
    report.feature_names = data.feature_names();
    report.has_labels = data.has_labels();
    report.bounds = bounds;
    report.spec = spec;

    for (std::size_t j : bounds.degenerate_features())
        report.notes.push_back("feature '" + data.feature_names()[j] +
                               "' is constant; it normalizes to 0 and does not separate clusters");
    if (std::find(spec.k_values.begin(), spec.k_values.end(), std::size_t{1}) !=
        spec.k_values.end())
        report.notes.push_back("k = 1 requested: a single cluster is degenerate, "
                               "included for completeness");
    if (spec.baseline_on_raw)
        report.notes.push_back("baseline runs on un-normalized data; its SSE is measured in "
                               "original units and is not comparable with nk_means");

    const Dataset& baseline_data = spec.baseline_on_raw ? data : normalized;
    for (std::size_t k : spec.k_values) {
        for (Algorithm algorithm : spec.algorithms) {
            ReportEntry entry;
            entry.k = k;
            entry.algorithm = algorithm;
            if (algorithm == Algorithm::nk_means) {
                const auto t0 = std::chrono::steady_clock::now();
                const CentroidSet init = nk_initial_centroids(normalized, weights, k);
                RunRecord run = detail::timed_run(normalized, init, spec.kmeans, std::nullopt);
                const std::chrono::duration<double, std::milli> total =
                    std::chrono::steady_clock::now() - t0;
                run.time_ms = total.count();
                entry.runs.push_back(run);
            } else {
                for (std::uint64_t seed : spec.seeds) {
                    const auto t0 = std::chrono::steady_clock::now();
                    const CentroidSet init = random_init(baseline_data, k, seed);
                    RunRecord run = detail::timed_run(baseline_data, init, spec.kmeans, seed);
                    const std::chrono::duration<double, std::milli> total =
                        std::chrono::steady_clock::now() - t0;
                    run.time_ms = total.count();
                    entry.runs.push_back(run);
                }
            }
            detail::finalize_entry(entry);
            report.entries.push_back(std::move(entry));
        }
    }
    return report;
}

namespace detail {

inline std::string full_precision(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline std::string significant(double v, int digits = 3) {
    std::ostringstream out;
    out << std::setprecision(digits) << v;
    return out.str();
}

inline nlohmann::json stat_json(const StatSummary& s) {
    return {{"median", s.median}, {"min", s.min}, {"max", s.max}};
}

inline void emit_table(const RunReport& report, std::ostream& out) {
    out << "# input: " << report.input_path << " (" << report.n_rows << " rows, "
        << report.n_features << " features)\n";
    out << "# impute: ";
    switch (report.spec.impute.kind) {
        case ImputeStrategy::Kind::mean: out << "mean"; break;
        case ImputeStrategy::Kind::minimum: out << "min"; break;
        case ImputeStrategy::Kind::maximum: out << "max"; break;
        case ImputeStrategy::Kind::constant:
            out << "constant:" << full_precision(report.spec.impute.fill);
            break;
    }
    out << ", max-iter: " << report.spec.kmeans.max_iterations
        << ", tol: " << full_precision(report.spec.kmeans.tolerance)
        << ", seeds: " << report.spec.seeds.size()
        << ", baseline data: " << (report.spec.baseline_on_raw ? "raw" : "normalized") << "\n";
    for (const auto& note : report.notes) out << "# note: " << note << "\n";

    const char* header[] = {"k", "algorithm", "time_ms", "iterations", "sse", "converged"};
    std::vector<std::vector<std::string>> cells;
    for (const auto& e : report.entries) {
        cells.push_back({std::to_string(e.k), to_string(e.algorithm),
                         significant(e.time_ms.median), significant(e.iterations.median),
                         significant(e.sse.median), significant(e.converged_fraction)});
    }
    std::size_t width[6];
    for (std::size_t c = 0; c < 6; ++c) {
        width[c] = std::string(header[c]).size();
        for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
    }
    for (std::size_t c = 0; c < 6; ++c)
        out << (c ? "  " : "") << std::left << std::setw(static_cast<int>(width[c])) << header[c];
    out << "\n";
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < 6; ++c)
            out << (c ? "  " : "") << std::left << std::setw(static_cast<int>(width[c])) << row[c];
        out << "\n";
    }
}

inline void emit_csv(const RunReport& report, std::ostream& out) {
    out << "k,algorithm,runs,time_ms_median,time_ms_min,time_ms_max,"
           "iterations_median,iterations_min,iterations_max,"
           "sse_median,sse_min,sse_max,converged_fraction\n";
    for (const auto& e : report.entries) {
        out << e.k << ',' << to_string(e.algorithm) << ',' << e.runs.size() << ','
            << full_precision(e.time_ms.median) << ',' << full_precision(e.time_ms.min) << ','
            << full_precision(e.time_ms.max) << ',' << full_precision(e.iterations.median) << ','
            << full_precision(e.iterations.min) << ',' << full_precision(e.iterations.max) << ','
            << full_precision(e.sse.median) << ',' << full_precision(e.sse.min) << ','
            << full_precision(e.sse.max) << ',' << full_precision(e.converged_fraction) << "\n";
    }
}

inline void emit_json(const RunReport& report, std::ostream& out) {
    nlohmann::json doc;
    doc["dataset"] = {{"path", report.input_path},
                      {"rows", report.n_rows},
                      {"features", report.n_features},
                      {"feature_names", report.feature_names},
                      {"has_labels", report.has_labels}};
    doc["bounds"] = {{"min", report.bounds.min},
                     {"max", report.bounds.max},
                     {"degenerate_features", report.bounds.degenerate_features()}};

    nlohmann::json config;
    config["k_values"] = report.spec.k_values;
    std::vector<std::string> algorithms;
    for (Algorithm a : report.spec.algorithms) algorithms.emplace_back(to_string(a));
    config["algorithms"] = algorithms;
    config["seeds"] = report.spec.seeds;
    config["weights"] =
        report.spec.weights ? report.spec.weights->values()
                            : WeightVector::uniform(report.n_features).values();
    switch (report.spec.impute.kind) {
        case ImputeStrategy::Kind::mean: config["impute"] = "mean"; break;
        case ImputeStrategy::Kind::minimum: config["impute"] = "min"; break;
        case ImputeStrategy::Kind::maximum: config["impute"] = "max"; break;
        case ImputeStrategy::Kind::constant:
            config["impute"] = "constant";
            config["impute_value"] = report.spec.impute.fill;
            break;
    }
    config["max_iterations"] = report.spec.kmeans.max_iterations;
    config["tolerance"] = report.spec.kmeans.tolerance;
    config["baseline_on_normalized"] = !report.spec.baseline_on_raw;
    doc["config"] = std::move(config);
    doc["notes"] = report.notes;

    doc["entries"] = nlohmann::json::array();
    for (const auto& e : report.entries) {
        nlohmann::json entry;
        entry["k"] = e.k;
        entry["algorithm"] = to_string(e.algorithm);
        entry["runs"] = e.runs.size();
        entry["time_ms"] = stat_json(e.time_ms);
        entry["iterations"] = stat_json(e.iterations);
        entry["sse"] = stat_json(e.sse);
        entry["converged_fraction"] = e.converged_fraction;
        entry["per_run"] = nlohmann::json::array();
        for (const auto& run : e.runs) {
            nlohmann::json r;
            if (run.seed)
                r["seed"] = *run.seed;
            else
                r["seed"] = nullptr;
            r["iterations"] = run.iterations;
            r["sse"] = run.sse;
            r["time_ms"] = run.time_ms;
            r["converged"] = run.converged;
            entry["per_run"].push_back(std::move(r));
        }
        doc["entries"].push_back(std::move(entry));
    }
    out << doc.dump(2) << "\n";
}

}  // namespace detail

/// Serialize a report. The table is aligned human-readable text with medians
/// at 3 significant digits; csv and json carry full precision.
inline void emit_report(const RunReport& report, ReportFormat format, std::ostream& out) {
    switch (format) {
        case ReportFormat::table: detail::emit_table(report, out); break;
        case ReportFormat::csv: detail::emit_csv(report, out); break;
        case ReportFormat::json: detail::emit_json(report, out); break;
    }
}

}  // namespace nkmeans
