// nkbench: compare weighted-average deterministic seeding against random
// seeding for k-means over a grid of k values, in the style of a
// normalization-first clustering benchmark.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nkmeans/nkmeans.hpp"

namespace {

nkmeans::ImputeStrategy parse_impute(const std::string& text) {
    if (text == "mean") return nkmeans::ImputeStrategy::mean();
    if (text == "min") return nkmeans::ImputeStrategy::minimum();
    if (text == "max") return nkmeans::ImputeStrategy::maximum();
    if (text.rfind("constant:", 0) == 0) {
        try {
            return nkmeans::ImputeStrategy::constant(std::stod(text.substr(9)));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--impute", "bad constant in '" + text + "'");
        }
    }
    throw CLI::ValidationError("--impute", "expected mean|min|max|constant:C, got '" + text + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-means benchmark: min-max normalization + weighted-average seeding "
                 "vs random seeding"};

    nkmeans::RunSpec spec;
    std::vector<std::string> algorithm_names = {"nk_means", "kmeans_random"};
    std::vector<std::uint64_t> seeds;
    std::size_t num_seeds = 20;
    std::vector<double> weights;
    std::string impute = "mean";
    std::string format = "table";
    std::string output_path;
    std::string delimiter = ",";
    std::optional<std::size_t> label_column;
    std::vector<std::string> missing_tokens;

    app.add_option("--input", spec.input_path, "delimited dataset to cluster")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--k", spec.k_values, "cluster counts to sweep")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    app.add_option("--algorithms", algorithm_names, "subset of {nk_means,kmeans_random}")
        ->delimiter(',');
    auto* seeds_opt =
        app.add_option("--seeds", seeds, "explicit seeds for the random baseline")->delimiter(',');
    app.add_option("--num-seeds", num_seeds, "use seeds 0..N-1 for the random baseline")
        ->excludes(seeds_opt);
    app.add_option("--weights", weights, "per-feature attribute weights")->delimiter(',');
    app.add_option("--impute", impute, "missing-value strategy: mean|min|max|constant:C");
    app.add_option("--max-iter", spec.kmeans.max_iterations, "iteration cap")
        ->check(CLI::PositiveNumber);
    app.add_option("--tol", spec.kmeans.tolerance, "centroid movement tolerance")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("--baseline-raw", spec.baseline_on_raw,
                 "run the random baseline on un-normalized data");
    app.add_option("--format", format, "report format")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    app.add_option("--output", output_path, "write the report here instead of stdout");
    app.add_option("--delimiter", delimiter, "field separator (single character)");
    app.add_flag("--has-header", spec.parse.has_header, "first row holds column names");
    app.add_option("--label-column", label_column,
                   "column index holding text labels, excluded from clustering");
    app.add_option("--missing-token", missing_tokens,
                   "token treated as a missing cell (repeatable; default: empty string and '?')");

    CLI11_PARSE(app, argc, argv);

    try {
        if (delimiter.size() != 1)
            throw std::invalid_argument("--delimiter must be a single character");
        spec.parse.delimiter = delimiter[0];
        spec.parse.label_column = label_column;
        if (!missing_tokens.empty()) spec.parse.missing_tokens = missing_tokens;
        spec.impute = parse_impute(impute);

        spec.algorithms.clear();
        for (const auto& name : algorithm_names) {
            if (name == "nk_means")
                spec.algorithms.push_back(nkmeans::Algorithm::nk_means);
            else if (name == "kmeans_random")
                spec.algorithms.push_back(nkmeans::Algorithm::kmeans_random);
            else
                throw std::invalid_argument("unknown algorithm '" + name + "'");
        }
        if (!seeds.empty())
            spec.seeds = seeds;
        else
            spec.seeds = nkmeans::RunSpec::default_seeds(num_seeds);
        if (!weights.empty()) spec.weights = nkmeans::WeightVector(weights);

        const nkmeans::RunReport report = nkmeans::run_pipeline(spec);
        for (const auto& note : report.notes) std::cerr << "note: " << note << "\n";

        nkmeans::ReportFormat fmt = nkmeans::ReportFormat::table;
        if (format == "csv") fmt = nkmeans::ReportFormat::csv;
        if (format == "json") fmt = nkmeans::ReportFormat::json;

        if (output_path.empty()) {
            nkmeans::emit_report(report, fmt, std::cout);
        } else {
            std::ofstream out(output_path);
            if (!out) throw std::runtime_error("cannot write '" + output_path + "'");
            nkmeans::emit_report(report, fmt, out);
        }
        return 0;
    } catch (const std::exception& err) {
        std::cerr << "nkbench: " << err.what() << "\n";
        return 1;
    }
}
