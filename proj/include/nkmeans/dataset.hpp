#pragma once

// Delimited numeric dataset loading and missing-value imputation.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nkmeans {

/// Error while reading delimited input; message carries row/column context.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseOptions {
    char delimiter = ',';
    bool has_header = false;
    std::optional<std::size_t> label_column;          // column index in the file
    std::vector<std::string> missing_tokens = {"", "?"};
};

/// Parsed grid before imputation: feature cells may be missing, the label
/// column (if any) has been split off as text.
struct RawDataset {
    std::vector<std::vector<std::optional<double>>> rows;
    std::vector<std::string> column_names;            // feature columns only
    std::optional<std::size_t> label_column;          // original file index
    std::vector<std::string> labels;                  // empty when no label column

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_features() const { return column_names.size(); }
};

/// Fully numeric n x m dataset, row-major. Construction validates that every
/// value is finite and that n >= 1, m >= 1.
class Dataset {
public:
    Dataset(std::vector<double> values, std::size_t n_rows, std::size_t n_cols,
            std::vector<std::string> feature_names = {},
            std::vector<std::string> labels = {})
        : values_(std::move(values)), n_rows_(n_rows), n_cols_(n_cols),
          feature_names_(std::move(feature_names)), labels_(std::move(labels)) {
        if (n_rows_ == 0 || n_cols_ == 0)
            throw std::invalid_argument("Dataset: need at least one row and one feature");
        if (values_.size() != n_rows_ * n_cols_)
            throw std::invalid_argument("Dataset: value count does not match n_rows * n_cols");
        if (feature_names_.empty()) {
            feature_names_.reserve(n_cols_);
            for (std::size_t j = 0; j < n_cols_; ++j)
                feature_names_.push_back("f" + std::to_string(j));
        } else if (feature_names_.size() != n_cols_) {
            throw std::invalid_argument("Dataset: feature name count does not match n_cols");
        }
        if (!labels_.empty() && labels_.size() != n_rows_)
            throw std::invalid_argument("Dataset: label count does not match n_rows");
        for (double v : values_)
            if (!std::isfinite(v))
                throw std::invalid_argument("Dataset: values must be finite");
    }

    // convenience for building small datasets in place
    explicit Dataset(const std::vector<std::vector<double>>& rows,
                     std::vector<std::string> feature_names = {},
                     std::vector<std::string> labels = {})
        : Dataset(flatten(rows), rows.size(), rows.empty() ? 0 : rows.front().size(),
                  std::move(feature_names), std::move(labels)) {}

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_features() const { return n_cols_; }

    double at(std::size_t i, std::size_t j) const { return values_[i * n_cols_ + j]; }
    std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * n_cols_, n_cols_};
    }
    const std::vector<double>& values() const { return values_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<std::string>& labels() const { return labels_; }
    bool has_labels() const { return !labels_.empty(); }

private:
    static std::vector<double> flatten(const std::vector<std::vector<double>>& rows) {
        std::vector<double> out;
        for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
        return out;
    }

    std::vector<double> values_;  // row-major n x m
    std::size_t n_rows_;
    std::size_t n_cols_;
    std::vector<std::string> feature_names_;
    std::vector<std::string> labels_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view line, char delimiter) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

// strict full-token parse; rejects non-finite values
inline std::optional<double> parse_number(std::string_view token) {
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || token.empty() || !std::isfinite(value))
        return std::nullopt;
    return value;
}

inline bool matches_any(std::string_view token, const std::vector<std::string>& tokens) {
    for (const auto& t : tokens)
        if (token == t) return true;
    return false;
}

}  // namespace detail

/// Parse delimited text into a RawDataset. Every data row must have the same
/// field count; feature cells must be numeric or match a missing token.
/// Throws ParseError with 1-based line/column context on malformed input.
/// Input with no data rows parses to an empty RawDataset; the Dataset
/// invariants reject it at imputation time.
inline RawDataset parse_delimited(std::istream& in, const ParseOptions& options = {}) {
    RawDataset raw;
    raw.label_column = options.label_column;

    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> field_count;
    std::vector<std::string> header;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = line;
        if (!sv.empty() && sv.back() == '\r') sv.remove_suffix(1);
        if (sv.empty()) continue;

        auto fields = detail::split(sv, options.delimiter);
        if (!field_count) {
            field_count = fields.size();
            if (options.label_column && *options.label_column >= *field_count)
                throw ParseError("label column " + std::to_string(*options.label_column) +
                                 " out of range for " + std::to_string(*field_count) +
                                 "-column input");
        } else if (fields.size() != *field_count) {
            throw ParseError("row " + std::to_string(line_no) + ": expected " +
                             std::to_string(*field_count) + " fields, got " +
                             std::to_string(fields.size()));
        }

        if (options.has_header && header.empty() && raw.rows.empty()) {
            for (auto f : fields) header.emplace_back(detail::trim(f));
            continue;
        }

        std::vector<std::optional<double>> record;
        record.reserve(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            std::string_view cell = detail::trim(fields[c]);
            if (options.label_column && c == *options.label_column) {
                raw.labels.emplace_back(cell);
                continue;
            }
            if (detail::matches_any(cell, options.missing_tokens)) {
                record.push_back(std::nullopt);
                continue;
            }
            auto value = detail::parse_number(cell);
            if (!value)
                throw ParseError("row " + std::to_string(line_no) + ", column " +
                                 std::to_string(c + 1) + ": cannot parse '" + std::string(cell) +
                                 "' as a number");
            record.push_back(*value);
        }
        raw.rows.push_back(std::move(record));
    }

    const std::size_t total_cols = field_count.value_or(0);
    for (std::size_t c = 0; c < total_cols; ++c) {
        if (options.label_column && c == *options.label_column) continue;
        if (c < header.size() && !std::string_view(detail::trim(header[c])).empty())
            raw.column_names.emplace_back(detail::trim(header[c]));
        else
            raw.column_names.push_back("f" + std::to_string(c));
    }
    return raw;
}

inline RawDataset parse_delimited(const std::string& text, const ParseOptions& options = {}) {
    std::istringstream in(text);
    return parse_delimited(in, options);
}

/// Per-column fill rule for missing cells.
struct ImputeStrategy {
    enum class Kind { constant, mean, minimum, maximum };

    Kind kind = Kind::mean;
    double fill = 0.0;  // used by Kind::constant

    static ImputeStrategy mean() { return {Kind::mean, 0.0}; }
    static ImputeStrategy minimum() { return {Kind::minimum, 0.0}; }
    static ImputeStrategy maximum() { return {Kind::maximum, 0.0}; }
    static ImputeStrategy constant(double value) { return {Kind::constant, value}; }
};

/// Replace missing cells with the strategy's per-column statistic computed
/// over that column's observed values. Throws if a column is fully missing
/// under a non-constant strategy, naming the column.
inline Dataset impute_missing(const RawDataset& raw,
                              const ImputeStrategy& strategy = ImputeStrategy::mean()) {
    const std::size_t n = raw.n_rows();
    const std::size_t m = raw.n_features();
    if (n == 0 || m == 0)
        throw std::invalid_argument("impute_missing: dataset has no rows or no features");

    std::vector<double> fill(m, strategy.fill);
    if (strategy.kind != ImputeStrategy::Kind::constant) {
        for (std::size_t j = 0; j < m; ++j) {
            double sum = 0.0;
            double lo = std::numeric_limits<double>::infinity();
            double hi = -std::numeric_limits<double>::infinity();
            std::size_t count = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (!raw.rows[i][j]) continue;
                const double v = *raw.rows[i][j];
                sum += v;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
                ++count;
            }
            if (count == 0)
                throw std::runtime_error("impute_missing: column '" + raw.column_names[j] +
                                         "' (index " + std::to_string(j) +
                                         ") has no observed values");
            switch (strategy.kind) {
                case ImputeStrategy::Kind::mean:    fill[j] = sum / static_cast<double>(count); break;
                case ImputeStrategy::Kind::minimum: fill[j] = lo; break;
                case ImputeStrategy::Kind::maximum: fill[j] = hi; break;
                case ImputeStrategy::Kind::constant: break;
            }
        }
    }

    std::vector<double> values;
    values.reserve(n * m);
    for (std::size_t i = 0; i < n; ++i) {
        if (raw.rows[i].size() != m)
            throw std::invalid_argument("impute_missing: ragged RawDataset");
        for (std::size_t j = 0; j < m; ++j)
            values.push_back(raw.rows[i][j] ? *raw.rows[i][j] : fill[j]);
    }
    return Dataset(std::move(values), n, m, raw.column_names, raw.labels);
}

namespace detail {

inline void append_number(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
}

}  // namespace detail

/// Write a dataset back out as delimited text. Values are printed with
/// shortest round-trip precision, so parse -> write -> parse is exact.
/// Labels, when present, go in a final column.
inline void write_delimited(const Dataset& data, std::ostream& out, char delimiter = ',',
                            bool header = true) {
    std::string line;
    if (header) {
        for (std::size_t j = 0; j < data.n_features(); ++j) {
            if (j) line += delimiter;
            line += data.feature_names()[j];
        }
        if (data.has_labels()) {
            line += delimiter;
            line += "label";
        }
        line += '\n';
        out << line;
    }
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        line.clear();
        for (std::size_t j = 0; j < data.n_features(); ++j) {
            if (j) line += delimiter;
            detail::append_number(line, data.at(i, j));
        }
        if (data.has_labels()) {
            line += delimiter;
            line += data.labels()[i];
        }
        line += '\n';
        out << line;
    }
}

}  // namespace nkmeans
