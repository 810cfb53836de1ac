#pragma once

// Per-feature bounds and min-max scaling to [0, 1].

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "nkmeans/dataset.hpp"

namespace nkmeans {

/// Observed (min, max) per feature. A feature with min == max is degenerate:
/// it carries no clustering information and normalizes to 0.
struct FeatureBounds {
    std::vector<double> min;
    std::vector<double> max;

    std::size_t size() const { return min.size(); }

    bool is_degenerate(std::size_t j) const { return min[j] == max[j]; }

    std::vector<std::size_t> degenerate_features() const {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < size(); ++j)
            if (is_degenerate(j)) out.push_back(j);
        return out;
    }
};

inline FeatureBounds compute_bounds(const Dataset& data) {
    const std::size_t m = data.n_features();
    FeatureBounds bounds{std::vector<double>(data.row(0).begin(), data.row(0).end()),
                         std::vector<double>(data.row(0).begin(), data.row(0).end())};
    for (std::size_t i = 1; i < data.n_rows(); ++i) {
        auto row = data.row(i);
        for (std::size_t j = 0; j < m; ++j) {
            if (row[j] < bounds.min[j]) bounds.min[j] = row[j];
            if (row[j] > bounds.max[j]) bounds.max[j] = row[j];
        }
    }
    return bounds;
}

/// Rescale each cell v to (v - min_j) / (max_j - min_j). Degenerate features
/// map to 0. Feature names and labels are carried through.
inline Dataset min_max_normalize(const Dataset& data, const FeatureBounds& bounds) {
    const std::size_t m = data.n_features();
    if (bounds.size() != m)
        throw std::invalid_argument("min_max_normalize: bounds cover " +
                                    std::to_string(bounds.size()) + " features, dataset has " +
                                    std::to_string(m));
    std::vector<double> out;
    out.reserve(data.n_rows() * m);
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        auto row = data.row(i);
        for (std::size_t j = 0; j < m; ++j) {
            if (bounds.is_degenerate(j))
                out.push_back(0.0);
            else
                out.push_back((row[j] - bounds.min[j]) / (bounds.max[j] - bounds.min[j]));
        }
    }
    return Dataset(std::move(out), data.n_rows(), m, data.feature_names(), data.labels());
}

/// Inverse of min_max_normalize for a single point: u -> min_j + u * (max_j - min_j).
inline std::vector<double> denormalize_point(std::span<const double> point,
                                             const FeatureBounds& bounds) {
    if (bounds.size() != point.size())
        throw std::invalid_argument("denormalize_point: bounds cover " +
                                    std::to_string(bounds.size()) + " features, point has " +
                                    std::to_string(point.size()));
    std::vector<double> out(point.size());
    for (std::size_t j = 0; j < point.size(); ++j)
        out[j] = bounds.min[j] + point[j] * (bounds.max[j] - bounds.min[j]);
    return out;
}

}  // namespace nkmeans
