#pragma once

// Lloyd's k-means over a fixed initial centroid set, plus the seeded
// random-row initialization used as the comparison baseline.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nkmeans/centroid_init.hpp"
#include "nkmeans/dataset.hpp"

namespace nkmeans {

using Assignment = std::vector<std::size_t>;  // cluster index per row

struct KMeansConfig {
    std::size_t max_iterations = 100;
    double tolerance = 1e-9;  // max centroid movement in any coordinate
};

struct ClusteringResult {
    CentroidSet centroids;
    Assignment assignment;
    std::size_t iterations = 0;
    double sse = 0.0;
    std::chrono::duration<double, std::milli> wall_time{0.0};
    bool converged = false;
};

/// Called after each update step with the post-update state.
using IterationObserver =
    std::function<void(std::size_t iteration, const CentroidSet&, const Assignment&)>;

namespace detail {

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        acc += d * d;
    }
    return acc;
}

inline void check_dims(const Dataset& data, const CentroidSet& centroids, const char* who) {
    if (centroids.dim != data.n_features())
        throw std::invalid_argument(std::string(who) + ": centroid dimension " +
                                    std::to_string(centroids.dim) + " does not match dataset (" +
                                    std::to_string(data.n_features()) + ")");
    if (centroids.k < 1)
        throw std::invalid_argument(std::string(who) + ": centroid set is empty");
}

// uniform draw from [0, bound) by rejection; fully determined by the
// mt19937_64 output sequence, so results are portable across platforms
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t threshold = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= threshold);
    return x % bound;
}

}  // namespace detail

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("euclidean_distance: vector lengths differ, " +
                                    std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    return std::sqrt(detail::squared_distance(a, b));
}

/// Assign every row to its nearest centroid (squared Euclidean distance,
/// ties to the lowest centroid index).
inline Assignment assign_points(const Dataset& data, const CentroidSet& centroids) {
    detail::check_dims(data, centroids, "assign_points");
    Assignment out(data.n_rows());
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        auto point = data.row(i);
        std::size_t best = 0;
        double best_dist = detail::squared_distance(point, centroids.row(0));
        for (std::size_t c = 1; c < centroids.k; ++c) {
            const double dist = detail::squared_distance(point, centroids.row(c));
            if (dist < best_dist) {
                best_dist = dist;
                best = c;
            }
        }
        out[i] = best;
    }
    return out;
}

/// Move each centroid to the coordinate-wise mean of its assigned rows.
/// A cluster with no assigned rows keeps its previous centroid.
inline CentroidSet update_centroids(const Dataset& data, const Assignment& assignment,
                                    const CentroidSet& previous) {
    detail::check_dims(data, previous, "update_centroids");
    if (assignment.size() != data.n_rows())
        throw std::invalid_argument("update_centroids: assignment covers " +
                                    std::to_string(assignment.size()) + " rows, dataset has " +
                                    std::to_string(data.n_rows()));
    const std::size_t k = previous.k;
    const std::size_t m = previous.dim;

    std::vector<double> sums(k * m, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        const std::size_t c = assignment[i];
        if (c >= k)
            throw std::invalid_argument("update_centroids: assignment value " +
                                        std::to_string(c) + " out of range for k = " +
                                        std::to_string(k));
        ++counts[c];
        auto row = data.row(i);
        for (std::size_t j = 0; j < m; ++j) sums[c * m + j] += row[j];
    }

    CentroidSet out;
    out.k = k;
    out.dim = m;
    out.values.resize(k * m);
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) {
            auto prev = previous.row(c);
            std::copy(prev.begin(), prev.end(), out.row(c).begin());
        } else {
            for (std::size_t j = 0; j < m; ++j)
                out.values[c * m + j] = sums[c * m + j] / static_cast<double>(counts[c]);
        }
    }
    return out;
}

/// Sum over rows of squared distance to the assigned centroid.
inline double sse(const Dataset& data, const CentroidSet& centroids,
                  const Assignment& assignment) {
    detail::check_dims(data, centroids, "sse");
    if (assignment.size() != data.n_rows())
        throw std::invalid_argument("sse: assignment covers " + std::to_string(assignment.size()) +
                                    " rows, dataset has " + std::to_string(data.n_rows()));
    double acc = 0.0;
    for (std::size_t i = 0; i < data.n_rows(); ++i)
        acc += detail::squared_distance(data.row(i), centroids.row(assignment[i]));
    return acc;
}

/// Alternate assignment and update passes from the given initial centroids.
///
/// One iteration = one assign + one update. The loop stops when a fresh
/// assignment repeats the previous one (counted iterations unchanged), when
/// no centroid coordinate moved more than config.tolerance, or at
/// config.max_iterations. The observer, when given, sees the post-update
/// state of every counted iteration.
inline ClusteringResult lloyd(const Dataset& data, const CentroidSet& initial,
                              const KMeansConfig& config = {},
                              const IterationObserver& observer = {}) {
    detail::check_dims(data, initial, "lloyd");
    if (initial.k > data.n_rows())
        throw std::invalid_argument("lloyd: " + std::to_string(initial.k) + " centroids for " +
                                    std::to_string(data.n_rows()) + " rows");
    if (config.max_iterations < 1)
        throw std::invalid_argument("lloyd: max_iterations must be >= 1");
    if (!(config.tolerance >= 0.0))
        throw std::invalid_argument("lloyd: tolerance must be >= 0");

    const auto start = std::chrono::steady_clock::now();

    ClusteringResult result;
    result.centroids = initial;
    result.centroids.source_rows.clear();

    Assignment previous;
    bool has_previous = false;
    while (result.iterations < config.max_iterations) {
        Assignment assignment = assign_points(data, result.centroids);
        if (has_previous && assignment == previous) {
            result.converged = true;
            break;
        }

        CentroidSet updated = update_centroids(data, assignment, result.centroids);
        double movement = 0.0;
        for (std::size_t v = 0; v < updated.values.size(); ++v)
            movement = std::max(movement, std::abs(updated.values[v] - result.centroids.values[v]));
        result.centroids = std::move(updated);
        previous = std::move(assignment);
        has_previous = true;
        ++result.iterations;
        if (observer) observer(result.iterations, result.centroids, previous);
        if (movement <= config.tolerance) {
            result.converged = true;
            break;
        }
    }

    result.assignment = std::move(previous);
    result.sse = sse(data, result.centroids, result.assignment);
    result.wall_time = std::chrono::steady_clock::now() - start;
    return result;
}

/// k distinct data rows drawn without replacement from a mt19937_64 seeded
/// with `seed` (partial Fisher-Yates), as the random-initialization baseline.
inline CentroidSet random_init(const Dataset& data, std::size_t k, std::uint64_t seed) {
    const std::size_t n = data.n_rows();
    if (k < 1 || k > n)
        throw std::invalid_argument("random_init: need 1 <= k <= n, got k = " +
                                    std::to_string(k));
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> indices(n);
    for (std::size_t i = 0; i < n; ++i) indices[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + detail::uniform_index(rng, n - i);
        std::swap(indices[i], indices[j]);
    }

    CentroidSet out;
    out.k = k;
    out.dim = data.n_features();
    out.values.reserve(k * out.dim);
    out.source_rows.assign(indices.begin(), indices.begin() + k);
    for (std::size_t c = 0; c < k; ++c) {
        auto row = data.row(out.source_rows[c]);
        out.values.insert(out.values.end(), row.begin(), row.end());
    }
    return out;
}

}  // namespace nkmeans
