#pragma once

// Deterministic initial centroids from weighted-average scores: score every
// point, sort, split the sorted order into k near-equal blocks, and take the
// point nearest each block's mean score.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nkmeans/dataset.hpp"

namespace nkmeans {

/// Per-attribute weights. All entries must be finite and >= 0, with at least
/// one > 0.
class WeightVector {
public:
    explicit WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
        if (weights_.empty())
            throw std::invalid_argument("WeightVector: must not be empty");
        double max_w = 0.0;
        for (double w : weights_) {
            if (!std::isfinite(w) || w < 0.0)
                throw std::invalid_argument("WeightVector: entries must be finite and >= 0");
            max_w = std::max(max_w, w);
        }
        if (max_w == 0.0)
            throw std::invalid_argument("WeightVector: at least one entry must be > 0");
    }

    static WeightVector uniform(std::size_t m) {
        return WeightVector(std::vector<double>(m, 1.0));
    }

    std::size_t size() const { return weights_.size(); }
    const std::vector<double>& values() const { return weights_; }

    /// Weights rescaled so the largest is exactly 1. Scoring uses this form
    /// because only relative weights matter for ordering and selection.
    ///
    /// Scaling all weights by c > 0 leaves the canonical form bit-identical
    /// whenever the products c*w_j are exact: always for uniform weights
    /// (c/c == 1), and for any weights when c is a power of two. Other
    /// scalings can perturb scores by an ulp, which moves a selection only
    /// when two candidates are a near-exact tie.
    std::vector<double> canonical() const {
        const double max_w = *std::max_element(weights_.begin(), weights_.end());
        std::vector<double> out(weights_.size());
        for (std::size_t j = 0; j < weights_.size(); ++j) out[j] = weights_[j] / max_w;
        return out;
    }

private:
    std::vector<double> weights_;
};

/// A data point reduced to its scalar score.
struct ScoredPoint {
    std::size_t row_index;
    double score;
};

/// k centroids in feature space; source_rows holds the originating row
/// indices when the centroids are data points.
struct CentroidSet {
    std::vector<double> values;  // row-major k x dim
    std::size_t k = 0;
    std::size_t dim = 0;
    std::vector<std::size_t> source_rows;  // empty unless centroids are data rows

    std::span<const double> row(std::size_t c) const { return {values.data() + c * dim, dim}; }
    std::span<double> row(std::size_t c) { return {values.data() + c * dim, dim}; }
};

/// (sum_j w_j * x_j) / m with the literal weights as given.
inline double weighted_score(std::span<const double> point, const WeightVector& weights) {
    if (weights.size() != point.size())
        throw std::invalid_argument("weighted_score: point has " + std::to_string(point.size()) +
                                    " attributes, weights " + std::to_string(weights.size()));
    double acc = 0.0;
    for (std::size_t j = 0; j < point.size(); ++j) acc += weights.values()[j] * point[j];
    return acc / static_cast<double>(point.size());
}

/// Score all rows and return them sorted ascending by score, ties by row
/// index. Scores are computed with the canonical (unit-max) weights.
inline std::vector<ScoredPoint> score_and_sort(const Dataset& data, const WeightVector& weights) {
    if (weights.size() != data.n_features())
        throw std::invalid_argument("score_and_sort: dataset has " +
                                    std::to_string(data.n_features()) + " features, weights " +
                                    std::to_string(weights.size()));
    const std::vector<double> w = weights.canonical();
    const auto m = static_cast<double>(data.n_features());

    std::vector<ScoredPoint> scored;
    scored.reserve(data.n_rows());
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        auto row = data.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) acc += w[j] * row[j];
        scored.push_back({i, acc / m});
    }
    std::sort(scored.begin(), scored.end(), [](const ScoredPoint& a, const ScoredPoint& b) {
        return a.score != b.score ? a.score < b.score : a.row_index < b.row_index;
    });
    return scored;
}

/// Split the sorted order into k contiguous blocks: the first (n mod k)
/// blocks get ceil(n/k) points, the rest floor(n/k).
inline std::vector<std::vector<ScoredPoint>> partition_k(const std::vector<ScoredPoint>& sorted,
                                                         std::size_t k) {
    const std::size_t n = sorted.size();
    if (k < 1 || k > n)
        throw std::invalid_argument("partition_k: k must be in [1, " + std::to_string(n) +
                                    "], got " + std::to_string(k));
    const std::size_t base = n / k;
    const std::size_t remainder = n % k;

    std::vector<std::vector<ScoredPoint>> subsets(k);
    std::size_t pos = 0;
    for (std::size_t s = 0; s < k; ++s) {
        const std::size_t size = base + (s < remainder ? 1 : 0);
        subsets[s].assign(sorted.begin() + pos, sorted.begin() + pos + size);
        pos += size;
    }
    return subsets;
}

/// Row index of the point whose score is nearest the subset's mean score.
/// Equidistant candidates resolve to the lowest score, then the lowest row
/// index: preferring the score keeps the choice independent of how rows
/// happen to be numbered, and the row index still settles duplicate scores.
///
/// Two-point subsets are handled by that rule directly: their mean is the
/// exact midpoint, so both points are equidistant in exact arithmetic, and
/// evaluating (a+b)/2 in doubles would break the tie by rounding noise.
inline std::size_t nearest_to_mean(const std::vector<ScoredPoint>& subset) {
    if (subset.empty())
        throw std::invalid_argument("nearest_to_mean: subset must not be empty");

    auto preferred = [](const ScoredPoint& a, const ScoredPoint& b) {
        return a.score != b.score ? a.score < b.score : a.row_index < b.row_index;
    };
    if (subset.size() == 2)
        return preferred(subset[0], subset[1]) ? subset[0].row_index : subset[1].row_index;

    double acc = 0.0;
    for (const auto& p : subset) acc += p.score;
    const double mean = acc / static_cast<double>(subset.size());

    const ScoredPoint* best = &subset.front();
    double best_dist = std::abs(best->score - mean);
    for (std::size_t i = 1; i < subset.size(); ++i) {
        const double dist = std::abs(subset[i].score - mean);
        if (dist < best_dist || (dist == best_dist && preferred(subset[i], *best))) {
            best_dist = dist;
            best = &subset[i];
        }
    }
    return best->row_index;
}

/// Full deterministic seeding pass: score, sort, partition, then pick the
/// nearest-to-mean row of each subset as a centroid. Expects data that has
/// already been normalized.
inline CentroidSet nk_initial_centroids(const Dataset& data, const WeightVector& weights,
                                        std::size_t k) {
    const auto sorted = score_and_sort(data, weights);
    const auto subsets = partition_k(sorted, k);

    CentroidSet centroids;
    centroids.k = k;
    centroids.dim = data.n_features();
    centroids.values.reserve(k * centroids.dim);
    centroids.source_rows.reserve(k);
    for (const auto& subset : subsets) {
        const std::size_t row = nearest_to_mean(subset);
        centroids.source_rows.push_back(row);
        auto point = data.row(row);
        centroids.values.insert(centroids.values.end(), point.begin(), point.end());
    }
    return centroids;
}

}  // namespace nkmeans
