#include <algorithm>
#include <limits>
#include <string>

#include "jkcov/error.hpp"
#include "jkcov/regressors.hpp"
#include "jkcov/rng.hpp"

namespace jkcov {

namespace {

double unit_draw(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t nearest_centroid(const Matrix& centroids, std::span<const double> x) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
        const double d = squared_distance(x, centroids.row(c));
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

Matrix plus_plus_init(const Matrix& points, std::size_t k, Rng& rng) {
    const std::size_t n = points.rows();
    Matrix centroids(k, points.cols());
    std::vector<bool> chosen(n, false);
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());

    auto take = [&](std::size_t c, std::size_t idx) {
        chosen[idx] = true;
        auto src = points.row(idx);
        std::copy(src.begin(), src.end(), centroids.row(c).begin());
        for (std::size_t i = 0; i < n; ++i) dist[i] = std::min(dist[i], squared_distance(points.row(i), src));
    };

    take(0, uniform_index(rng, n));
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += dist[i];
        std::size_t pick = n;
        if (total > 0.0) {
            const double target = unit_draw(rng) * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (dist[i] <= 0.0) continue;
                acc += dist[i];
                pick = i;
                if (acc > target) break;
            }
        }
        if (pick == n) {
            // All remaining mass is zero (duplicate points): take an unchosen row.
            std::vector<std::size_t> free;
            for (std::size_t i = 0; i < n; ++i)
                if (!chosen[i]) free.push_back(i);
            pick = free[uniform_index(rng, free.size())];
        }
        take(c, pick);
    }
    return centroids;
}

Matrix cluster_means(const Matrix& points, const std::vector<std::size_t>& assign, std::size_t k) {
    Matrix means(k, points.cols());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.rows(); ++i) {
        auto dst = means.row(assign[i]);
        auto src = points.row(i);
        for (std::size_t j = 0; j < src.size(); ++j) dst[j] += src[j];
        ++counts[assign[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) continue;
        for (double& v : means.row(c)) v /= static_cast<double>(counts[c]);
    }
    return means;
}

// Moves the point farthest from its own centroid into each empty cluster.
void repair_empty(const Matrix& points, std::vector<std::size_t>& assign, Matrix& centroids) {
    const std::size_t k = centroids.rows();
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t a : assign) ++counts[a];
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] > 0) continue;
        std::size_t far = points.rows();
        double far_d = -1.0;
        for (std::size_t i = 0; i < points.rows(); ++i) {
            if (counts[assign[i]] < 2) continue;
            const double d = squared_distance(points.row(i), centroids.row(assign[i]));
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        --counts[assign[far]];
        assign[far] = c;
        counts[c] = 1;
        auto src = points.row(far);
        std::copy(src.begin(), src.end(), centroids.row(c).begin());
    }
}

} // namespace

KMeansResult kmeans(const Matrix& points, std::size_t clusters, std::uint64_t seed, std::size_t max_iter) {
    const std::size_t n = points.rows();
    if (clusters < 1 || clusters > n) {
        throw InvalidInput("kmeans: K=" + std::to_string(clusters) + " outside [1, N=" + std::to_string(n) + "]");
    }
    Rng rng(seed);
    KMeansResult result;
    result.centroids = plus_plus_init(points, clusters, rng);
    result.assignments.resize(n);
    for (std::size_t i = 0; i < n; ++i) result.assignments[i] = nearest_centroid(result.centroids, points.row(i));
    repair_empty(points, result.assignments, result.centroids);

    std::vector<std::size_t> next(n);
    while (result.iterations < max_iter) {
        ++result.iterations;
        result.centroids = cluster_means(points, result.assignments, clusters);
        for (std::size_t i = 0; i < n; ++i) next[i] = nearest_centroid(result.centroids, points.row(i));
        repair_empty(points, next, result.centroids);
        if (next == result.assignments) break;
        result.assignments = next;
    }
    result.centroids = cluster_means(points, result.assignments, clusters);
    return result;
}

double within_cluster_ss(const Matrix& points, const KMeansResult& result) {
    double wss = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        wss += squared_distance(points.row(i), result.centroids.row(result.assignments[i]));
    }
    return wss;
}

std::vector<ElbowRow> elbow_table(const Matrix& points, std::size_t max_clusters, std::uint64_t seed) {
    std::vector<ElbowRow> rows;
    const std::size_t top = std::min(max_clusters, points.rows());
    for (std::size_t k = 1; k <= top; ++k) {
        rows.push_back({k, within_cluster_ss(points, kmeans(points, k, derive_seed(seed, k)))});
    }
    return rows;
}

} // namespace jkcov
