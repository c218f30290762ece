#include <limits>
#include <string>

#include <Eigen/Dense>

#include "jkcov/error.hpp"
#include "jkcov/regressors.hpp"

namespace jkcov {

namespace {

ClusterFit fit_cluster(const Matrix& z, const std::vector<double>& y, const std::vector<std::size_t>& rows,
                       std::span<const double> centroid) {
    const std::size_t d = z.cols();
    ClusterFit fit;
    fit.centroid.assign(centroid.begin(), centroid.end());
    fit.coefficients.assign(d, 0.0);
    fit.size = rows.size();

    double mean = 0.0;
    for (std::size_t r : rows) mean += y[r];
    mean /= static_cast<double>(rows.size());

    if (rows.size() >= d + 2) {
        const auto m = static_cast<Eigen::Index>(rows.size());
        Eigen::MatrixXd design(m, static_cast<Eigen::Index>(d + 1));
        Eigen::VectorXd target(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            const std::size_t r = rows[static_cast<std::size_t>(i)];
            design(i, 0) = 1.0;
            for (std::size_t j = 0; j < d; ++j) design(i, static_cast<Eigen::Index>(j + 1)) = z(r, j);
            target(i) = y[r];
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
        if (qr.rank() == static_cast<Eigen::Index>(d + 1)) {
            const Eigen::VectorXd beta = qr.solve(target);
            if (beta.allFinite()) {
                fit.intercept = beta(0);
                for (std::size_t j = 0; j < d; ++j) fit.coefficients[j] = beta(static_cast<Eigen::Index>(j + 1));
                return fit;
            }
        }
    }
    fit.intercept = mean;
    fit.mean_fallback = true;
    return fit;
}

} // namespace

ClusteredLrModel::ClusteredLrModel(StandardizationParams standardization, std::vector<ClusterFit> clusters)
    : standardization_(std::move(standardization)), clusters_(std::move(clusters)) {
    if (clusters_.empty()) throw InvalidInput("ClusteredLrModel: no clusters");
}

std::size_t ClusteredLrModel::nearest_cluster(std::span<const double> z) const {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < clusters_.size(); ++c) {
        const double d = squared_distance(z, clusters_[c].centroid);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

double ClusteredLrModel::predict(std::span<const double> x) const {
    const auto z = standardization_.apply(x);
    const ClusterFit& fit = clusters_[nearest_cluster(z)];
    double value = fit.intercept;
    for (std::size_t j = 0; j < z.size(); ++j) value += fit.coefficients[j] * z[j];
    return value;
}

ClusteredLrModel fit_clustered_lr(const RegressionDataset& data, std::size_t clusters, std::uint64_t seed,
                                  std::size_t max_iter) {
    if (clusters < 1 || clusters > data.size()) {
        throw InvalidInput("fit_clustered_lr: K_c=" + std::to_string(clusters) + " outside [1, N=" +
                           std::to_string(data.size()) + "]");
    }
    auto [z, params] = standardize(data.features());
    const KMeansResult km = kmeans(z, clusters, seed, max_iter);

    std::vector<std::vector<std::size_t>> members(clusters);
    for (std::size_t i = 0; i < km.assignments.size(); ++i) members[km.assignments[i]].push_back(i);

    std::vector<ClusterFit> fits;
    fits.reserve(clusters);
    for (std::size_t c = 0; c < clusters; ++c) {
        fits.push_back(fit_cluster(z, data.responses(), members[c], km.centroids.row(c)));
    }
    return {std::move(params), std::move(fits)};
}

} // namespace jkcov
