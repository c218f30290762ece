#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "jkcov/kdtree.hpp"
#include "jkcov/matrix.hpp"

namespace jkcov {

/// N feature vectors of dimension d paired with N responses.
class RegressionDataset {
public:
    RegressionDataset() = default;
    RegressionDataset(Matrix features, std::vector<double> responses);

    std::size_t size() const noexcept { return features_.rows(); }
    std::size_t dimension() const noexcept { return features_.cols(); }
    const Matrix& features() const noexcept { return features_; }
    const std::vector<double>& responses() const noexcept { return responses_; }

    RegressionDataset subset(std::span<const std::size_t> rows) const;

private:
    Matrix features_;
    std::vector<double> responses_;
};

struct StandardizationParams {
    std::vector<double> mean;
    /// Sample standard deviation (divisor N-1); 1 for constant dimensions.
    std::vector<double> scale;

    std::vector<double> apply(std::span<const double> x) const;
    Matrix apply(const Matrix& points) const;
};

/// Centres each column and scales it to unit sample variance. Constant columns
/// (and every column when N == 1) map to zero with scale 1.
std::pair<Matrix, StandardizationParams> standardize(const Matrix& features);

// ---------------------------------------------------------------------------
// Fitted models

class KnnModel {
public:
    KnnModel(StandardizationParams standardization, Matrix standardized_features, std::vector<double> responses,
             std::size_t k);

    std::size_t k() const noexcept { return k_; }
    std::size_t dimension() const noexcept { return index_.dimension(); }
    const StandardizationParams& standardization() const noexcept { return standardization_; }

    double predict(std::span<const double> x) const;
    /// Training rows of the k nearest neighbours of x, closest first.
    std::vector<std::size_t> neighbours(std::span<const double> x) const;

private:
    StandardizationParams standardization_;
    KdTree index_;
    std::vector<double> responses_;
    std::size_t k_;
};

struct ClusterFit {
    std::vector<double> centroid;
    double intercept = 0.0;
    /// Slopes on standardized features; all zero when the cluster fell back to
    /// its response mean.
    std::vector<double> coefficients;
    std::size_t size = 0;
    bool mean_fallback = false;
};

class ClusteredLrModel {
public:
    ClusteredLrModel(StandardizationParams standardization, std::vector<ClusterFit> clusters);

    std::size_t dimension() const noexcept { return standardization_.mean.size(); }
    const std::vector<ClusterFit>& clusters() const noexcept { return clusters_; }
    const StandardizationParams& standardization() const noexcept { return standardization_; }

    /// Index of the centroid nearest to already-standardized z (ties: lower index).
    std::size_t nearest_cluster(std::span<const double> z) const;
    double predict(std::span<const double> x) const;

private:
    StandardizationParams standardization_;
    std::vector<ClusterFit> clusters_;
};

struct TreeParams {
    std::size_t min_split = 20;
    std::size_t min_bucket = 7;
    std::size_t max_depth = 30;
    double cp = 0.01;
};

struct TreeNode {
    static constexpr std::size_t none = static_cast<std::size_t>(-1);

    /// Split dimension, or `none` for a leaf. Rows with x[dim] < threshold go left.
    std::size_t dim = none;
    double threshold = 0.0;
    std::size_t left = none;
    std::size_t right = none;
    double value = 0.0;
    std::size_t count = 0;
    double sse = 0.0;
    std::size_t depth = 0;

    bool is_leaf() const noexcept { return dim == none; }
};

class TreeModel {
public:
    TreeModel(std::size_t dimension, std::vector<TreeNode> nodes);

    std::size_t dimension() const noexcept { return dimension_; }
    /// Pre-order; nodes[0] is the root.
    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
    double predict(std::span<const double> x) const;
    /// Sum of leaf SSEs on the training data.
    double training_sse() const;
    std::size_t depth() const;

private:
    std::size_t dimension_;
    std::vector<TreeNode> nodes_;
};

/// Predicts a fixed value. Exists as a test double for the jackknife driver.
class ConstantModel {
public:
    ConstantModel(std::size_t dimension, double value) : dimension_(dimension), value_(value) {}
    std::size_t dimension() const noexcept { return dimension_; }
    double predict(std::span<const double> x) const;

private:
    std::size_t dimension_;
    double value_;
};

using FittedRegressor = std::variant<KnnModel, ClusteredLrModel, TreeModel, ConstantModel>;

/// Dispatches to the fitted variant. Throws InvalidInput on dimension mismatch.
double predict(const FittedRegressor& model, std::span<const double> x);
std::vector<double> predict_rows(const FittedRegressor& model, const Matrix& points);

// ---------------------------------------------------------------------------
// Fitting

KnnModel fit_knn(const RegressionDataset& data, std::size_t k);

/// Default k candidate list {ceil(sqrt(N)/4), ceil(sqrt(N)/2), ceil(sqrt(N)),
/// ceil(2 sqrt(N))}, clipped to [1, max_k] and deduplicated.
std::vector<std::size_t> default_k_candidates(std::size_t n, std::size_t max_k);

/// Random train/test split of the rows; returns the candidate with the lowest
/// test sum of squared errors (ties: smaller k).
std::size_t select_k_cv(const RegressionDataset& data, std::span<const std::size_t> candidates,
                        double train_fraction, std::uint64_t seed);

struct KMeansResult {
    std::vector<std::size_t> assignments;
    Matrix centroids;
    std::size_t iterations = 0;
};

/// Lloyd iterations from a seeded k-means++ start. No cluster is empty on return.
KMeansResult kmeans(const Matrix& points, std::size_t clusters, std::uint64_t seed, std::size_t max_iter = 100);

/// Within-cluster sum of squared distances to the centroids.
double within_cluster_ss(const Matrix& points, const KMeansResult& result);

struct ElbowRow {
    std::size_t clusters;
    double wss;
};

/// WSS for K = 1..max_clusters, for choosing the cluster count by eye.
std::vector<ElbowRow> elbow_table(const Matrix& points, std::size_t max_clusters, std::uint64_t seed);

ClusteredLrModel fit_clustered_lr(const RegressionDataset& data, std::size_t clusters, std::uint64_t seed,
                                  std::size_t max_iter = 100);

TreeModel fit_tree(const RegressionDataset& data, const TreeParams& params = {});

// ---------------------------------------------------------------------------
// Regressor selection, as used by the jackknife driver

struct KnnSpec {
    enum class Rule { sqrt_n, fixed, cross_validated };
    /// sqrt_n: k = round(sqrt(N)); fixed: k as given (clipped to N);
    /// cross_validated: select_k_cv over default_k_candidates.
    Rule rule = Rule::sqrt_n;
    std::size_t k = 0;
    double train_fraction = 0.8;
};

struct ClusteredLrSpec {
    /// Clipped to the dataset size at fit time.
    std::size_t clusters = 10;
    std::size_t max_iter = 100;
};

struct TreeSpec {
    TreeParams params;
};

struct ConstantSpec {
    double value = 0.0;
};

using RegressorSpec = std::variant<KnnSpec, ClusteredLrSpec, TreeSpec, ConstantSpec>;

FittedRegressor fit(const RegressorSpec& spec, const RegressionDataset& data, std::uint64_t seed);

} // namespace jkcov
