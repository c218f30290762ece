#include "jkcov/regressors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jkcov/error.hpp"

namespace jkcov {

RegressionDataset::RegressionDataset(Matrix features, std::vector<double> responses)
    : features_(std::move(features)), responses_(std::move(responses)) {
    if (features_.rows() != responses_.size()) {
        throw InvalidInput("RegressionDataset: " + std::to_string(features_.rows()) + " feature rows but " +
                           std::to_string(responses_.size()) + " responses");
    }
    if (features_.rows() < 1 || features_.cols() < 1) {
        throw InvalidInput("RegressionDataset: need N >= 1 and d >= 1");
    }
    for (double v : features_.data()) {
        if (!std::isfinite(v)) throw InvalidInput("RegressionDataset: non-finite feature");
    }
    for (double v : responses_) {
        if (!std::isfinite(v)) throw InvalidInput("RegressionDataset: non-finite response");
    }
}

RegressionDataset RegressionDataset::subset(std::span<const std::size_t> rows) const {
    Matrix features(rows.size(), dimension());
    std::vector<double> responses(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto src = features_.row(rows[r]);
        std::copy(src.begin(), src.end(), features.row(r).begin());
        responses[r] = responses_[rows[r]];
    }
    return {std::move(features), std::move(responses)};
}

std::vector<double> StandardizationParams::apply(std::span<const double> x) const {
    if (x.size() != mean.size()) {
        throw InvalidInput("standardization: expected dimension " + std::to_string(mean.size()) + ", got " +
                           std::to_string(x.size()));
    }
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - mean[i]) / scale[i];
    return z;
}

Matrix StandardizationParams::apply(const Matrix& points) const {
    Matrix out(points.rows(), points.cols());
    for (std::size_t r = 0; r < points.rows(); ++r) {
        auto z = apply(points.row(r));
        std::copy(z.begin(), z.end(), out.row(r).begin());
    }
    return out;
}

std::pair<Matrix, StandardizationParams> standardize(const Matrix& features) {
    const std::size_t n = features.rows();
    const std::size_t d = features.cols();
    StandardizationParams params{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
    Matrix out(n, d);
    for (std::size_t j = 0; j < d; ++j) {
        bool constant = true;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += features(i, j);
            constant = constant && features(i, j) == features(0, j);
        }
        if (n == 0 || constant) {
            // Constant columns carry no information; they map to zero.
            params.mean[j] = n > 0 ? features(0, j) : 0.0;
            continue;
        }
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = features(i, j) - mean;
            ss += c * c;
        }
        params.mean[j] = mean;
        params.scale[j] = std::sqrt(ss / static_cast<double>(n - 1));
        for (std::size_t i = 0; i < n; ++i) out(i, j) = (features(i, j) - mean) / params.scale[j];
    }
    return {std::move(out), std::move(params)};
}

double ConstantModel::predict(std::span<const double> x) const {
    if (x.size() != dimension_) throw InvalidInput("ConstantModel::predict: dimension mismatch");
    return value_;
}

double predict(const FittedRegressor& model, std::span<const double> x) {
    return std::visit([&](const auto& m) { return m.predict(x); }, model);
}

std::vector<double> predict_rows(const FittedRegressor& model, const Matrix& points) {
    std::vector<double> out(points.rows());
    for (std::size_t r = 0; r < points.rows(); ++r) out[r] = predict(model, points.row(r));
    return out;
}

namespace {

std::size_t resolve_knn_k(const KnnSpec& spec, const RegressionDataset& data, std::uint64_t seed) {
    const std::size_t n = data.size();
    switch (spec.rule) {
    case KnnSpec::Rule::fixed:
        if (spec.k == 0) throw InvalidInput("kNN: fixed k must be positive");
        return std::min(spec.k, n);
    case KnnSpec::Rule::cross_validated: {
        const auto train = static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(n)));
        if (train < 1 || train >= n) break;
        const auto candidates = default_k_candidates(n, train);
        return select_k_cv(data, candidates, spec.train_fraction, seed);
    }
    case KnnSpec::Rule::sqrt_n:
        break;
    }
    const auto k = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(n))));
    return std::clamp<std::size_t>(k, 1, n);
}

} // namespace

FittedRegressor fit(const RegressorSpec& spec, const RegressionDataset& data, std::uint64_t seed) {
    return std::visit(
        [&](const auto& s) -> FittedRegressor {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, KnnSpec>) {
                return fit_knn(data, resolve_knn_k(s, data, seed));
            } else if constexpr (std::is_same_v<S, ClusteredLrSpec>) {
                if (s.clusters == 0) throw InvalidInput("clustered LR: cluster count must be positive");
                return fit_clustered_lr(data, std::min(s.clusters, data.size()), seed, s.max_iter);
            } else if constexpr (std::is_same_v<S, TreeSpec>) {
                return fit_tree(data, s.params);
            } else {
                return ConstantModel(data.dimension(), s.value);
            }
        },
        spec);
}

} // namespace jkcov
