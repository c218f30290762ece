#include <algorithm>
#include <cmath>
#include <string>

#include "jkcov/error.hpp"
#include "jkcov/regressors.hpp"
#include "jkcov/rng.hpp"

namespace jkcov {

KnnModel::KnnModel(StandardizationParams standardization, Matrix standardized_features,
                   std::vector<double> responses, std::size_t k)
    : standardization_(std::move(standardization)),
      index_(std::move(standardized_features)),
      responses_(std::move(responses)),
      k_(k) {
    if (k_ < 1 || k_ > responses_.size()) {
        throw InvalidInput("kNN: k=" + std::to_string(k_) + " outside [1, " + std::to_string(responses_.size()) +
                           "]");
    }
}

std::vector<std::size_t> KnnModel::neighbours(std::span<const double> x) const {
    return index_.nearest(standardization_.apply(x), k_);
}

double KnnModel::predict(std::span<const double> x) const {
    double sum = 0.0;
    for (std::size_t idx : neighbours(x)) sum += responses_[idx];
    return sum / static_cast<double>(k_);
}

KnnModel fit_knn(const RegressionDataset& data, std::size_t k) {
    if (k < 1 || k > data.size()) {
        throw InvalidInput("fit_knn: k=" + std::to_string(k) + " outside [1, N=" + std::to_string(data.size()) + "]");
    }
    auto [standardized, params] = standardize(data.features());
    return {std::move(params), std::move(standardized), data.responses(), k};
}

std::vector<std::size_t> default_k_candidates(std::size_t n, std::size_t max_k) {
    const double root = std::sqrt(static_cast<double>(n));
    std::vector<std::size_t> out;
    for (double v : {root / 4.0, root / 2.0, root, 2.0 * root}) {
        const auto k = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(v)), 1, std::max<std::size_t>(max_k, 1));
        if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
    }
    return out;
}

std::size_t select_k_cv(const RegressionDataset& data, std::span<const std::size_t> candidates,
                        double train_fraction, std::uint64_t seed) {
    if (candidates.empty()) throw InvalidInput("select_k_cv: empty candidate list");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw InvalidInput("select_k_cv: train_fraction must lie in (0, 1)");
    }
    const std::size_t n = data.size();
    const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n)));
    std::size_t max_k = 0;
    for (std::size_t k : candidates) {
        if (k < 1 || k > n_train) {
            throw InvalidInput("select_k_cv: candidate k=" + std::to_string(k) + " outside [1, train size " +
                               std::to_string(n_train) + "]");
        }
        max_k = std::max(max_k, k);
    }

    Rng rng(seed);
    const auto perm = random_permutation(n, rng);
    const std::span<const std::size_t> train_rows(perm.data(), n_train);
    const std::span<const std::size_t> test_rows(perm.data() + n_train, n - n_train);

    // Neighbours of the largest k include those of every smaller k as a prefix.
    const KnnModel model = fit_knn(data.subset(train_rows), max_k);
    std::vector<double> sse(candidates.size(), 0.0);
    for (std::size_t row : test_rows) {
        const auto nbrs = model.neighbours(data.features().row(row));
        const double truth = data.responses()[row];
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            double sum = 0.0;
            for (std::size_t i = 0; i < candidates[c]; ++i) sum += data.responses()[train_rows[nbrs[i]]];
            const double err = sum / static_cast<double>(candidates[c]) - truth;
            sse[c] += err * err;
        }
    }

    std::size_t best = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c) {
        if (sse[c] < sse[best] || (sse[c] == sse[best] && candidates[c] < candidates[best])) best = c;
    }
    return candidates[best];
}

} // namespace jkcov
