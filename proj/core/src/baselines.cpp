#include "jkcov/baselines.hpp"

#include <algorithm>

#include "jkcov/error.hpp"
#include "jkcov/linalg.hpp"

namespace jkcov {

SymmetricMatrix sample_estimator(const DataMatrix& X, bool center) { return sample_covariance(X, center); }

LinearShrinkage linear_shrinkage_detailed(const DataMatrix& X, bool center) {
    const std::size_t n = X.samples();
    const std::size_t p = X.features();
    if (n < 2) throw InvalidInput("linear_shrinkage: need n >= 2");

    const SymmetricMatrix S = sample_covariance(X, center);
    const double mu = S.trace() / static_cast<double>(p);

    double d2 = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t k = 0; k <= j; ++k) {
            const double v = S(j, k) - (j == k ? mu : 0.0);
            d2 += (j == k ? 1.0 : 2.0) * v * v;
        }
    }
    d2 /= static_cast<double>(p);

    std::vector<double> mean(p, 0.0);
    if (center) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < p; ++j) mean[j] += X(i, j);
        for (double& m : mean) m /= static_cast<double>(n);
    }
    double spread = 0.0;
    std::vector<double> x(p);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) x[j] = X(i, j) - mean[j];
        for (std::size_t j = 0; j < p; ++j) {
            for (std::size_t k = 0; k <= j; ++k) {
                const double v = x[j] * x[k] - S(j, k);
                spread += (j == k ? 1.0 : 2.0) * v * v;
            }
        }
    }
    const double nn = static_cast<double>(n);
    const double b2 = std::min(d2, spread / (nn * nn) / static_cast<double>(p));
    const double rho = d2 > 0.0 ? b2 / d2 : 0.0;

    LinearShrinkage out{S, rho, mu};
    if (rho == 0.0) return out;
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t k = 0; k <= j; ++k) {
            out.estimate(j, k) = (1.0 - rho) * S(j, k) + (j == k ? rho * mu : 0.0);
        }
    }
    return out;
}

SymmetricMatrix linear_shrinkage(const DataMatrix& X, bool center) {
    return linear_shrinkage_detailed(X, center).estimate;
}

} // namespace jkcov
