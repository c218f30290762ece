#pragma once

#include "jkcov/matrix.hpp"

namespace jkcov {

/// The plain sample covariance; see sample_covariance() for the divisor rule.
SymmetricMatrix sample_estimator(const DataMatrix& X, bool center);

struct LinearShrinkage {
    SymmetricMatrix estimate;
    /// Weight on the scaled-identity target, in [0, 1].
    double intensity = 0.0;
    /// trace(S) / p.
    double target_scale = 0.0;
};

/// Ledoit-Wolf shrinkage toward mu*I:
///   rho*mu*I + (1-rho)*S,  mu = tr(S)/p,
///   d2 = ||S - mu I||_F^2 / p,
///   b2 = min(d2, (1/n^2) sum_i ||x_i x_i^T - S||_F^2 / p),
///   rho = b2 / d2 (0 when d2 == 0).
/// The rows x_i are centred first when `center` is set.
LinearShrinkage linear_shrinkage_detailed(const DataMatrix& X, bool center);
SymmetricMatrix linear_shrinkage(const DataMatrix& X, bool center);

} // namespace jkcov
