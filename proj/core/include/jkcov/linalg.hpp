#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jkcov/matrix.hpp"

namespace jkcov {

/// Sample covariance of the rows of X.
///
/// With `center == false` the data are taken as mean-zero and entry (j,k) is
/// (1/n) sum_i X_ij X_ik; this requires n >= 1. With `center == true` column
/// means are removed and the divisor is n-1; this requires n >= 2.
SymmetricMatrix sample_covariance(const DataMatrix& X, bool center);

/// Same as above restricted to the listed rows of X.
SymmetricMatrix sample_covariance(const DataMatrix& X, std::span<const std::size_t> rows, bool center);

/// sqrt(sum_{j,k} (A_jk - B_jk)^2) over the full matrices: off-diagonal
/// entries contribute twice.
double frobenius_distance(const SymmetricMatrix& A, const SymmetricMatrix& B);

double frobenius_norm(const SymmetricMatrix& A);

struct EigenDecomposition {
    /// Sorted descending.
    std::vector<double> eigenvalues;
    /// Column i is the unit eigenvector for eigenvalues[i]; its largest-magnitude
    /// component is positive (first such index on ties).
    Matrix eigenvectors;
};

/// Deterministic symmetric eigendecomposition. Throws NumericalFailure if the
/// solver does not converge or the input has non-finite entries.
EigenDecomposition symmetric_eigen(const SymmetricMatrix& S);

double min_eigenvalue(const SymmetricMatrix& S);

/// Q diag(lambda) Q^T for an orthonormal basis Q.
SymmetricMatrix reconstruct(const Matrix& basis, std::span<const double> eigenvalues);

/// Scale-relative floor used when no explicit floor is given:
/// 1e-4 * max(lambda_max(S), 1).
double default_pd_floor(const SymmetricMatrix& S);

/// Clips eigenvalues of S below `floor` up to `floor`, keeping eigenvectors.
/// Returns S unchanged when its smallest eigenvalue is already >= floor.
SymmetricMatrix project_pd(const SymmetricMatrix& S, double floor);

/// Lower-triangular L with positive diagonal and L L^T = S. Throws InvalidInput
/// naming the first non-positive pivot when S is not positive definite.
Matrix cholesky(const SymmetricMatrix& S);

} // namespace jkcov
