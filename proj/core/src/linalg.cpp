#include "jkcov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "jkcov/error.hpp"

namespace jkcov {

namespace {

std::vector<std::size_t> all_rows(std::size_t n) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
}

} // namespace

SymmetricMatrix sample_covariance(const DataMatrix& X, bool center) {
    const auto rows = all_rows(X.samples());
    return sample_covariance(X, rows, center);
}

SymmetricMatrix sample_covariance(const DataMatrix& X, std::span<const std::size_t> rows, bool center) {
    const std::size_t n = rows.size();
    const std::size_t p = X.features();
    if (center && n < 2) {
        throw InvalidInput("sample_covariance: centered covariance needs n >= 2, got n=" + std::to_string(n));
    }
    if (n < 1) throw InvalidInput("sample_covariance: need n >= 1");

    std::vector<double> mean(p, 0.0);
    if (center) {
        for (std::size_t r : rows) {
            auto x = X.sample(r);
            for (std::size_t j = 0; j < p; ++j) mean[j] += x[j];
        }
        for (double& m : mean) m /= static_cast<double>(n);
    }

    SymmetricMatrix S(p);
    std::vector<double> centered(p);
    for (std::size_t r : rows) {
        auto x = X.sample(r);
        for (std::size_t j = 0; j < p; ++j) centered[j] = x[j] - mean[j];
        for (std::size_t j = 0; j < p; ++j) {
            const double cj = centered[j];
            for (std::size_t k = 0; k <= j; ++k) S(j, k) += cj * centered[k];
        }
    }
    S *= 1.0 / static_cast<double>(center ? n - 1 : n);
    return S;
}

double frobenius_distance(const SymmetricMatrix& A, const SymmetricMatrix& B) {
    if (A.dim() != B.dim()) {
        throw InvalidInput("frobenius_distance: dimensions " + std::to_string(A.dim()) + " and " +
                           std::to_string(B.dim()) + " differ");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < A.dim(); ++j) {
        for (std::size_t k = 0; k <= j; ++k) {
            const double d = A(j, k) - B(j, k);
            sum += (j == k ? 1.0 : 2.0) * d * d;
        }
    }
    return std::sqrt(sum);
}

double frobenius_norm(const SymmetricMatrix& A) { return frobenius_distance(A, SymmetricMatrix(A.dim())); }

EigenDecomposition symmetric_eigen(const SymmetricMatrix& S) {
    const auto p = static_cast<Eigen::Index>(S.dim());
    Eigen::MatrixXd dense(p, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        for (Eigen::Index k = 0; k < p; ++k) {
            const double v = S(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
            if (!std::isfinite(v)) throw NumericalFailure("symmetric_eigen: non-finite entry");
            dense(j, k) = v;
        }
    }

    // Implicit symmetric QR on the tridiagonal form; Eigen caps it at 30*p
    // iterations and reports NoConvergence past that.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("symmetric_eigen: solver did not converge for p=" + std::to_string(p));
    }

    // Eigen returns ascending order.
    EigenDecomposition out;
    out.eigenvalues.resize(static_cast<std::size_t>(p));
    out.eigenvectors = Matrix(static_cast<std::size_t>(p), static_cast<std::size_t>(p));
    for (Eigen::Index c = 0; c < p; ++c) {
        const Eigen::Index src = p - 1 - c;
        out.eigenvalues[static_cast<std::size_t>(c)] = solver.eigenvalues()(src);

        auto v = solver.eigenvectors().col(src);
        Eigen::Index lead = 0;
        for (Eigen::Index i = 1; i < p; ++i) {
            if (std::abs(v(i)) > std::abs(v(lead))) lead = i;
        }
        const double sign = v(lead) < 0.0 ? -1.0 : 1.0;
        for (Eigen::Index i = 0; i < p; ++i) {
            out.eigenvectors(static_cast<std::size_t>(i), static_cast<std::size_t>(c)) = sign * v(i);
        }
    }
    return out;
}

double min_eigenvalue(const SymmetricMatrix& S) { return symmetric_eigen(S).eigenvalues.back(); }

SymmetricMatrix reconstruct(const Matrix& basis, std::span<const double> eigenvalues) {
    const std::size_t p = basis.rows();
    if (basis.cols() != eigenvalues.size()) throw InvalidInput("reconstruct: basis/eigenvalue count mismatch");
    SymmetricMatrix out(p);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t k = 0; k <= j; ++k) {
            double sum = 0.0;
            for (std::size_t c = 0; c < eigenvalues.size(); ++c) sum += basis(j, c) * eigenvalues[c] * basis(k, c);
            out(j, k) = sum;
        }
    }
    return out;
}

double default_pd_floor(const SymmetricMatrix& S) {
    if (S.dim() == 0) return 1e-4;
    return 1e-4 * std::max(symmetric_eigen(S).eigenvalues.front(), 1.0);
}

SymmetricMatrix project_pd(const SymmetricMatrix& S, double floor) {
    if (!(floor > 0.0) || !std::isfinite(floor)) {
        throw InvalidInput("project_pd: floor must be positive and finite");
    }
    auto eig = symmetric_eigen(S);
    if (eig.eigenvalues.empty() || eig.eigenvalues.back() >= floor) return S;
    for (double& lambda : eig.eigenvalues) lambda = std::max(lambda, floor);
    return reconstruct(eig.eigenvectors, eig.eigenvalues);
}

Matrix cholesky(const SymmetricMatrix& S) {
    const std::size_t p = S.dim();
    Matrix L(p, p);
    for (std::size_t j = 0; j < p; ++j) {
        double pivot = S(j, j);
        for (std::size_t l = 0; l < j; ++l) pivot -= L(j, l) * L(j, l);
        if (!(pivot > 0.0) || !std::isfinite(pivot)) {
            throw InvalidInput("cholesky: matrix is not positive definite (non-positive pivot at index " +
                               std::to_string(j) + ")");
        }
        const double diag = std::sqrt(pivot);
        L(j, j) = diag;
        for (std::size_t i = j + 1; i < p; ++i) {
            double sum = S(i, j);
            for (std::size_t l = 0; l < j; ++l) sum -= L(i, l) * L(j, l);
            L(i, j) = sum / diag;
        }
    }
    return L;
}

} // namespace jkcov
