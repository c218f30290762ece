#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace jkcov {

/// Dense row-major real matrix. Used for regression features, Cholesky factors
/// and eigenvector bases.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }

    std::span<const double> data() const noexcept { return values_; }

    Matrix transpose() const;
    Matrix operator*(const Matrix& rhs) const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// n samples (rows) by p features (columns), all entries finite.
class DataMatrix {
public:
    DataMatrix() = default;
    explicit DataMatrix(Matrix values);
    DataMatrix(std::size_t n, std::size_t p, std::vector<double> values);

    std::size_t samples() const noexcept { return values_.rows(); }
    std::size_t features() const noexcept { return values_.cols(); }

    double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
    std::span<const double> sample(std::size_t i) const { return values_.row(i); }

    const Matrix& values() const noexcept { return values_; }

    /// Copy of the listed rows, in the listed order.
    DataMatrix select_rows(std::span<const std::size_t> rows) const;

    bool operator==(const DataMatrix&) const = default;

private:
    Matrix values_;
};

/// p x p real symmetric matrix in packed lower-triangle storage, so (j,k) and
/// (k,j) address the same element.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(std::size_t dim, double fill = 0.0);

    static SymmetricMatrix identity(std::size_t dim);
    static SymmetricMatrix diagonal(std::span<const double> diag);
    /// Builds from a square matrix using its lower triangle. Throws InvalidInput
    /// if the input is not square or its upper triangle differs from the lower by
    /// more than `tolerance` (absolute).
    static SymmetricMatrix from_dense(const Matrix& m, double tolerance = 0.0);

    std::size_t dim() const noexcept { return dim_; }

    double operator()(std::size_t j, std::size_t k) const { return packed_[index(j, k)]; }
    double& operator()(std::size_t j, std::size_t k) { return packed_[index(j, k)]; }

    Matrix to_dense() const;
    double trace() const;

    SymmetricMatrix& operator+=(const SymmetricMatrix& rhs);
    SymmetricMatrix& operator*=(double scale);

    std::span<const double> packed() const noexcept { return packed_; }

    bool operator==(const SymmetricMatrix&) const = default;

private:
    static std::size_t index(std::size_t j, std::size_t k) noexcept {
        return j >= k ? j * (j + 1) / 2 + k : k * (k + 1) / 2 + j;
    }

    std::size_t dim_ = 0;
    std::vector<double> packed_;
};

SymmetricMatrix operator+(SymmetricMatrix lhs, const SymmetricMatrix& rhs);
SymmetricMatrix operator*(double scale, SymmetricMatrix m);

} // namespace jkcov
