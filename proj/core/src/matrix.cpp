#include "jkcov/matrix.hpp"

#include <cmath>
#include <string>

#include "jkcov/error.hpp"

namespace jkcov {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows * cols) {
        throw InvalidInput("Matrix: expected " + std::to_string(rows * cols) + " values, got " +
                           std::to_string(values_.size()));
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) {
        throw InvalidInput("Matrix product: inner dimensions " + std::to_string(cols_) + " and " +
                           std::to_string(rhs.rows_) + " differ");
    }
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t l = 0; l < cols_; ++l) {
            const double a = (*this)(i, l);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(l, j);
        }
    }
    return out;
}

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 1) {
        throw InvalidInput("DataMatrix: need at least one sample and one feature");
    }
    for (double v : values_.data()) {
        if (!std::isfinite(v)) throw InvalidInput("DataMatrix: non-finite entry");
    }
}

DataMatrix::DataMatrix(std::size_t n, std::size_t p, std::vector<double> values)
    : DataMatrix(Matrix(n, p, std::move(values))) {}

DataMatrix DataMatrix::select_rows(std::span<const std::size_t> rows) const {
    Matrix out(rows.size(), features());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r] >= samples()) throw InvalidInput("DataMatrix::select_rows: row index out of range");
        auto src = sample(rows[r]);
        auto dst = out.row(r);
        std::copy(src.begin(), src.end(), dst.begin());
    }
    return DataMatrix(std::move(out));
}

SymmetricMatrix::SymmetricMatrix(std::size_t dim, double fill)
    : dim_(dim), packed_(dim * (dim + 1) / 2, fill) {}

SymmetricMatrix SymmetricMatrix::identity(std::size_t dim) {
    SymmetricMatrix out(dim);
    for (std::size_t j = 0; j < dim; ++j) out(j, j) = 1.0;
    return out;
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> diag) {
    SymmetricMatrix out(diag.size());
    for (std::size_t j = 0; j < diag.size(); ++j) out(j, j) = diag[j];
    return out;
}

SymmetricMatrix SymmetricMatrix::from_dense(const Matrix& m, double tolerance) {
    if (m.rows() != m.cols()) throw InvalidInput("SymmetricMatrix: source matrix is not square");
    SymmetricMatrix out(m.rows());
    for (std::size_t j = 0; j < m.rows(); ++j) {
        for (std::size_t k = 0; k <= j; ++k) {
            if (std::abs(m(j, k) - m(k, j)) > tolerance) {
                throw InvalidInput("SymmetricMatrix: source matrix is not symmetric at (" +
                                   std::to_string(j) + "," + std::to_string(k) + ")");
            }
            out(j, k) = m(j, k);
        }
    }
    return out;
}

Matrix SymmetricMatrix::to_dense() const {
    Matrix out(dim_, dim_);
    for (std::size_t j = 0; j < dim_; ++j)
        for (std::size_t k = 0; k < dim_; ++k) out(j, k) = (*this)(j, k);
    return out;
}

double SymmetricMatrix::trace() const {
    double t = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) t += (*this)(j, j);
    return t;
}

SymmetricMatrix& SymmetricMatrix::operator+=(const SymmetricMatrix& rhs) {
    if (dim_ != rhs.dim_) throw InvalidInput("SymmetricMatrix: dimension mismatch in sum");
    for (std::size_t i = 0; i < packed_.size(); ++i) packed_[i] += rhs.packed_[i];
    return *this;
}

SymmetricMatrix& SymmetricMatrix::operator*=(double scale) {
    for (double& v : packed_) v *= scale;
    return *this;
}

SymmetricMatrix operator+(SymmetricMatrix lhs, const SymmetricMatrix& rhs) {
    lhs += rhs;
    return lhs;
}

SymmetricMatrix operator*(double scale, SymmetricMatrix m) {
    m *= scale;
    return m;
}

} // namespace jkcov
