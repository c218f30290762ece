#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "jkcov/matrix.hpp"

namespace testutil {

inline jkcov::Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    jkcov::Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = z(rng);
    return m;
}

inline jkcov::DataMatrix gaussian_data(std::size_t n, std::size_t p, std::uint64_t seed) {
    return jkcov::DataMatrix(gaussian_matrix(n, p, seed));
}

inline jkcov::SymmetricMatrix random_symmetric(std::size_t p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    jkcov::SymmetricMatrix s(p);
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = 0; k <= j; ++k) s(j, k) = u(rng);
    return s;
}

// Dense double-loop Frobenius distance, independent of the library.
inline double dense_distance(const jkcov::Matrix& a, const jkcov::Matrix& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) sum += (a(i, j) - b(i, j)) * (a(i, j) - b(i, j));
    return std::sqrt(sum);
}

inline bool exactly_symmetric(const jkcov::Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (m(i, j) != m(j, i)) return false;
    return true;
}

} // namespace testutil
