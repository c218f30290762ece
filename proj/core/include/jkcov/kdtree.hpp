#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jkcov/matrix.hpp"

namespace jkcov {

/// Exact k-nearest-neighbour index over the rows of a point matrix.
///
/// Neighbours are ranked by (squared Euclidean distance, row index), so ties in
/// distance go to the lower row. The squared distance of a point is always
/// accumulated in dimension order, which makes the result identical to a
/// brute-force scan.
class KdTree {
public:
    KdTree() = default;
    explicit KdTree(Matrix points, std::size_t leaf_size = 24);

    std::size_t size() const noexcept { return points_.rows(); }
    std::size_t dimension() const noexcept { return points_.cols(); }
    const Matrix& points() const noexcept { return points_; }

    /// Row indices of the k nearest points, closest first.
    std::vector<std::size_t> nearest(std::span<const double> query, std::size_t k) const;

private:
    struct Node {
        std::size_t begin = 0;
        std::size_t end = 0;
        std::size_t split_dim = 0;
        double split_value = 0.0;
        std::size_t left = 0;
        std::size_t right = 0;
        bool leaf = true;
    };

    std::size_t build(std::size_t begin, std::size_t end);

    Matrix points_;
    std::size_t leaf_size_ = 16;
    std::vector<std::size_t> order_;
    /// Points in leaf order, row-major.
    std::vector<double> packed_;
    std::vector<Node> nodes_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

} // namespace jkcov
