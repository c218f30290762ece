#include "jkcov/kdtree.hpp"

#include <algorithm>
#include <queue>
#include <utility>

#include "jkcov/error.hpp"

namespace jkcov {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

KdTree::KdTree(Matrix points, std::size_t leaf_size)
    : points_(std::move(points)), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
    order_.resize(points_.rows());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    if (!order_.empty()) build(0, order_.size());
    packed_.resize(order_.size() * points_.cols());
    for (std::size_t slot = 0; slot < order_.size(); ++slot) {
        auto src = points_.row(order_[slot]);
        std::copy(src.begin(), src.end(), packed_.begin() + static_cast<std::ptrdiff_t>(slot * points_.cols()));
    }
}

std::size_t KdTree::build(std::size_t begin, std::size_t end) {
    const std::size_t id = nodes_.size();
    nodes_.push_back(Node{begin, end});
    if (end - begin <= leaf_size_) return id;

    // Split on the dimension with the widest spread.
    std::size_t best_dim = 0;
    double best_spread = -1.0;
    for (std::size_t d = 0; d < points_.cols(); ++d) {
        double lo = points_(order_[begin], d);
        double hi = lo;
        for (std::size_t i = begin + 1; i < end; ++i) {
            const double v = points_(order_[i], d);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo > best_spread) {
            best_spread = hi - lo;
            best_dim = d;
        }
    }
    if (best_spread <= 0.0) return id;

    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                         const double va = points_(a, best_dim);
                         const double vb = points_(b, best_dim);
                         return va < vb || (va == vb && a < b);
                     });

    const double split_value = points_(order_[mid], best_dim);
    const std::size_t left = build(begin, mid);
    const std::size_t right = build(mid, end);
    Node& node = nodes_[id];
    node.leaf = false;
    node.split_dim = best_dim;
    node.split_value = split_value;
    node.left = left;
    node.right = right;
    return id;
}

std::vector<std::size_t> KdTree::nearest(std::span<const double> query, std::size_t k) const {
    if (query.size() != dimension()) throw InvalidInput("KdTree::nearest: query dimension mismatch");
    k = std::min(k, size());
    if (k == 0) return {};

    // Max-heap on (distance, index): top is the current worst kept neighbour.
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry> heap;

    // Rows are scanned leaf by leaf from the reordered copy. A partial sum
    // already above the worst kept distance can stop early: later terms are
    // non-negative and are added in the same order as a full evaluation.
    const std::size_t dim = dimension();
    auto consider = [&](std::size_t slot) {
        const double* p = packed_.data() + slot * dim;
        const std::size_t idx = order_[slot];
        const bool full = heap.size() == k;
        const double worst = full ? heap.top().first : 0.0;
        double sum = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double d = query[i] - p[i];
            sum += d * d;
            if (full && sum > worst) return;
        }
        Entry e{sum, idx};
        if (!full) {
            heap.push(e);
        } else if (e < heap.top()) {
            heap.pop();
            heap.push(e);
        }
    };
    // Prune only when the bound clearly exceeds the worst kept distance, so
    // rounding in the incremental bound can never drop a tied or closer point.
    auto may_contain = [&](double bound) {
        if (heap.size() < k) return true;
        return bound <= heap.top().first * (1.0 + 1e-9) + 1e-300;
    };

    std::vector<double> offsets(dimension(), 0.0);
    auto search = [&](auto&& self, std::size_t node_id, double bound) -> void {
        const Node& node = nodes_[node_id];
        if (node.leaf) {
            for (std::size_t i = node.begin; i < node.end; ++i) consider(i);
            return;
        }
        const double diff = query[node.split_dim] - node.split_value;
        const std::size_t near = diff < 0.0 ? node.left : node.right;
        const std::size_t far = diff < 0.0 ? node.right : node.left;
        self(self, near, bound);

        const double old_offset = offsets[node.split_dim];
        const double far_bound = bound - old_offset * old_offset + diff * diff;
        if (may_contain(far_bound)) {
            offsets[node.split_dim] = diff;
            self(self, far, far_bound);
            offsets[node.split_dim] = old_offset;
        }
    };
    search(search, 0, 0.0);

    std::vector<std::size_t> out(heap.size());
    for (std::size_t i = out.size(); i > 0; --i) {
        out[i - 1] = heap.top().second;
        heap.pop();
    }
    return out;
}

} // namespace jkcov
