#include <algorithm>
#include <numeric>
#include <string>

#include "jkcov/error.hpp"
#include "jkcov/regressors.hpp"

namespace jkcov {

namespace {

struct Split {
    std::size_t dim = TreeNode::none;
    double threshold = 0.0;
    double gain = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(const RegressionDataset& data, const TreeParams& params) : data_(data), params_(params) {}

    std::vector<TreeNode> run() {
        std::vector<std::size_t> rows(data_.size());
        std::iota(rows.begin(), rows.end(), std::size_t{0});
        root_sse_ = node_sse(rows, node_mean(rows));
        grow(rows, 0);
        return std::move(nodes_);
    }

private:
    double node_mean(const std::vector<std::size_t>& rows) const {
        double sum = 0.0;
        for (std::size_t r : rows) sum += data_.responses()[r];
        return sum / static_cast<double>(rows.size());
    }

    double node_sse(const std::vector<std::size_t>& rows, double mean) const {
        double sse = 0.0;
        for (std::size_t r : rows) {
            const double c = data_.responses()[r] - mean;
            sse += c * c;
        }
        return sse;
    }

    // Best (dimension, threshold) by SSE reduction. The reduction is computed
    // from sums of mean-centred responses: gain = SL^2/nL + SR^2/nR - S^2/n.
    Split best_split(const std::vector<std::size_t>& rows, double mean) const {
        const std::size_t n = rows.size();
        Split best;
        std::vector<std::size_t> order(rows);
        for (std::size_t dim = 0; dim < data_.dimension(); ++dim) {
            const auto& x = data_.features();
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return x(a, dim) < x(b, dim) || (x(a, dim) == x(b, dim) && a < b);
            });
            double total = 0.0;
            for (std::size_t r : order) total += data_.responses()[r] - mean;
            const double base = total * total / static_cast<double>(n);

            double left = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                left += data_.responses()[order[i]] - mean;
                const std::size_t n_left = i + 1;
                const std::size_t n_right = n - n_left;
                if (n_left < params_.min_bucket) continue;
                if (n_right < params_.min_bucket) break;
                const double lo = x(order[i], dim);
                const double hi = x(order[i + 1], dim);
                if (!(lo < hi)) continue;
                const double right = total - left;
                const double gain = left * left / static_cast<double>(n_left) +
                                    right * right / static_cast<double>(n_right) - base;
                if (gain > best.gain) {
                    double threshold = lo + (hi - lo) / 2.0;
                    if (!(threshold > lo)) threshold = hi;
                    best = {dim, threshold, gain};
                }
            }
        }
        return best;
    }

    std::size_t grow(const std::vector<std::size_t>& rows, std::size_t depth) {
        const std::size_t id = nodes_.size();
        TreeNode node;
        node.value = node_mean(rows);
        node.sse = node_sse(rows, node.value);
        node.count = rows.size();
        node.depth = depth;
        nodes_.push_back(node);

        if (rows.size() < params_.min_split || depth >= params_.max_depth || !(root_sse_ > 0.0)) return id;
        const Split split = best_split(rows, node.value);
        if (split.dim == TreeNode::none || split.gain < params_.cp * root_sse_) return id;

        std::vector<std::size_t> left_rows;
        std::vector<std::size_t> right_rows;
        for (std::size_t r : rows) {
            (data_.features()(r, split.dim) < split.threshold ? left_rows : right_rows).push_back(r);
        }
        const std::size_t left = grow(left_rows, depth + 1);
        const std::size_t right = grow(right_rows, depth + 1);
        nodes_[id].dim = split.dim;
        nodes_[id].threshold = split.threshold;
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    const RegressionDataset& data_;
    TreeParams params_;
    double root_sse_ = 0.0;
    std::vector<TreeNode> nodes_;
};

} // namespace

TreeModel::TreeModel(std::size_t dimension, std::vector<TreeNode> nodes)
    : dimension_(dimension), nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw InvalidInput("TreeModel: empty tree");
}

double TreeModel::predict(std::span<const double> x) const {
    if (x.size() != dimension_) {
        throw InvalidInput("TreeModel::predict: expected dimension " + std::to_string(dimension_) + ", got " +
                           std::to_string(x.size()));
    }
    std::size_t id = 0;
    while (!nodes_[id].is_leaf()) {
        const TreeNode& node = nodes_[id];
        id = x[node.dim] < node.threshold ? node.left : node.right;
    }
    return nodes_[id].value;
}

double TreeModel::training_sse() const {
    double sse = 0.0;
    for (const TreeNode& node : nodes_)
        if (node.is_leaf()) sse += node.sse;
    return sse;
}

std::size_t TreeModel::depth() const {
    std::size_t depth = 0;
    for (const TreeNode& node : nodes_) depth = std::max(depth, node.depth);
    return depth;
}

TreeModel fit_tree(const RegressionDataset& data, const TreeParams& params) {
    if (params.min_bucket < 1) throw InvalidInput("fit_tree: min_bucket must be >= 1");
    return {data.dimension(), TreeBuilder(data, params).run()};
}

} // namespace jkcov
