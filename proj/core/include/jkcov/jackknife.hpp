#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "jkcov/matrix.hpp"
#include "jkcov/regressors.hpp"

namespace jkcov {

/// Disjoint groups of row indices covering 0..n-1; sizes differ by at most one
/// and every group has at least two rows.
class GroupPartition {
public:
    GroupPartition() = default;
    /// Validates that `groups` partition 0..n-1 with every group of size >= 2.
    GroupPartition(std::size_t n, std::vector<std::vector<std::size_t>> groups);

    std::size_t samples() const noexcept { return n_; }
    std::size_t group_count() const noexcept { return groups_.size(); }
    const std::vector<std::size_t>& group(std::size_t m) const { return groups_.at(m); }
    const std::vector<std::vector<std::size_t>>& groups() const noexcept { return groups_; }

private:
    std::size_t n_ = 0;
    std::vector<std::vector<std::size_t>> groups_;
};

/// Seeded permutation of 0..n-1 dealt round-robin into M groups.
GroupPartition split_groups(std::size_t n, std::size_t groups, std::uint64_t seed);

/// Per-group sample covariance matrices (the sufficient statistics).
std::vector<SymmetricMatrix> group_sufficient_stats(const DataMatrix& X, const GroupPartition& part, bool center);

/// How the held-in replicates are laid out in a feature vector.
enum class FeatureOrder {
    /// Off-diagonal: triples sorted ascending by their covariance component
    /// (ties by group index); diagonal: variances sorted ascending.
    sorted,
    /// Held-in groups in index order.
    group_index,
};

/// Rows are the pairs j<k in lexicographic order. Features are the held-in
/// triples (s_jj, s_kk, s_jk); the response is the held-out s_jk.
RegressionDataset build_offdiag_dataset(std::span<const SymmetricMatrix> held_in, const SymmetricMatrix& held_out,
                                        FeatureOrder order = FeatureOrder::sorted);
RegressionDataset build_offdiag_dataset(std::span<const SymmetricMatrix> group_stats, std::size_t held_out,
                                        FeatureOrder order = FeatureOrder::sorted);

/// Rows are the features j. Features are the held-in variances; the response
/// is the held-out s_jj.
RegressionDataset build_diag_dataset(std::span<const SymmetricMatrix> held_in, const SymmetricMatrix& held_out,
                                     FeatureOrder order = FeatureOrder::sorted);
RegressionDataset build_diag_dataset(std::span<const SymmetricMatrix> group_stats, std::size_t held_out,
                                     FeatureOrder order = FeatureOrder::sorted);

enum class HeldInMode {
    /// One statistic per held-in group, concatenated.
    per_group,
    /// A single statistic computed from all held-in rows together (ablation).
    pooled,
};

struct JackknifeConfig {
    std::size_t groups = 5;
    std::size_t repetitions = 5;
    RegressorSpec offdiag = KnnSpec{};
    RegressorSpec diag = KnnSpec{};
    /// Eigenvalue floor for the final projection; unset means
    /// default_pd_floor() of the averaged matrix.
    std::optional<double> pd_floor;
    std::uint64_t seed = 0;
    bool center = false;
    FeatureOrder feature_order = FeatureOrder::sorted;
    HeldInMode held_in = HeldInMode::per_group;
};

/// The clustered-LR preset: 10 clusters for covariances, 3 for variances.
JackknifeConfig clustered_lr_config();
JackknifeConfig knn_config();
JackknifeConfig tree_config();

struct JackknifeEstimate {
    /// Average of the in-sample predictions, before projection.
    SymmetricMatrix averaged;
    SymmetricMatrix estimate;
    double pd_floor = 0.0;
};

/// Full estimator: T seeded splits into M groups, fit and predict per held-out
/// group, average, project to the positive definite cone.
SymmetricMatrix estimate(const DataMatrix& X, const JackknifeConfig& cfg);
JackknifeEstimate estimate_detailed(const DataMatrix& X, const JackknifeConfig& cfg);

/// Same as estimate_detailed with caller-supplied partitions, one per
/// repetition; cfg.repetitions and cfg.groups are taken from the partitions.
JackknifeEstimate estimate_with_partitions(const DataMatrix& X, std::span<const GroupPartition> partitions,
                                           const JackknifeConfig& cfg);

struct AveragingWeights {
    std::size_t groups;
    std::size_t repetitions;
    /// Weight of each (repetition, group) prediction in the final average.
    double per_term;
};

AveragingWeights averaging_weights_check(const JackknifeConfig& cfg);

} // namespace jkcov
