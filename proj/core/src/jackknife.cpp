#include "jkcov/jackknife.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "jkcov/error.hpp"
#include "jkcov/linalg.hpp"
#include "jkcov/rng.hpp"

namespace jkcov {

GroupPartition::GroupPartition(std::size_t n, std::vector<std::vector<std::size_t>> groups)
    : n_(n), groups_(std::move(groups)) {
    std::vector<bool> seen(n, false);
    std::size_t covered = 0;
    for (const auto& g : groups_) {
        if (g.size() < 2) throw InvalidInput("GroupPartition: every group needs at least 2 rows");
        for (std::size_t r : g) {
            if (r >= n || seen[r]) throw InvalidInput("GroupPartition: groups must be disjoint and cover 0..n-1");
            seen[r] = true;
            ++covered;
        }
    }
    if (covered != n) throw InvalidInput("GroupPartition: groups must be disjoint and cover 0..n-1");
}

GroupPartition split_groups(std::size_t n, std::size_t groups, std::uint64_t seed) {
    if (groups < 2) throw InvalidInput("split_groups: need M >= 2 groups, got " + std::to_string(groups));
    if (n < 2 * groups) {
        throw InvalidInput("split_groups: need n >= 2M, got n=" + std::to_string(n) + ", M=" + std::to_string(groups));
    }
    Rng rng(seed);
    const auto perm = random_permutation(n, rng);
    std::vector<std::vector<std::size_t>> out(groups);
    for (std::size_t i = 0; i < n; ++i) out[i % groups].push_back(perm[i]);
    return {n, std::move(out)};
}

std::vector<SymmetricMatrix> group_sufficient_stats(const DataMatrix& X, const GroupPartition& part, bool center) {
    if (part.samples() != X.samples()) {
        throw InvalidInput("group_sufficient_stats: partition covers " + std::to_string(part.samples()) +
                           " rows but X has " + std::to_string(X.samples()));
    }
    std::vector<SymmetricMatrix> stats;
    stats.reserve(part.group_count());
    for (const auto& g : part.groups()) stats.push_back(sample_covariance(X, g, center));
    return stats;
}

namespace {

void check_stats(std::span<const SymmetricMatrix> held_in, const SymmetricMatrix& held_out) {
    if (held_in.empty()) throw InvalidInput("jackknife dataset: need at least one held-in group");
    for (const auto& s : held_in) {
        if (s.dim() != held_out.dim()) throw InvalidInput("jackknife dataset: group dimension mismatch");
    }
}

std::vector<SymmetricMatrix> without(std::span<const SymmetricMatrix> stats, std::size_t m) {
    if (stats.size() < 2) throw InvalidInput("jackknife dataset: need M >= 2 groups");
    if (m >= stats.size()) throw InvalidInput("jackknife dataset: held-out index out of range");
    std::vector<SymmetricMatrix> out;
    out.reserve(stats.size() - 1);
    for (std::size_t l = 0; l < stats.size(); ++l)
        if (l != m) out.push_back(stats[l]);
    return out;
}

} // namespace

RegressionDataset build_offdiag_dataset(std::span<const SymmetricMatrix> held_in, const SymmetricMatrix& held_out,
                                        FeatureOrder order) {
    check_stats(held_in, held_out);
    const std::size_t p = held_out.dim();
    const std::size_t groups = held_in.size();
    const std::size_t rows = p * (p - 1) / 2;
    Matrix features(rows, 3 * groups);
    std::vector<double> responses(rows);
    std::vector<std::size_t> slot(groups);

    std::size_t row = 0;
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t k = j + 1; k < p; ++k, ++row) {
            std::iota(slot.begin(), slot.end(), std::size_t{0});
            if (order == FeatureOrder::sorted) {
                std::stable_sort(slot.begin(), slot.end(),
                                 [&](std::size_t a, std::size_t b) { return held_in[a](j, k) < held_in[b](j, k); });
            }
            auto out = features.row(row);
            for (std::size_t g = 0; g < groups; ++g) {
                const SymmetricMatrix& s = held_in[slot[g]];
                out[3 * g] = s(j, j);
                out[3 * g + 1] = s(k, k);
                out[3 * g + 2] = s(j, k);
            }
            responses[row] = held_out(j, k);
        }
    }
    return {std::move(features), std::move(responses)};
}

RegressionDataset build_offdiag_dataset(std::span<const SymmetricMatrix> group_stats, std::size_t held_out,
                                        FeatureOrder order) {
    const auto held_in = without(group_stats, held_out);
    return build_offdiag_dataset(held_in, group_stats[held_out], order);
}

RegressionDataset build_diag_dataset(std::span<const SymmetricMatrix> held_in, const SymmetricMatrix& held_out,
                                     FeatureOrder order) {
    check_stats(held_in, held_out);
    const std::size_t p = held_out.dim();
    const std::size_t groups = held_in.size();
    Matrix features(p, groups);
    std::vector<double> responses(p);
    for (std::size_t j = 0; j < p; ++j) {
        auto out = features.row(j);
        for (std::size_t g = 0; g < groups; ++g) out[g] = held_in[g](j, j);
        if (order == FeatureOrder::sorted) std::sort(out.begin(), out.end());
        responses[j] = held_out(j, j);
    }
    return {std::move(features), std::move(responses)};
}

RegressionDataset build_diag_dataset(std::span<const SymmetricMatrix> group_stats, std::size_t held_out,
                                     FeatureOrder order) {
    const auto held_in = without(group_stats, held_out);
    return build_diag_dataset(held_in, group_stats[held_out], order);
}

JackknifeConfig knn_config() { return {}; }

JackknifeConfig clustered_lr_config() {
    JackknifeConfig cfg;
    cfg.offdiag = ClusteredLrSpec{10};
    cfg.diag = ClusteredLrSpec{3};
    return cfg;
}

JackknifeConfig tree_config() {
    JackknifeConfig cfg;
    cfg.offdiag = TreeSpec{};
    cfg.diag = TreeSpec{};
    return cfg;
}

namespace {

void validate(const DataMatrix& X, const JackknifeConfig& cfg) {
    if (cfg.groups < 2) throw InvalidInput("jackknife: need M >= 2 groups, got " + std::to_string(cfg.groups));
    if (cfg.repetitions < 1) throw InvalidInput("jackknife: need T >= 1 repetitions");
    if (X.features() < 2) throw InvalidInput("jackknife: need p >= 2 features");
    if (X.samples() < 2 * cfg.groups) {
        throw InvalidInput("jackknife: need n >= 2M, got n=" + std::to_string(X.samples()) +
                           ", M=" + std::to_string(cfg.groups));
    }
    if (cfg.pd_floor && !(*cfg.pd_floor > 0.0)) throw InvalidInput("jackknife: pd_floor must be positive");
}

// mean <- mean + (x - mean) / count; exact when every x is the same.
void running_mean(SymmetricMatrix& mean, std::size_t j, std::size_t k, double x, std::size_t count) {
    mean(j, k) += (x - mean(j, k)) / static_cast<double>(count);
}

// Predictions of one split, averaged over its held-out groups.
SymmetricMatrix split_average(const DataMatrix& X, const GroupPartition& part, const JackknifeConfig& cfg,
                              std::uint64_t split_seed) {
    const std::size_t p = X.features();
    const std::size_t groups = part.group_count();
    const auto stats = group_sufficient_stats(X, part, cfg.center);

    SymmetricMatrix sum(p);
    for (std::size_t m = 0; m < groups; ++m) {
        std::vector<SymmetricMatrix> held_in;
        if (cfg.held_in == HeldInMode::pooled) {
            std::vector<std::size_t> rows;
            for (std::size_t l = 0; l < groups; ++l)
                if (l != m) rows.insert(rows.end(), part.group(l).begin(), part.group(l).end());
            std::sort(rows.begin(), rows.end());
            held_in.push_back(sample_covariance(X, rows, cfg.center));
        } else {
            held_in = without(stats, m);
        }

        const auto off = build_offdiag_dataset(held_in, stats[m], cfg.feature_order);
        const auto dia = build_diag_dataset(held_in, stats[m], cfg.feature_order);
        const auto off_model = fit(cfg.offdiag, off, derive_seed(split_seed, m, 0));
        const auto dia_model = fit(cfg.diag, dia, derive_seed(split_seed, m, 1));

        std::size_t row = 0;
        for (std::size_t j = 0; j < p; ++j) {
            for (std::size_t k = j + 1; k < p; ++k, ++row)
                running_mean(sum, k, j, predict(off_model, off.features().row(row)), m + 1);
        }
        for (std::size_t j = 0; j < p; ++j) running_mean(sum, j, j, predict(dia_model, dia.features().row(j)), m + 1);
    }
    return sum;
}

} // namespace

JackknifeEstimate estimate_with_partitions(const DataMatrix& X, std::span<const GroupPartition> partitions,
                                           const JackknifeConfig& cfg) {
    if (partitions.empty()) throw InvalidInput("jackknife: need at least one partition");
    JackknifeConfig effective = cfg;
    effective.repetitions = partitions.size();
    effective.groups = partitions.front().group_count();
    validate(X, effective);

    const std::uint64_t fit_root = derive_seed(cfg.seed, "fit");
    SymmetricMatrix total(X.features());
    for (std::size_t t = 0; t < partitions.size(); ++t) {
        if (partitions[t].group_count() < 2) throw InvalidInput("jackknife: partition with fewer than 2 groups");
        const auto split = split_average(X, partitions[t], cfg, derive_seed(fit_root, t));
        for (std::size_t j = 0; j < split.dim(); ++j)
            for (std::size_t k = 0; k <= j; ++k) running_mean(total, j, k, split(j, k), t + 1);
    }

    JackknifeEstimate out;
    out.pd_floor = cfg.pd_floor ? *cfg.pd_floor : default_pd_floor(total);
    out.estimate = project_pd(total, out.pd_floor);
    out.averaged = std::move(total);
    return out;
}

JackknifeEstimate estimate_detailed(const DataMatrix& X, const JackknifeConfig& cfg) {
    validate(X, cfg);
    const std::uint64_t split_root = derive_seed(cfg.seed, "split");
    std::vector<GroupPartition> partitions;
    partitions.reserve(cfg.repetitions);
    for (std::size_t t = 0; t < cfg.repetitions; ++t) {
        partitions.push_back(split_groups(X.samples(), cfg.groups, derive_seed(split_root, t)));
    }
    return estimate_with_partitions(X, partitions, cfg);
}

SymmetricMatrix estimate(const DataMatrix& X, const JackknifeConfig& cfg) { return estimate_detailed(X, cfg).estimate; }

AveragingWeights averaging_weights_check(const JackknifeConfig& cfg) {
    if (cfg.groups < 2) throw InvalidInput("averaging weights: need M >= 2 groups");
    if (cfg.repetitions < 1) throw InvalidInput("averaging weights: need T >= 1 repetitions");
    return {cfg.groups, cfg.repetitions, 1.0 / static_cast<double>(cfg.groups * cfg.repetitions)};
}

} // namespace jkcov
