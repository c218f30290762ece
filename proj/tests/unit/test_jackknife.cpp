#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "jkcov/error.hpp"
#include "jkcov/jackknife.hpp"
#include "jkcov/linalg.hpp"

using namespace jkcov;

namespace {

SymmetricMatrix sym3(double a00, double a11, double a22, double a01, double a02, double a12) {
    SymmetricMatrix s(3);
    s(0, 0) = a00;
    s(1, 1) = a11;
    s(2, 2) = a22;
    s(0, 1) = a01;
    s(0, 2) = a02;
    s(1, 2) = a12;
    return s;
}

JackknifeConfig fixed_knn(std::size_t k, std::size_t groups = 2, std::size_t reps = 1) {
    JackknifeConfig cfg;
    cfg.groups = groups;
    cfg.repetitions = reps;
    cfg.offdiag = KnnSpec{KnnSpec::Rule::fixed, k};
    cfg.diag = KnnSpec{KnnSpec::Rule::fixed, k};
    return cfg;
}

} // namespace

TEST(SplitGroups, FourIntoTwo) {
    auto part = split_groups(4, 2, 9);
    ASSERT_EQ(part.group_count(), 2u);
    std::set<std::size_t> all;
    for (const auto& g : part.groups()) {
        EXPECT_EQ(g.size(), 2u);
        all.insert(g.begin(), g.end());
    }
    EXPECT_EQ(all, (std::set<std::size_t>{0, 1, 2, 3}));
}

TEST(SplitGroups, UnevenSizes) {
    auto part = split_groups(10, 3, 1);
    std::multiset<std::size_t> sizes;
    for (const auto& g : part.groups()) sizes.insert(g.size());
    EXPECT_EQ(sizes, (std::multiset<std::size_t>{3, 3, 4}));
}

TEST(SplitGroups, DeterministicAndSeedSensitive) {
    EXPECT_EQ(split_groups(40, 5, 3).groups(), split_groups(40, 5, 3).groups());
    EXPECT_NE(split_groups(40, 5, 3).groups(), split_groups(40, 5, 4).groups());
}

TEST(SplitGroups, Errors) {
    EXPECT_THROW(split_groups(5, 3, 0), InvalidInput);
    EXPECT_THROW(split_groups(10, 1, 0), InvalidInput);
}

TEST(GroupPartition, Validation) {
    EXPECT_NO_THROW(GroupPartition(4, {{0, 1}, {2, 3}}));
    EXPECT_THROW(GroupPartition(4, {{0, 1}, {1, 3}}), InvalidInput);
    EXPECT_THROW(GroupPartition(4, {{0, 1, 2}, {3}}), InvalidInput);
    EXPECT_THROW(GroupPartition(5, {{0, 1}, {2, 3}}), InvalidInput);
    EXPECT_THROW(GroupPartition(4, {{0, 1}, {2, 7}}), InvalidInput);
}

TEST(SufficientStats, SingleGroupIsSampleCovariance) {
    auto x = testutil::gaussian_data(6, 3, 2);
    GroupPartition all(6, {{0, 1, 2, 3, 4, 5}});
    auto stats = group_sufficient_stats(x, all, false);
    ASSERT_EQ(stats.size(), 1u);
    EXPECT_EQ(stats[0], sample_covariance(x, false));
}

TEST(SufficientStats, HandComputed) {
    DataMatrix x(4, 2, {1, 2, 3, -1, 0, 4, 2, 2});
    GroupPartition part(4, {{0, 1}, {2, 3}});
    auto stats = group_sufficient_stats(x, part, false);
    // Group 0 rows (1,2),(3,-1): s00=(1+9)/2, s11=(4+1)/2, s01=(2-3)/2.
    EXPECT_DOUBLE_EQ(stats[0](0, 0), 5.0);
    EXPECT_DOUBLE_EQ(stats[0](1, 1), 2.5);
    EXPECT_DOUBLE_EQ(stats[0](0, 1), -0.5);
    // Group 1 rows (0,4),(2,2).
    EXPECT_DOUBLE_EQ(stats[1](0, 0), 2.0);
    EXPECT_DOUBLE_EQ(stats[1](1, 1), 10.0);
    EXPECT_DOUBLE_EQ(stats[1](0, 1), 2.0);
}

TEST(SufficientStats, SizeWeightedAverageIsPooled) {
    auto x = testutil::gaussian_data(23, 4, 5);
    auto part = split_groups(23, 4, 8);
    auto stats = group_sufficient_stats(x, part, false);
    SymmetricMatrix pooled(4);
    for (std::size_t m = 0; m < stats.size(); ++m) pooled += (double(part.group(m).size()) / 23.0) * stats[m];
    EXPECT_LT(frobenius_distance(pooled, sample_covariance(x, false)), 1e-12);
    for (const auto& s : stats) {
        for (std::size_t j = 0; j < 4; ++j) {
            EXPECT_GE(s(j, j), 0.0);
            for (std::size_t k = 0; k < 4; ++k) EXPECT_LE(std::abs(s(j, k)), std::sqrt(s(j, j) * s(k, k)) + 1e-10);
        }
    }
}

TEST(SufficientStats, PartitionSizeMismatch) {
    auto x = testutil::gaussian_data(6, 2, 1);
    EXPECT_THROW(group_sufficient_stats(x, split_groups(8, 2, 0), false), InvalidInput);
}

TEST(OffdiagDataset, Shape) {
    std::vector<SymmetricMatrix> stats{testutil::random_symmetric(3, 1), testutil::random_symmetric(3, 2)};
    auto ds = build_offdiag_dataset(stats, 1);
    EXPECT_EQ(ds.size(), 3u);
    EXPECT_EQ(ds.dimension(), 3u);
    // Rows are (0,1), (0,2), (1,2).
    EXPECT_EQ(ds.responses()[0], stats[1](0, 1));
    EXPECT_EQ(ds.responses()[1], stats[1](0, 2));
    EXPECT_EQ(ds.responses()[2], stats[1](1, 2));
    EXPECT_EQ(ds.features()(2, 0), stats[0](1, 1));
    EXPECT_EQ(ds.features()(2, 1), stats[0](2, 2));
    EXPECT_EQ(ds.features()(2, 2), stats[0](1, 2));
}

TEST(OffdiagDataset, SortedByCovarianceComponent) {
    auto g0 = sym3(1, 1, 1, 0.2, 0.2, 0.2);
    auto g1 = sym3(2, 2, 2, 0.9, 0.9, 0.9);
    auto g2 = sym3(3, 3, 3, 0.5, 0.5, 0.5);
    // Held-in groups in index order are g1 then g0; g0 has the smaller s_jk so it comes first.
    std::vector<SymmetricMatrix> stats{g1, g0, g2};
    auto ds = build_offdiag_dataset(stats, 2);
    ASSERT_EQ(ds.dimension(), 6u);
    EXPECT_EQ(ds.features()(0, 0), 1.0);
    EXPECT_EQ(ds.features()(0, 2), 0.2);
    EXPECT_EQ(ds.features()(0, 3), 2.0);
    EXPECT_EQ(ds.features()(0, 5), 0.9);

    auto raw = build_offdiag_dataset(stats, 2, FeatureOrder::group_index);
    EXPECT_EQ(raw.features()(0, 0), 2.0);
    EXPECT_EQ(raw.features()(0, 3), 1.0);
}

TEST(OffdiagDataset, TiesKeepGroupOrder) {
    auto g0 = sym3(1, 1, 1, 0.5, 0.5, 0.5);
    auto g1 = sym3(2, 2, 2, 0.5, 0.5, 0.5);
    std::vector<SymmetricMatrix> stats{g0, g1, g0};
    auto ds = build_offdiag_dataset(stats, 2);
    EXPECT_EQ(ds.features()(0, 0), 1.0);
    EXPECT_EQ(ds.features()(0, 3), 2.0);
}

TEST(OffdiagDataset, IdenticalGroupsRepeatTriple) {
    auto s = testutil::random_symmetric(4, 3);
    std::vector<SymmetricMatrix> stats{s, s, s};
    auto ds = build_offdiag_dataset(stats, 0);
    for (std::size_t r = 0; r < ds.size(); ++r)
        for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(ds.features()(r, c), ds.features()(r, c + 3));
}

TEST(DiagDataset, ShapeAndConstant) {
    std::vector<SymmetricMatrix> stats{SymmetricMatrix::identity(3), SymmetricMatrix::identity(3)};
    auto ds = build_diag_dataset(stats, 0);
    EXPECT_EQ(ds.size(), 3u);
    EXPECT_EQ(ds.dimension(), 1u);
    for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(ds.features()(r, 0), 1.0);
}

TEST(DiagDataset, SortOracle) {
    auto x = testutil::gaussian_data(20, 5, 6);
    auto part = split_groups(20, 4, 2);
    auto stats = group_sufficient_stats(x, part, true);
    for (std::size_t m = 0; m < 4; ++m) {
        auto ds = build_diag_dataset(stats, m);
        ASSERT_EQ(ds.dimension(), 3u);
        for (std::size_t j = 0; j < 5; ++j) {
            std::vector<double> v;
            for (std::size_t l = 0; l < 4; ++l) {
                if (l == m) continue;
                const auto rows = part.group(l);
                double mean = 0.0;
                for (auto r : rows) mean += x(r, j) / rows.size();
                double ss = 0.0;
                for (auto r : rows) ss += (x(r, j) - mean) * (x(r, j) - mean);
                v.push_back(ss / (rows.size() - 1));
            }
            std::sort(v.begin(), v.end());
            for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(ds.features()(j, c), v[c], 1e-12);
            EXPECT_EQ(ds.responses()[j], stats[m](j, j));
        }
    }
}

TEST(Datasets, Errors) {
    std::vector<SymmetricMatrix> one{SymmetricMatrix::identity(2)};
    EXPECT_THROW(build_offdiag_dataset(one, 0), InvalidInput);
    std::vector<SymmetricMatrix> two{SymmetricMatrix::identity(2), SymmetricMatrix::identity(3)};
    EXPECT_THROW(build_diag_dataset(two, 0), InvalidInput);
    std::vector<SymmetricMatrix> ok{SymmetricMatrix::identity(2), SymmetricMatrix::identity(2)};
    EXPECT_THROW(build_diag_dataset(ok, 2), InvalidInput);
}

TEST(Estimate, ConstantRegressorClosure) {
    auto x = testutil::gaussian_data(20, 4, 1);
    JackknifeConfig cfg;
    cfg.offdiag = ConstantSpec{0.3};
    cfg.diag = ConstantSpec{0.3};
    SymmetricMatrix c(4, 0.3);
    auto detailed = estimate_detailed(x, cfg);
    EXPECT_EQ(detailed.averaged, c);
    EXPECT_EQ(detailed.estimate, project_pd(c, default_pd_floor(c)));
    EXPECT_EQ(estimate(x, cfg), detailed.estimate);
}

TEST(Estimate, GlobalMeanReference) {
    // With k = N the kNN prediction is the mean held-out response, so each
    // off-diagonal entry is the average over m of the mean off-diagonal of S_m.
    auto x = testutil::gaussian_data(12, 5, 4);
    GroupPartition part(12, {{0, 2, 4, 6, 8, 10}, {1, 3, 5, 7, 9, 11}});
    auto cfg = fixed_knn(1000);
    std::vector<GroupPartition> parts{part};
    auto out = estimate_with_partitions(x, parts, cfg);

    double off = 0.0;
    double dia = 0.0;
    for (const auto& g : part.groups()) {
        double s_off = 0.0;
        double s_dia = 0.0;
        for (std::size_t j = 0; j < 5; ++j) {
            for (std::size_t k = 0; k < 5; ++k) {
                double v = 0.0;
                for (auto r : g) v += x(r, j) * x(r, k);
                v /= g.size();
                if (j < k) s_off += v;
                if (j == k) s_dia += v;
            }
        }
        off += s_off / 10.0 / 2.0;
        dia += s_dia / 5.0 / 2.0;
    }
    for (std::size_t j = 0; j < 5; ++j) {
        EXPECT_NEAR(out.averaged(j, j), dia, 1e-12);
        for (std::size_t k = j + 1; k < 5; ++k) EXPECT_NEAR(out.averaged(j, k), off, 1e-12);
    }
}

TEST(Estimate, DuplicatedHalvesWithNearestNeighbour) {
    auto base = testutil::gaussian_matrix(4, 4, 10);
    Matrix dup(8, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) dup(i, j) = dup(i + 4, j) = base(i, j);
    DataMatrix x(dup);
    GroupPartition part(8, {{0, 1, 2, 3}, {4, 5, 6, 7}});
    std::vector<GroupPartition> parts{part};
    auto out = estimate_with_partitions(x, parts, fixed_knn(1));
    auto common = sample_covariance(DataMatrix(base), false);
    EXPECT_LT(frobenius_distance(out.averaged, common), 1e-12);
}

TEST(Estimate, PdAndSymmetry) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto x = testutil::gaussian_data(10 + seed, 12, seed);
        JackknifeConfig cfg = seed % 3 == 0 ? knn_config() : (seed % 3 == 1 ? tree_config() : clustered_lr_config());
        cfg.groups = 2;
        cfg.repetitions = 2;
        cfg.seed = seed;
        auto out = estimate_detailed(x, cfg);
        EXPECT_GE(min_eigenvalue(out.estimate), out.pd_floor - 1e-10);
        EXPECT_TRUE(testutil::exactly_symmetric(out.estimate.to_dense()));
    }
}

TEST(Estimate, ExplicitFloor) {
    auto x = testutil::gaussian_data(10, 15, 3);
    auto cfg = knn_config();
    cfg.groups = 2;
    cfg.pd_floor = 0.25;
    auto out = estimate_detailed(x, cfg);
    EXPECT_EQ(out.pd_floor, 0.25);
    EXPECT_GE(min_eigenvalue(out.estimate), 0.25 - 1e-10);
}

TEST(Estimate, DeterministicGivenSeed) {
    auto x = testutil::gaussian_data(30, 6, 2);
    auto cfg = knn_config();
    cfg.seed = 42;
    EXPECT_EQ(estimate(x, cfg), estimate(x, cfg));
    auto other = cfg;
    other.seed = 43;
    EXPECT_NE(estimate(x, cfg), estimate(x, other));
}

TEST(Estimate, RowOrderWithinPartitionIrrelevant) {
    auto x = testutil::gaussian_data(16, 5, 12);
    auto part = split_groups(16, 4, 3);
    // Reverse the row order of X and relabel the partition to match.
    std::vector<std::size_t> rev(16);
    for (std::size_t i = 0; i < 16; ++i) rev[i] = 15 - i;
    auto xr = x.select_rows(rev);
    std::vector<std::vector<std::size_t>> groups;
    for (const auto& g : part.groups()) {
        std::vector<std::size_t> h;
        for (auto r : g) h.push_back(15 - r);
        std::reverse(h.begin(), h.end());
        groups.push_back(h);
    }
    std::vector<GroupPartition> a{part};
    std::vector<GroupPartition> b{GroupPartition(16, groups)};
    auto cfg = tree_config();
    auto ea = estimate_with_partitions(x, a, cfg);
    auto eb = estimate_with_partitions(xr, b, cfg);
    EXPECT_LT(frobenius_distance(ea.averaged, eb.averaged), 1e-12);
}

// Reversing the columns swaps s_jj and s_kk in every triple at once, which
// leaves standardized distances unchanged. A single transposition does not.
TEST(Estimate, ColumnReversalPermutesEstimate) {
    auto x = testutil::gaussian_data(20, 5, 33);
    Matrix swapped = x.values();
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = 0; j < 5; ++j) swapped(i, j) = x(i, 4 - j);
    DataMatrix xs(swapped);
    std::vector<GroupPartition> parts{split_groups(20, 2, 5)};
    for (auto cfg : {fixed_knn(3), tree_config()}) {
        auto a = estimate_with_partitions(x, parts, cfg).averaged;
        auto b = estimate_with_partitions(xs, parts, cfg).averaged;
        const std::size_t perm[5] = {4, 3, 2, 1, 0};
        for (std::size_t j = 0; j < 5; ++j)
            for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(a(j, k), b(perm[j], perm[k]), 1e-12);
    }
}

TEST(Estimate, PooledModeDiffers) {
    auto x = testutil::gaussian_data(30, 6, 9);
    auto cfg = knn_config();
    cfg.groups = 3;
    cfg.repetitions = 1;
    auto pooled = cfg;
    pooled.held_in = HeldInMode::pooled;
    auto a = estimate(x, cfg);
    auto b = estimate(x, pooled);
    EXPECT_GT(frobenius_distance(a, b), 0.0);
    EXPECT_GE(min_eigenvalue(b), 0.0);
}

TEST(Estimate, ConfigErrors) {
    auto x = testutil::gaussian_data(9, 3, 1);
    auto cfg = knn_config();
    EXPECT_THROW(estimate(x, cfg), InvalidInput);  // n < 2M
    cfg.groups = 1;
    EXPECT_THROW(estimate(x, cfg), InvalidInput);
    cfg.groups = 2;
    cfg.repetitions = 0;
    EXPECT_THROW(estimate(x, cfg), InvalidInput);
    cfg.repetitions = 1;
    cfg.pd_floor = -1.0;
    EXPECT_THROW(estimate(x, cfg), InvalidInput);
    EXPECT_THROW(estimate(testutil::gaussian_data(10, 1, 1), knn_config()), InvalidInput);
}

TEST(AveragingWeights, Examples) {
    JackknifeConfig cfg;
    auto w = averaging_weights_check(cfg);
    EXPECT_EQ(w.groups, 5u);
    EXPECT_EQ(w.repetitions, 5u);
    EXPECT_EQ(w.per_term, 1.0 / 25.0);
    cfg.groups = 2;
    cfg.repetitions = 1;
    EXPECT_EQ(averaging_weights_check(cfg).per_term, 0.5);
    cfg.groups = 1;
    EXPECT_THROW(averaging_weights_check(cfg), InvalidInput);
}

TEST(Presets, ClusterCounts) {
    auto cfg = clustered_lr_config();
    EXPECT_EQ(std::get<ClusteredLrSpec>(cfg.offdiag).clusters, 10u);
    EXPECT_EQ(std::get<ClusteredLrSpec>(cfg.diag).clusters, 3u);
    EXPECT_TRUE(std::holds_alternative<TreeSpec>(tree_config().offdiag));
    EXPECT_TRUE(std::holds_alternative<KnnSpec>(knn_config().diag));
}
