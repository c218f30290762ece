#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jkcov/config.hpp"
#include "jkcov/jackknife.hpp"
#include "jkcov/matrix.hpp"
#include "jkcov/simgen.hpp"

namespace jkcov {

struct EstimatorSpec {
    enum class Kind { sample, linear, jackknife };

    std::string name;
    Kind kind = Kind::sample;
    /// Only used when kind == jackknife; seed and center are set per call.
    JackknifeConfig jackknife;
};

/// Tuning shared by all jackknife estimators built from a name.
struct EstimatorTuning {
    std::size_t groups = 5;
    std::size_t repetitions = 5;
    FeatureOrder feature_order = FeatureOrder::sorted;
    HeldInMode held_in = HeldInMode::per_group;
    std::optional<double> pd_floor;
    KnnSpec knn;
    std::size_t clr_clusters_offdiag = 10;
    std::size_t clr_clusters_diag = 3;
    std::size_t clr_max_iter = 100;
    TreeParams tree;
};

/// Known names: sample, linear, jk-knn, jk-knn-cv, jk-clr, jk-tree.
EstimatorSpec make_estimator(const std::string& name, const EstimatorTuning& tuning = {});
const std::vector<std::string>& estimator_names();

/// Reads the jackknife.*, knn.*, clr.* and tree.* keys.
EstimatorTuning load_estimator_tuning(KeyValueConfig& kv);

SymmetricMatrix run_estimator(const EstimatorSpec& spec, const DataMatrix& X, bool center, std::uint64_t seed);

struct BenchmarkConfig {
    std::vector<ModelName> models;
    /// Shape parameters shared by all models; name, p and seed are filled in per cell.
    ModelSpec model_params;
    std::vector<DistributionSpec> distributions;
    std::vector<std::size_t> dims;
    std::size_t n = 100;
    std::size_t replicates = 50;
    std::vector<EstimatorSpec> estimators;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    /// Centred (n-1) sample statistics instead of the mean-zero convention.
    bool center = false;
};

struct SplitEvalConfig {
    std::string dataset = "data";
    std::size_t n_train = 10;
    std::size_t n_test = 5;
    std::size_t repeats = 200;
    std::vector<EstimatorSpec> estimators;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
};

/// Desk-scale simulation preset: n=100, p in {30,100}, 50 replicates, all six
/// models and three distributions, every estimator.
BenchmarkConfig desk_preset();
/// n=100, p in {30,100,200}, 200 replicates.
BenchmarkConfig full_preset();

/// Reads a simulation config. Keys: version, models, distributions, dims, n,
/// replicates, estimators, seed, threads, center, plus the tuning and model
/// parameter keys documented in the README. Unknown keys are errors.
BenchmarkConfig load_benchmark_config(KeyValueConfig& kv);
SplitEvalConfig load_split_eval_config(KeyValueConfig& kv);

struct Record {
    std::string model;
    std::string distribution;
    std::size_t p = 0;
    std::string estimator;
    std::size_t replicate = 0;
    /// NaN marks a failed estimator run.
    double error = 0.0;
};

struct Summary {
    std::string model;
    std::string distribution;
    std::size_t p = 0;
    std::string estimator;
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    std::size_t runs = 0;
    std::size_t failures = 0;
};

struct BenchmarkResult {
    /// Sorted by (model, distribution, p, estimator, replicate).
    std::vector<Record> records;
    std::vector<Summary> summaries;

    /// Cells whose failure fraction exceeds `threshold`.
    std::vector<Summary> failing_cells(double threshold = 0.1) const;
};

/// Linear interpolation between order statistics (R type 7). `sorted` must be
/// ascending and nonempty.
double quantile_type7(std::span<const double> sorted, double q);

/// Sorts the records and recomputes per-cell median and quartiles, skipping
/// failures. A cell with only failures gets NaN aggregates.
BenchmarkResult summarize(std::vector<Record> records);

BenchmarkResult run_simulation(const BenchmarkConfig& cfg);

/// Repeatedly draws disjoint train/test rows, fits every estimator on the train
/// rows with centred statistics and scores it against the centred sample
/// covariance of the test rows.
BenchmarkResult run_split_eval(const DataMatrix& data, const SplitEvalConfig& cfg);

/// Writes records.csv and summary.csv into `dir`, creating it if needed.
void emit_results(const BenchmarkResult& result, const std::filesystem::path& dir);

/// Runs fn(i) for i in [0, count) on `threads` workers.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

} // namespace jkcov
