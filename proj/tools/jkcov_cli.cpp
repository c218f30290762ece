// jkcov: covariance estimation benchmarks and one-off estimates from CSV data.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "jkcov/bench.hpp"
#include "jkcov/csv.hpp"
#include "jkcov/error.hpp"
#include "jkcov/jackknife.hpp"
#include "jkcov/linalg.hpp"
#include "jkcov/regressors.hpp"
#include "jkcov/rng.hpp"
#include "jkcov/simgen.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitFailedCells = 3;

int report_failures(const jkcov::BenchmarkResult& result) {
    const auto failing = result.failing_cells(0.1);
    for (const auto& s : failing) {
        std::cerr << "warning: " << s.failures << "/" << s.runs << " runs failed for " << s.model << "/"
                  << s.distribution << "/p=" << s.p << "/" << s.estimator << "\n";
    }
    return failing.empty() ? 0 : kExitFailedCells;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir, std::optional<std::uint64_t> seed,
                 std::optional<std::size_t> threads) {
    auto kv = jkcov::KeyValueConfig::load(config_path);
    auto cfg = jkcov::load_benchmark_config(kv);
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    const auto result = jkcov::run_simulation(cfg);
    jkcov::emit_results(result, out_dir);
    return report_failures(result);
}

int cmd_split_eval(const std::string& data_path, const std::string& config_path, const std::string& out_dir,
                   std::optional<std::size_t> threads) {
    auto kv = jkcov::KeyValueConfig::load(config_path);
    auto cfg = jkcov::load_split_eval_config(kv);
    if (!kv.has("dataset")) cfg.dataset = std::filesystem::path(data_path).stem().string();
    if (threads) cfg.threads = *threads;
    const auto csv = jkcov::read_csv(data_path);
    const auto result = jkcov::run_split_eval(csv.data, cfg);
    jkcov::emit_results(result, out_dir);
    return report_failures(result);
}

int cmd_estimate(const std::string& data_path, const std::string& estimator, bool center,
                 const std::string& config_path, std::uint64_t seed, const std::string& out_path) {
    jkcov::EstimatorTuning tuning;
    if (!config_path.empty()) {
        auto kv = jkcov::KeyValueConfig::load(config_path);
        tuning = jkcov::load_estimator_tuning(kv);
        kv.reject_unknown();
    }
    const auto spec = jkcov::make_estimator(estimator, tuning);
    const auto csv = jkcov::read_csv(data_path);
    const auto S = jkcov::run_estimator(spec, csv.data, center, seed);
    jkcov::write_matrix_csv(out_path, S, csv.header);
    return 0;
}

int cmd_models(const std::string& name, std::size_t p, std::uint64_t seed, const std::string& out_path) {
    jkcov::ModelSpec spec;
    spec.name = jkcov::parse_model_name(name);
    spec.p = p;
    spec.seed = seed;
    jkcov::write_matrix_csv(out_path, jkcov::make_model(spec));
    return 0;
}

int cmd_elbow(const std::string& data_path, const std::string& kind, std::size_t groups, std::size_t max_k,
              bool center, std::uint64_t seed) {
    const auto csv = jkcov::read_csv(data_path);
    const auto part = jkcov::split_groups(csv.data.samples(), groups, jkcov::derive_seed(seed, "split"));
    const auto stats = jkcov::group_sufficient_stats(csv.data, part, center);
    const auto data = kind == "diag" ? jkcov::build_diag_dataset(stats, 0) : jkcov::build_offdiag_dataset(stats, 0);
    const auto [z, params] = jkcov::standardize(data.features());
    std::cout << "clusters,wss\n";
    for (const auto& row : jkcov::elbow_table(z, max_k, seed)) {
        std::cout << row.clusters << "," << jkcov::format_double(row.wss) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"jkcov: jackknife-regression covariance estimation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out;
    std::string data_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;

    auto* simulate = app.add_subcommand("simulate", "Run a seeded simulation benchmark");
    simulate->add_option("--config", config_path, "Benchmark config file")->required()->check(CLI::ExistingFile);
    simulate->add_option("--out", out, "Output directory for records.csv and summary.csv")->required();
    simulate->add_option("--seed", seed, "Override the master seed");
    simulate->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    auto* split = app.add_subcommand("split-eval", "Repeated train/test evaluation on a CSV dataset");
    split->add_option("--data", data_path, "CSV with samples in rows")->required()->check(CLI::ExistingFile);
    split->add_option("--config", config_path, "Split-eval config file")->required()->check(CLI::ExistingFile);
    split->add_option("--out", out, "Output directory")->required();
    split->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    std::string estimator;
    bool center = false;
    std::uint64_t estimate_seed = 1;
    auto* est = app.add_subcommand("estimate", "Estimate a covariance matrix from CSV data");
    est->add_option("--data", data_path, "CSV with samples in rows")->required()->check(CLI::ExistingFile);
    est->add_option("--estimator", estimator, "sample | linear | jk-knn | jk-knn-cv | jk-clr | jk-tree")
        ->required()
        ->check(CLI::IsMember(jkcov::estimator_names()));
    est->add_flag("--center", center, "Centre columns and use the n-1 divisor");
    est->add_option("--config", config_path, "Optional tuning config")->check(CLI::ExistingFile);
    est->add_option("--seed", estimate_seed, "Seed for group splits");
    est->add_option("--out", out, "Output CSV for the p x p estimate")->required();

    std::string model_name;
    std::size_t p = 0;
    std::uint64_t model_seed = 1;
    auto* models = app.add_subcommand("models", "Export a population covariance model");
    models->add_option("--name", model_name, "sparse | hypercorrelated | dense_07 | dense_09 | orthogonal | spiked")
        ->required();
    models->add_option("--p", p, "Dimension")->required()->check(CLI::Range(2, 100000));
    models->add_option("--seed", model_seed, "Seed for randomized models");
    models->add_option("--out", out, "Output CSV")->required();

    std::string kind = "offdiag";
    std::size_t groups = 5;
    std::size_t max_k = 15;
    std::uint64_t elbow_seed = 1;
    auto* elbow = app.add_subcommand("elbow", "Print within-cluster SS against cluster count");
    elbow->add_option("--data", data_path, "CSV with samples in rows")->required()->check(CLI::ExistingFile);
    elbow->add_option("--kind", kind, "offdiag | diag")->check(CLI::IsMember({"offdiag", "diag"}));
    elbow->add_option("--groups", groups, "Group count M")->check(CLI::Range(2, 1000));
    elbow->add_option("--max-k", max_k, "Largest cluster count")->check(CLI::PositiveNumber);
    elbow->add_flag("--center", center, "Centre columns within groups");
    elbow->add_option("--seed", elbow_seed, "Seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) return cmd_simulate(config_path, out, seed, threads);
        if (*split) return cmd_split_eval(data_path, config_path, out, threads);
        if (*est) return cmd_estimate(data_path, estimator, center, config_path, estimate_seed, out);
        if (*models) return cmd_models(model_name, p, model_seed, out);
        if (*elbow) return cmd_elbow(data_path, kind, groups, max_k, center, elbow_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
