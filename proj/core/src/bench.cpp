#include "jkcov/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <thread>
#include <tuple>

#include "jkcov/baselines.hpp"
#include "jkcov/csv.hpp"
#include "jkcov/error.hpp"
#include "jkcov/linalg.hpp"
#include "jkcov/rng.hpp"

namespace jkcov {

const std::vector<std::string>& estimator_names() {
    static const std::vector<std::string> names{"sample", "linear", "jk-knn", "jk-knn-cv", "jk-clr", "jk-tree"};
    return names;
}

EstimatorSpec make_estimator(const std::string& name, const EstimatorTuning& tuning) {
    EstimatorSpec spec;
    spec.name = name;
    if (name == "sample") return spec;
    if (name == "linear") {
        spec.kind = EstimatorSpec::Kind::linear;
        return spec;
    }

    JackknifeConfig& jk = spec.jackknife;
    jk.groups = tuning.groups;
    jk.repetitions = tuning.repetitions;
    jk.feature_order = tuning.feature_order;
    jk.held_in = tuning.held_in;
    jk.pd_floor = tuning.pd_floor;
    if (name == "jk-knn") {
        jk.offdiag = jk.diag = tuning.knn;
    } else if (name == "jk-knn-cv") {
        KnnSpec knn = tuning.knn;
        knn.rule = KnnSpec::Rule::cross_validated;
        jk.offdiag = jk.diag = knn;
    } else if (name == "jk-clr") {
        jk.offdiag = ClusteredLrSpec{tuning.clr_clusters_offdiag, tuning.clr_max_iter};
        jk.diag = ClusteredLrSpec{tuning.clr_clusters_diag, tuning.clr_max_iter};
    } else if (name == "jk-tree") {
        jk.offdiag = jk.diag = TreeSpec{tuning.tree};
    } else {
        throw InvalidInput("unknown estimator '" + name + "'");
    }
    spec.kind = EstimatorSpec::Kind::jackknife;
    return spec;
}

SymmetricMatrix run_estimator(const EstimatorSpec& spec, const DataMatrix& X, bool center, std::uint64_t seed) {
    switch (spec.kind) {
    case EstimatorSpec::Kind::sample: return sample_estimator(X, center);
    case EstimatorSpec::Kind::linear: return linear_shrinkage(X, center);
    case EstimatorSpec::Kind::jackknife: {
        JackknifeConfig cfg = spec.jackknife;
        cfg.seed = seed;
        cfg.center = center;
        return estimate(X, cfg);
    }
    }
    throw InvalidInput("run_estimator: bad estimator kind");
}

// ---------------------------------------------------------------------------
// Presets and config files

namespace {

std::vector<EstimatorSpec> default_estimators(const EstimatorTuning& tuning = {}) {
    std::vector<EstimatorSpec> out;
    for (const char* name : {"sample", "linear", "jk-knn", "jk-clr", "jk-tree"}) out.push_back(make_estimator(name, tuning));
    return out;
}

std::vector<DistributionSpec> all_distributions() {
    return {DistributionSpec{Family::gaussian}, DistributionSpec{Family::negative_binomial},
            DistributionSpec{Family::uniform}};
}

} // namespace

EstimatorTuning load_estimator_tuning(KeyValueConfig& kv) {
    EstimatorTuning t;
    if (auto v = kv.get_uint("jackknife.groups")) t.groups = *v;
    if (auto v = kv.get_uint("jackknife.repetitions")) t.repetitions = *v;
    if (auto v = kv.get_string("jackknife.feature_order")) {
        if (*v == "sorted") t.feature_order = FeatureOrder::sorted;
        else if (*v == "group_index") t.feature_order = FeatureOrder::group_index;
        else throw ParseError(kv.line_of("jackknife.feature_order"), "expected sorted or group_index");
    }
    if (auto v = kv.get_string("jackknife.held_in")) {
        if (*v == "per_group") t.held_in = HeldInMode::per_group;
        else if (*v == "pooled") t.held_in = HeldInMode::pooled;
        else throw ParseError(kv.line_of("jackknife.held_in"), "expected per_group or pooled");
    }
    if (kv.has("jackknife.pd_floor")) {
        const std::size_t line = kv.line_of("jackknife.pd_floor");
        const auto text = kv.get_string("jackknife.pd_floor");
        if (*text != "auto") {
            std::size_t used = 0;
            double floor = 0.0;
            try {
                floor = std::stod(*text, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != text->size() || !(floor > 0.0) || !std::isfinite(floor)) {
                throw ParseError(line, "jackknife.pd_floor must be 'auto' or a positive number");
            }
            t.pd_floor = floor;
        }
    }
    if (kv.has("knn.k")) {
        const std::size_t line = kv.line_of("knn.k");
        const auto text = *kv.get_string("knn.k");
        if (text == "sqrt") {
            t.knn.rule = KnnSpec::Rule::sqrt_n;
        } else if (text == "cv") {
            t.knn.rule = KnnSpec::Rule::cross_validated;
        } else {
            std::size_t used = 0;
            unsigned long long k = 0;
            try {
                k = std::stoull(text, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != text.size() || k == 0 || text.front() == '-') {
                throw ParseError(line, "knn.k must be 'sqrt', 'cv' or a positive integer");
            }
            t.knn.rule = KnnSpec::Rule::fixed;
            t.knn.k = static_cast<std::size_t>(k);
        }
    }
    if (auto v = kv.get_double("knn.train_fraction")) {
        if (!(*v > 0.0 && *v < 1.0)) throw ParseError(kv.line_of("knn.train_fraction"), "must lie in (0, 1)");
        t.knn.train_fraction = *v;
    }
    if (auto v = kv.get_uint("clr.clusters_offdiag")) t.clr_clusters_offdiag = *v;
    if (auto v = kv.get_uint("clr.clusters_diag")) t.clr_clusters_diag = *v;
    if (auto v = kv.get_uint("clr.max_iter")) t.clr_max_iter = *v;
    if (auto v = kv.get_uint("tree.min_split")) t.tree.min_split = *v;
    if (auto v = kv.get_uint("tree.min_bucket")) t.tree.min_bucket = *v;
    if (auto v = kv.get_uint("tree.max_depth")) t.tree.max_depth = *v;
    if (auto v = kv.get_double("tree.cp")) t.tree.cp = *v;
    if (t.groups < 2) throw ParseError(kv.line_of("jackknife.groups"), "jackknife.groups must be >= 2");
    if (t.repetitions < 1) throw ParseError(kv.line_of("jackknife.repetitions"), "jackknife.repetitions must be >= 1");
    if (t.clr_clusters_offdiag < 1) throw ParseError(kv.line_of("clr.clusters_offdiag"), "cluster counts must be >= 1");
    if (t.clr_clusters_diag < 1) {
        throw ParseError(kv.line_of("clr.clusters_diag"), "cluster counts must be >= 1");
    }
    if (t.tree.min_bucket < 1) throw ParseError(kv.line_of("tree.min_bucket"), "tree.min_bucket must be >= 1");
    return t;
}

namespace {

std::vector<EstimatorSpec> load_estimators(KeyValueConfig& kv, const EstimatorTuning& tuning) {
    const std::size_t line = kv.line_of("estimators");
    const auto names = kv.get_list("estimators");
    if (!names) return default_estimators(tuning);
    std::vector<EstimatorSpec> out;
    std::set<std::string> seen;
    for (const auto& name : *names) {
        if (!seen.insert(name).second) throw ParseError(line, "duplicate estimator '" + name + "'");
        try {
            out.push_back(make_estimator(name, tuning));
        } catch (const InvalidInput& e) {
            throw ParseError(line, e.what());
        }
    }
    return out;
}

std::size_t positive(KeyValueConfig& kv, const std::string& key, std::size_t fallback) {
    const auto v = kv.get_uint(key);
    if (!v) return fallback;
    if (*v == 0) throw ParseError(kv.line_of(key), key + " must be positive");
    return static_cast<std::size_t>(*v);
}

} // namespace

BenchmarkConfig desk_preset() {
    BenchmarkConfig cfg;
    cfg.models = all_models();
    cfg.distributions = all_distributions();
    cfg.dims = {30, 100};
    cfg.n = 100;
    cfg.replicates = 50;
    cfg.estimators = default_estimators();
    return cfg;
}

BenchmarkConfig full_preset() {
    BenchmarkConfig cfg = desk_preset();
    cfg.dims = {30, 100, 200};
    cfg.replicates = 200;
    return cfg;
}

BenchmarkConfig load_benchmark_config(KeyValueConfig& kv) {
    BenchmarkConfig cfg = desk_preset();
    try {
        if (auto v = kv.get_list("models")) {
            cfg.models.clear();
            for (const auto& name : *v) cfg.models.push_back(parse_model_name(name));
        }
    } catch (const InvalidInput& e) {
        throw ParseError(kv.line_of("models"), e.what());
    }

    DistributionSpec nb{Family::negative_binomial};
    if (auto v = kv.get_double("negative_binomial.size")) nb.nb_size = *v;
    if (auto v = kv.get_double("negative_binomial.mean")) nb.nb_mean = *v;
    for (auto& d : cfg.distributions)
        if (d.family == Family::negative_binomial) d = nb;
    try {
        if (auto v = kv.get_list("distributions")) {
            cfg.distributions.clear();
            for (const auto& name : *v) {
                DistributionSpec d = nb;
                d.family = parse_family(name);
                cfg.distributions.push_back(d);
            }
        }
    } catch (const InvalidInput& e) {
        throw ParseError(kv.line_of("distributions"), e.what());
    }

    if (auto v = kv.get_uint_list("dims")) {
        cfg.dims.clear();
        for (auto p : *v) {
            if (p < 2) throw ParseError(kv.line_of("dims"), "every dimension must be >= 2");
            cfg.dims.push_back(static_cast<std::size_t>(p));
        }
    }
    cfg.n = positive(kv, "n", cfg.n);
    cfg.replicates = positive(kv, "replicates", cfg.replicates);
    if (auto v = kv.get_uint("seed")) cfg.seed = *v;
    cfg.threads = positive(kv, "threads", cfg.threads);
    if (auto v = kv.get_bool("center")) cfg.center = *v;

    ModelSpec& m = cfg.model_params;
    if (auto v = kv.get_double("model.sparse.probability")) m.sparse_probability = *v;
    if (auto v = kv.get_double("model.sparse.value")) m.sparse_value = *v;
    if (auto v = kv.get_double("model.sparse.floor")) m.sparse_floor = *v;
    if (auto v = kv.get_double("model.hypercorrelated.rho")) m.hyper_rho = *v;
    if (auto v = kv.get_double("model.orthogonal.min")) m.orthogonal_min = *v;
    if (auto v = kv.get_double("model.orthogonal.max")) m.orthogonal_max = *v;
    if (auto v = kv.get_double_list("model.spiked.strengths")) m.spike_strengths = *v;

    const EstimatorTuning tuning = load_estimator_tuning(kv);
    cfg.estimators = load_estimators(kv, tuning);
    kv.reject_unknown();
    return cfg;
}

SplitEvalConfig load_split_eval_config(KeyValueConfig& kv) {
    SplitEvalConfig cfg;
    if (auto v = kv.get_string("dataset")) cfg.dataset = *v;
    cfg.n_train = positive(kv, "n_train", cfg.n_train);
    cfg.n_test = positive(kv, "n_test", cfg.n_test);
    cfg.repeats = positive(kv, "repeats", cfg.repeats);
    if (auto v = kv.get_uint("seed")) cfg.seed = *v;
    cfg.threads = positive(kv, "threads", cfg.threads);
    const EstimatorTuning tuning = load_estimator_tuning(kv);
    cfg.estimators = load_estimators(kv, tuning);
    kv.reject_unknown();
    return cfg;
}

// ---------------------------------------------------------------------------
// Aggregation

double quantile_type7(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw InvalidInput("quantile_type7: empty sample");
    const double h = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

BenchmarkResult summarize(std::vector<Record> records) {
    auto key = [](const Record& r) { return std::tie(r.model, r.distribution, r.p, r.estimator, r.replicate); };
    std::sort(records.begin(), records.end(), [&](const Record& a, const Record& b) { return key(a) < key(b); });

    BenchmarkResult result;
    std::size_t i = 0;
    while (i < records.size()) {
        std::size_t j = i;
        std::vector<double> errors;
        std::size_t failures = 0;
        while (j < records.size() && records[j].model == records[i].model &&
               records[j].distribution == records[i].distribution && records[j].p == records[i].p &&
               records[j].estimator == records[i].estimator) {
            if (std::isnan(records[j].error)) ++failures;
            else errors.push_back(records[j].error);
            ++j;
        }
        Summary s{records[i].model, records[i].distribution, records[i].p, records[i].estimator};
        s.runs = j - i;
        s.failures = failures;
        if (errors.empty()) {
            s.median = s.q25 = s.q75 = std::numeric_limits<double>::quiet_NaN();
        } else {
            std::sort(errors.begin(), errors.end());
            s.median = quantile_type7(errors, 0.5);
            s.q25 = quantile_type7(errors, 0.25);
            s.q75 = quantile_type7(errors, 0.75);
        }
        result.summaries.push_back(std::move(s));
        i = j;
    }
    result.records = std::move(records);
    return result;
}

std::vector<Summary> BenchmarkResult::failing_cells(double threshold) const {
    std::vector<Summary> out;
    for (const auto& s : summaries) {
        if (s.runs > 0 && static_cast<double>(s.failures) > threshold * static_cast<double>(s.runs)) out.push_back(s);
    }
    return out;
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    }
}

// ---------------------------------------------------------------------------
// Protocols

namespace {

// Runs every estimator on X; failures become NaN records.
void score_estimators(const std::vector<EstimatorSpec>& estimators, const DataMatrix& X, const SymmetricMatrix& truth,
                      bool center, std::uint64_t stream, Record base, std::vector<Record>& out) {
    for (const auto& est : estimators) {
        Record r = base;
        r.estimator = est.name;
        try {
            r.error = frobenius_distance(run_estimator(est, X, center, derive_seed(stream, est.name)), truth);
            if (!std::isfinite(r.error)) r.error = std::numeric_limits<double>::quiet_NaN();
        } catch (const std::exception&) {
            r.error = std::numeric_limits<double>::quiet_NaN();
        }
        out.push_back(std::move(r));
    }
}

} // namespace

BenchmarkResult run_simulation(const BenchmarkConfig& cfg) {
    if (cfg.replicates < 1) throw InvalidInput("run_simulation: replicates must be >= 1");
    std::set<std::string> names;
    for (const auto& e : cfg.estimators) {
        if (!names.insert(e.name).second) throw InvalidInput("run_simulation: duplicate estimator '" + e.name + "'");
    }

    struct Cell {
        std::string model;
        DistributionSpec dist;
        std::size_t p;
        SymmetricMatrix sigma;
    };
    std::vector<Cell> cells;
    for (ModelName model : cfg.models) {
        for (std::size_t p : cfg.dims) {
            ModelSpec spec = cfg.model_params;
            spec.name = model;
            spec.p = p;
            spec.seed = derive_seed(derive_seed(cfg.seed, "model"), hash_tag(to_string(model)), p);
            const SymmetricMatrix sigma = make_model(spec);
            for (const auto& dist : cfg.distributions) cells.push_back({to_string(model), dist, p, sigma});
        }
    }

    const std::size_t tasks = cells.size() * cfg.replicates;
    std::vector<std::vector<Record>> slots(tasks);
    const std::uint64_t data_root = derive_seed(cfg.seed, "data");
    const std::uint64_t estimator_root = derive_seed(cfg.seed, "estimator");
    parallel_for(tasks, cfg.threads, [&](std::size_t task) {
        const Cell& cell = cells[task / cfg.replicates];
        const std::size_t rep = task % cfg.replicates;
        const std::string family = to_string(cell.dist.family);
        const auto path = [&](std::uint64_t root) {
            return derive_seed(root, hash_tag(cell.model), hash_tag(family), cell.p, rep);
        };
        const DataMatrix X = sample(cell.sigma, cfg.n, cell.dist, path(data_root));
        Record base{cell.model, family, cell.p, {}, rep, 0.0};
        score_estimators(cfg.estimators, X, cell.sigma, cfg.center, path(estimator_root), base, slots[task]);
    });

    std::vector<Record> records;
    for (auto& s : slots) std::move(s.begin(), s.end(), std::back_inserter(records));
    return summarize(std::move(records));
}

BenchmarkResult run_split_eval(const DataMatrix& data, const SplitEvalConfig& cfg) {
    const std::size_t n = data.samples();
    if (cfg.n_train + cfg.n_test > n) {
        throw InvalidInput("split-eval: n_train + n_test = " + std::to_string(cfg.n_train + cfg.n_test) +
                           " exceeds the " + std::to_string(n) + " available samples");
    }
    if (cfg.n_test < 2) throw InvalidInput("split-eval: n_test must be >= 2 for a centred test covariance");
    if (cfg.n_train < 2) throw InvalidInput("split-eval: n_train must be >= 2");
    if (cfg.repeats < 1) throw InvalidInput("split-eval: repeats must be >= 1");
    std::set<std::string> names;
    for (const auto& e : cfg.estimators) {
        if (!names.insert(e.name).second) throw InvalidInput("split-eval: duplicate estimator '" + e.name + "'");
        if (e.kind == EstimatorSpec::Kind::jackknife && cfg.n_train < 2 * e.jackknife.groups) {
            throw InvalidInput("split-eval: estimator '" + e.name + "' needs n_train >= 2M = " +
                               std::to_string(2 * e.jackknife.groups));
        }
    }

    std::vector<std::vector<Record>> slots(cfg.repeats);
    const std::uint64_t split_root = derive_seed(cfg.seed, "split-eval");
    const std::uint64_t estimator_root = derive_seed(cfg.seed, "estimator");
    parallel_for(cfg.repeats, cfg.threads, [&](std::size_t rep) {
        Rng rng(derive_seed(split_root, rep));
        const auto perm = random_permutation(n, rng);
        const std::span<const std::size_t> train(perm.data(), cfg.n_train);
        const std::span<const std::size_t> test(perm.data() + cfg.n_train, cfg.n_test);
        const SymmetricMatrix truth = sample_covariance(data, test, true);
        const DataMatrix X = data.select_rows(train);
        Record base{cfg.dataset, "observed", data.features(), {}, rep, 0.0};
        score_estimators(cfg.estimators, X, truth, true, derive_seed(estimator_root, rep), base, slots[rep]);
    });

    std::vector<Record> records;
    for (auto& s : slots) std::move(s.begin(), s.end(), std::back_inserter(records));
    return summarize(std::move(records));
}

void emit_results(const BenchmarkResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [](const std::filesystem::path& path) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
        return out;
    };

    {
        auto out = open(dir / "records.csv");
        out << "model,distribution,p,estimator,replicate,frobenius_error\n";
        for (const auto& r : result.records) {
            out << r.model << ',' << r.distribution << ',' << r.p << ',' << r.estimator << ',' << r.replicate << ','
                << format_double(r.error) << '\n';
        }
        if (!out) throw std::runtime_error("write failed for records.csv");
    }
    {
        auto out = open(dir / "summary.csv");
        out << "model,distribution,p,estimator,median,q25,q75\n";
        for (const auto& s : result.summaries) {
            out << s.model << ',' << s.distribution << ',' << s.p << ',' << s.estimator << ','
                << format_double(s.median) << ',' << format_double(s.q25) << ',' << format_double(s.q75) << '\n';
        }
        if (!out) throw std::runtime_error("write failed for summary.csv");
    }
}

} // namespace jkcov
