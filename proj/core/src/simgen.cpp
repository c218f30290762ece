#include "jkcov/simgen.hpp"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "jkcov/error.hpp"
#include "jkcov/linalg.hpp"
#include "jkcov/rng.hpp"

namespace jkcov {

namespace {

struct NamedModel {
    ModelName name;
    std::string_view text;
};

constexpr NamedModel kModels[] = {
    {ModelName::sparse, "sparse"},         {ModelName::hypercorrelated, "hypercorrelated"},
    {ModelName::dense_07, "dense_07"},     {ModelName::dense_09, "dense_09"},
    {ModelName::orthogonal, "orthogonal"}, {ModelName::spiked, "spiked"},
};

SymmetricMatrix sparse_model(const ModelSpec& spec) {
    const std::size_t p = spec.p;
    Rng rng(derive_seed(spec.seed, "sparse"));
    std::bernoulli_distribution nonzero(spec.sparse_probability);
    std::bernoulli_distribution positive(0.5);
    SymmetricMatrix S = SymmetricMatrix::identity(p);
    for (std::size_t j = 1; j < p; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            if (nonzero(rng)) S(j, k) = positive(rng) ? spec.sparse_value : -spec.sparse_value;
        }
    }
    if (min_eigenvalue(S) < spec.sparse_floor) S = project_pd(S, spec.sparse_floor);
    return S;
}

SymmetricMatrix orthogonal_model(const ModelSpec& spec) {
    const std::size_t p = spec.p;
    const Matrix Q = random_orthogonal(p, derive_seed(spec.seed, "orthogonal"));
    std::vector<double> lambda(p);
    for (std::size_t i = 0; i < p; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(p - 1);
        lambda[i] = spec.orthogonal_min + t * (spec.orthogonal_max - spec.orthogonal_min);
    }
    return reconstruct(Q, lambda);
}

SymmetricMatrix spiked_model(const ModelSpec& spec) {
    const std::size_t p = spec.p;
    const std::size_t spikes = spec.spike_strengths.size();
    if (spikes > p) throw InvalidInput("spiked model: more spikes than dimensions");
    const Matrix Q = random_orthogonal(p, derive_seed(spec.seed, "spiked"));
    SymmetricMatrix S = SymmetricMatrix::identity(p);
    for (std::size_t r = 0; r < spikes; ++r) {
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t k = 0; k <= j; ++k) S(j, k) += spec.spike_strengths[r] * Q(j, r) * Q(k, r);
    }
    return S;
}

} // namespace

ModelName parse_model_name(std::string_view name) {
    for (const auto& m : kModels)
        if (m.text == name) return m.name;
    throw InvalidInput("unknown covariance model '" + std::string(name) + "'");
}

std::string to_string(ModelName name) {
    for (const auto& m : kModels)
        if (m.name == name) return std::string(m.text);
    return "unknown";
}

const std::vector<ModelName>& all_models() {
    static const std::vector<ModelName> models{ModelName::sparse,   ModelName::hypercorrelated,
                                               ModelName::dense_07, ModelName::dense_09,
                                               ModelName::orthogonal, ModelName::spiked};
    return models;
}

SymmetricMatrix equicorrelation(std::size_t p, double rho) {
    SymmetricMatrix S(p, rho);
    for (std::size_t j = 0; j < p; ++j) S(j, j) = 1.0;
    return S;
}

Matrix random_orthogonal(std::size_t p, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> normal;
    const auto n = static_cast<Eigen::Index>(p);
    Eigen::MatrixXd G(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) G(i, j) = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
    Matrix out(p, p);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double sign = R(j, j) < 0.0 ? -1.0 : 1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = sign * Q(i, j);
        }
    }
    return out;
}

SymmetricMatrix make_model(const ModelSpec& spec) {
    if (spec.p < 2) throw InvalidInput("make_model: need p >= 2");
    SymmetricMatrix S;
    switch (spec.name) {
    case ModelName::sparse: S = sparse_model(spec); break;
    case ModelName::hypercorrelated: S = equicorrelation(spec.p, spec.hyper_rho); break;
    case ModelName::dense_07: S = equicorrelation(spec.p, 0.7); break;
    case ModelName::dense_09: S = equicorrelation(spec.p, 0.9); break;
    case ModelName::orthogonal: S = orthogonal_model(spec); break;
    case ModelName::spiked: S = spiked_model(spec); break;
    }
    if (!(min_eigenvalue(S) > 0.0)) {
        throw NumericalFailure("make_model: " + to_string(spec.name) + " matrix is not positive definite");
    }
    return S;
}

Family parse_family(std::string_view name) {
    if (name == "gaussian") return Family::gaussian;
    if (name == "negative_binomial") return Family::negative_binomial;
    if (name == "uniform") return Family::uniform;
    throw InvalidInput("unknown distribution family '" + std::string(name) + "'");
}

std::string to_string(Family family) {
    switch (family) {
    case Family::gaussian: return "gaussian";
    case Family::negative_binomial: return "negative_binomial";
    case Family::uniform: return "uniform";
    }
    return "unknown";
}

namespace {

template <typename Draw>
DataMatrix mix_rows(const SymmetricMatrix& Sigma, std::size_t n, Draw&& draw) {
    const Matrix L = cholesky(Sigma);
    const std::size_t p = Sigma.dim();
    Matrix X(n, p);
    std::vector<double> y(p);
    for (std::size_t i = 0; i < n; ++i) {
        for (double& v : y) v = draw();
        auto row = X.row(i);
        for (std::size_t j = 0; j < p; ++j) {
            double sum = 0.0;
            for (std::size_t l = 0; l <= j; ++l) sum += L(j, l) * y[l];
            row[j] = sum;
        }
    }
    return DataMatrix(std::move(X));
}

} // namespace

DataMatrix sample_gaussian(const SymmetricMatrix& Sigma, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> normal;
    return mix_rows(Sigma, n, [&] { return normal(rng); });
}

DataMatrix sample_nongaussian(const SymmetricMatrix& Sigma, std::size_t n, const DistributionSpec& dist,
                              std::uint64_t seed) {
    Rng rng(seed);
    switch (dist.family) {
    case Family::negative_binomial: {
        if (!(dist.nb_size > 0.0 && dist.nb_mean > 0.0)) throw InvalidInput("negative binomial: bad parameters");
        // Failures before the size-th success with success probability
        // size/(size+mean); integer size only.
        const double size = dist.nb_size;
        if (size != std::floor(size)) throw InvalidInput("negative binomial: size must be an integer");
        std::negative_binomial_distribution<long long> nb(static_cast<long long>(size), size / (size + dist.nb_mean));
        const double sd = std::sqrt(dist.nb_mean + dist.nb_mean * dist.nb_mean / size);
        return mix_rows(Sigma, n, [&] { return (static_cast<double>(nb(rng)) - dist.nb_mean) / sd; });
    }
    case Family::uniform: {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double sd = std::sqrt(1.0 / 12.0);
        return mix_rows(Sigma, n, [&] { return (unif(rng) - 0.5) / sd; });
    }
    case Family::gaussian:
        break;
    }
    throw InvalidInput("sample_nongaussian: gaussian family requested; use sample_gaussian");
}

DataMatrix sample(const SymmetricMatrix& Sigma, std::size_t n, const DistributionSpec& dist, std::uint64_t seed) {
    if (dist.family == Family::gaussian) return sample_gaussian(Sigma, n, seed);
    return sample_nongaussian(Sigma, n, dist, seed);
}

} // namespace jkcov
