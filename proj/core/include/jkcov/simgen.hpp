#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "jkcov/matrix.hpp"

namespace jkcov {

enum class ModelName { sparse, hypercorrelated, dense_07, dense_09, orthogonal, spiked };

/// Parses "sparse", "hypercorrelated", "dense_07", "dense_09", "orthogonal",
/// "spiked". Throws InvalidInput otherwise.
ModelName parse_model_name(std::string_view name);
std::string to_string(ModelName name);
const std::vector<ModelName>& all_models();

struct ModelSpec {
    ModelName name = ModelName::sparse;
    std::size_t p = 30;
    /// Used by the randomized models (sparse, orthogonal, spiked).
    std::uint64_t seed = 0;

    /// sparse: each off-diagonal pair is nonzero with this probability, with
    /// value +/- sparse_value; projected with floor sparse_floor if needed.
    double sparse_probability = 0.1;
    double sparse_value = 0.3;
    double sparse_floor = 0.05;
    /// hypercorrelated: equicorrelation level.
    double hyper_rho = 0.95;
    /// orthogonal: eigenvalues linearly spaced in [min, max].
    double orthogonal_min = 0.5;
    double orthogonal_max = 5.0;
    /// spiked: I + sum_r strength_r v_r v_r^T.
    std::vector<double> spike_strengths{10.0, 5.0, 2.0};
};

/// Population covariance for the named model. Verifies positive definiteness.
SymmetricMatrix make_model(const ModelSpec& spec);

/// Unit diagonal, constant off-diagonal rho.
SymmetricMatrix equicorrelation(std::size_t p, double rho);

/// p x p orthogonal matrix from the QR factorization of a seeded Gaussian
/// matrix, columns signed so that R has a positive diagonal.
Matrix random_orthogonal(std::size_t p, std::uint64_t seed);

enum class Family { gaussian, negative_binomial, uniform };

Family parse_family(std::string_view name);
std::string to_string(Family family);

struct DistributionSpec {
    Family family = Family::gaussian;
    /// Negative binomial size and mean (variance = mean + mean^2/size).
    double nb_size = 10.0;
    double nb_mean = 4.0;
};

/// Rows iid N(0, Sigma), generated as L y with L = cholesky(Sigma).
DataMatrix sample_gaussian(const SymmetricMatrix& Sigma, std::size_t n, std::uint64_t seed);

/// Rows L y where y has iid entries from the family, standardized with the
/// family's exact mean and variance so Cov(row) = Sigma.
DataMatrix sample_nongaussian(const SymmetricMatrix& Sigma, std::size_t n, const DistributionSpec& dist,
                              std::uint64_t seed);

/// Dispatches on dist.family.
DataMatrix sample(const SymmetricMatrix& Sigma, std::size_t n, const DistributionSpec& dist, std::uint64_t seed);

} // namespace jkcov
