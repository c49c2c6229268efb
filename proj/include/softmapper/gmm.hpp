#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "softmapper/types.hpp"

namespace softmapper {

// 1-D Gaussian mixture in its constrained form: weights on the simplex,
// positive standard deviations.
struct GmmParams {
    std::vector<double> weights;
    std::vector<double> means;
    std::vector<double> stds;

    std::size_t k() const { return weights.size(); }
    void validate() const;

    std::string to_json() const;
    static GmmParams from_json(const std::string& text);
};

// Unconstrained reparameterization: xi are weight logits (softmax), and
// log_sigma holds log std-devs. Any finite values map back to a valid mixture.
struct FreeParams {
    std::vector<double> xi;
    std::vector<double> mu;
    std::vector<double> log_sigma;

    std::size_t k() const { return xi.size(); }
};

struct ProbabilityMatrix {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<double> data;  // n * k, row-major

    double at(std::size_t i, std::size_t j) const { return data[i * k + j]; }
    double& at(std::size_t i, std::size_t j) { return data[i * k + j]; }
    const double* row(std::size_t i) const { return data.data() + i * k; }
    void validate() const;
};

double component_density(double y, double mean, double std_dev);

// log of one mixture density, overflow-safe
double point_log_density(double y, const GmmParams& theta);
std::vector<double> point_log_densities(const FilterValues& y, const GmmParams& theta);

double log_likelihood(const FilterValues& y, const GmmParams& theta);

// Posterior class probabilities, normalized in log space; rows sum to 1.
ProbabilityMatrix responsibilities(const FilterValues& y, const GmmParams& theta);

namespace ref {
ProbabilityMatrix responsibilities(const FilterValues& y, const GmmParams& theta);
}

struct EmFitResult {
    GmmParams params;
    std::vector<double> log_likelihoods;  // one entry per iteration
};

// Deterministic EM: means initialized at K evenly spaced quantiles, equal
// weights, common std. sigma is floored at sigma_floor(y) throughout.
EmFitResult em_fit(const FilterValues& y, std::size_t k, std::uint64_t seed,
                   std::size_t max_iter = 200, double tol = 1e-6);

// 1e-4 of the data range; keeps variances from collapsing during EM and SGD.
double sigma_floor(const FilterValues& y);

FreeParams to_free(const GmmParams& theta);
GmmParams from_free(const FreeParams& phi);

}  // namespace softmapper
