#include "softmapper/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "json.hpp"

namespace softmapper {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;  // log(2*pi)

double log_normal_pdf(double y, double mean, double std_dev) {
    double z = (y - mean) / std_dev;
    return -0.5 * z * z - std::log(std_dev) - 0.5 * kLogTwoPi;
}

double log_sum_exp(const double* v, std::size_t k) {
    double m = v[0];
    for (std::size_t j = 1; j < k; ++j) m = std::max(m, v[j]);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += std::exp(v[j] - m);
    return m + std::log(s);
}

void weighted_log_kernels(double y, const GmmParams& theta, double* out) {
    for (std::size_t j = 0; j < theta.k(); ++j) {
        out[j] = std::log(theta.weights[j]) + log_normal_pdf(y, theta.means[j], theta.stds[j]);
    }
}

}  // namespace

void GmmParams::validate() const {
    if (k() < 1) throw std::invalid_argument("mixture needs K >= 1");
    if (means.size() != k() || stds.size() != k())
        throw std::invalid_argument("mixture parameter vectors have mismatched lengths");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("mixture weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("mixture weights must sum to 1");
    for (double m : means) {
        if (!std::isfinite(m)) throw std::invalid_argument("mixture means must be finite");
    }
    for (double s : stds) {
        if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("mixture stds must be positive");
    }
}

std::string GmmParams::to_json() const {
    nlohmann::json j;
    j["weights"] = weights;
    j["means"] = means;
    j["stds"] = stds;
    return j.dump(2) + "\n";
}

GmmParams GmmParams::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    GmmParams p;
    p.weights = j.at("weights").get<std::vector<double>>();
    p.means = j.at("means").get<std::vector<double>>();
    p.stds = j.at("stds").get<std::vector<double>>();
    p.validate();
    return p;
}

void ProbabilityMatrix::validate() const {
    if (data.size() != n * k) throw std::invalid_argument("probability matrix buffer size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            double q = at(i, j);
            if (!(q >= 0.0) || q > 1.0 + 1e-12)
                throw std::invalid_argument("probability matrix row " + std::to_string(i) + " has entry outside [0,1]");
            sum += q;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("probability matrix row " + std::to_string(i) + " does not sum to 1");
    }
}

double component_density(double y, double mean, double std_dev) {
    if (!(std_dev > 0.0)) throw std::invalid_argument("component std must be positive");
    return std::exp(log_normal_pdf(y, mean, std_dev));
}

double point_log_density(double y, const GmmParams& theta) {
    std::vector<double> terms(theta.k());
    weighted_log_kernels(y, theta, terms.data());
    return log_sum_exp(terms.data(), theta.k());
}

std::vector<double> point_log_densities(const FilterValues& y, const GmmParams& theta) {
    std::vector<double> out(y.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[i] = point_log_density(y[i], theta);
    }
    return out;
}

double log_likelihood(const FilterValues& y, const GmmParams& theta) {
    theta.validate();
    std::vector<double> lp = point_log_densities(y, theta);
    double s = 0.0;
    for (double v : lp) s += v;  // fixed order, independent of thread count
    return s;
}

namespace {

void responsibilities_row(double y, const GmmParams& theta, double* out) {
    const std::size_t k = theta.k();
    weighted_log_kernels(y, theta, out);
    double lse = log_sum_exp(out, k);
    for (std::size_t j = 0; j < k; ++j) out[j] = std::exp(out[j] - lse);
}

}  // namespace

ProbabilityMatrix responsibilities(const FilterValues& y, const GmmParams& theta) {
    theta.validate();
    ProbabilityMatrix q;
    q.n = y.size();
    q.k = theta.k();
    q.data.resize(q.n * q.k);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(q.n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        responsibilities_row(y[i], theta, q.data.data() + i * q.k);
    }
    return q;
}

namespace ref {

ProbabilityMatrix responsibilities(const FilterValues& y, const GmmParams& theta) {
    theta.validate();
    ProbabilityMatrix q;
    q.n = y.size();
    q.k = theta.k();
    q.data.resize(q.n * q.k);
    for (std::size_t i = 0; i < q.n; ++i) {
        responsibilities_row(y[i], theta, q.data.data() + i * q.k);
    }
    return q;
}

}  // namespace ref

double sigma_floor(const FilterValues& y) {
    auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    double range = *hi - *lo;
    double floor = 1e-4 * range;
    return floor > 0.0 ? floor : 1e-12;  // constant data would otherwise give 0
}

EmFitResult em_fit(const FilterValues& y, std::size_t k, std::uint64_t seed,
                   std::size_t max_iter, double tol) {
    (void)seed;  // initialization is quantile-based, so the seed is inert
    const std::size_t n = y.size();
    if (k < 1) throw std::invalid_argument("em_fit needs K >= 1");
    if (n < k) throw std::invalid_argument("em_fit needs n >= K");

    const double s_floor = sigma_floor(y);

    std::vector<double> sorted(y);
    std::sort(sorted.begin(), sorted.end());

    double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    double sd = std::max(std::sqrt(var), s_floor);

    GmmParams theta;
    theta.weights.assign(k, 1.0 / static_cast<double>(k));
    theta.stds.assign(k, sd);
    theta.means.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        // quantile at level (j + 0.5) / k, linear interpolation
        double pos = (static_cast<double>(j) + 0.5) / static_cast<double>(k) * static_cast<double>(n - 1);
        std::size_t lo = static_cast<std::size_t>(pos);
        double frac = pos - static_cast<double>(lo);
        double v = sorted[lo];
        if (lo + 1 < n) v += frac * (sorted[lo + 1] - sorted[lo]);
        theta.means[j] = v;
    }

    EmFitResult result;
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        ProbabilityMatrix q = responsibilities(y, theta);
        double ll = log_likelihood(y, theta);
        result.log_likelihoods.push_back(ll);
        if (ll - prev_ll < tol && iter > 0) break;
        prev_ll = ll;

        for (std::size_t j = 0; j < k; ++j) {
            double nj = 0.0, mj = 0.0;
            for (std::size_t i = 0; i < n; ++i) nj += q.at(i, j);
            if (nj <= 0.0) nj = 1e-12;  // component starved by underflow
            for (std::size_t i = 0; i < n; ++i) mj += q.at(i, j) * y[i];
            mj /= nj;
            double vj = 0.0;
            for (std::size_t i = 0; i < n; ++i) vj += q.at(i, j) * (y[i] - mj) * (y[i] - mj);
            vj /= nj;
            theta.weights[j] = nj / static_cast<double>(n);
            theta.means[j] = mj;
            theta.stds[j] = std::max(std::sqrt(vj), s_floor);
        }
        double wsum = std::accumulate(theta.weights.begin(), theta.weights.end(), 0.0);
        for (double& w : theta.weights) w = std::max(w / wsum, 1e-15);
        wsum = std::accumulate(theta.weights.begin(), theta.weights.end(), 0.0);
        for (double& w : theta.weights) w /= wsum;
    }
    theta.validate();
    result.params = std::move(theta);
    return result;
}

FreeParams to_free(const GmmParams& theta) {
    theta.validate();
    FreeParams phi;
    phi.xi.resize(theta.k());
    phi.mu = theta.means;
    phi.log_sigma.resize(theta.k());
    for (std::size_t j = 0; j < theta.k(); ++j) {
        phi.xi[j] = std::log(theta.weights[j]);
        phi.log_sigma[j] = std::log(theta.stds[j]);
    }
    return phi;
}

GmmParams from_free(const FreeParams& phi) {
    const std::size_t k = phi.k();
    if (k < 1 || phi.mu.size() != k || phi.log_sigma.size() != k)
        throw std::invalid_argument("free parameter vectors have mismatched lengths");
    GmmParams theta;
    theta.means = phi.mu;
    theta.weights.resize(k);
    theta.stds.resize(k);
    double m = *std::max_element(phi.xi.begin(), phi.xi.end());
    double z = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        theta.weights[j] = std::exp(phi.xi[j] - m);
        z += theta.weights[j];
    }
    for (std::size_t j = 0; j < k; ++j) theta.weights[j] /= z;
    for (std::size_t j = 0; j < k; ++j) theta.stds[j] = std::exp(phi.log_sigma[j]);
    return theta;
}

}  // namespace softmapper
