#include "softmapper/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace softmapper {

void LossConfig::validate() const {
    if (lambda1 < 0.0 || lambda2 < 0.0) throw std::invalid_argument("loss weights must be nonnegative");
    if (lambda1 == 0.0 && lambda2 == 0.0) throw std::invalid_argument("loss weights cannot both be zero");
}

void TrainConfig::validate() const {
    if (!(learning_rate >= 0.0)) throw std::invalid_argument("learning rate must be nonnegative");
    if (steps < 1) throw std::invalid_argument("training needs at least one step");
}

PipelineState build_pipeline(const PointCloud& pc, const FilterValues& y,
                             const GmmParams& theta, const ClusteringConfig& cfg) {
    PipelineState state;
    ProbabilityMatrix q = responsibilities(y, theta);
    state.h = mode_assignment(q);
    state.graph = mapper_function(pc, state.h, cfg);
    state.filtration = node_filtration_loglik(state.graph, y, theta);
    state.diagram = extended_persistence(state.filtration);
    return state;
}

bool same_structure(const PipelineState& a, const PipelineState& b) {
    if (!(a.h == b.h)) return false;
    if (a.graph.nodes.size() != b.graph.nodes.size() || a.graph.edges != b.graph.edges) return false;
    for (std::size_t i = 0; i < a.graph.nodes.size(); ++i) {
        if (a.graph.nodes[i].group != b.graph.nodes[i].group) return false;
        if (a.graph.nodes[i].members != b.graph.nodes[i].members) return false;
    }
    if (a.diagram.size() != b.diagram.size()) return false;
    for (std::size_t i = 0; i < a.diagram.size(); ++i) {
        const auto& pa = a.diagram.points[i];
        const auto& pb = b.diagram.points[i];
        if (pa.cls != pb.cls || pa.birth_vertex != pb.birth_vertex || pa.death_vertex != pb.death_vertex)
            return false;
    }
    return true;
}

namespace {

// node means of a per-point quantity, following the frozen memberships
std::vector<double> node_means(const MapperGraph& g, const std::vector<double>& per_point) {
    std::vector<double> out(g.nodes.size());
    for (std::size_t c = 0; c < g.nodes.size(); ++c) {
        double s = 0.0;
        for (std::size_t i : g.nodes[c].members) s += per_point[i];
        out[c] = s / static_cast<double>(g.nodes[c].members.size());
    }
    return out;
}

LossBreakdown assemble(double mean_ll, double mean_pers, const LossConfig& loss) {
    LossBreakdown b;
    b.nll_term = -loss.lambda1 * mean_ll;
    b.topo_term = -loss.lambda2 * mean_pers;
    b.total = b.nll_term + b.topo_term;
    return b;
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

LossBreakdown total_loss(const GmmParams& theta, const PointCloud& pc, const FilterValues& y,
                         const ClusteringConfig& cfg, const LossConfig& loss,
                         PipelineState* state_out) {
    loss.validate();
    theta.validate();
    if (y.size() != pc.n) throw std::invalid_argument("filter length does not match point count");
    PipelineState state = build_pipeline(pc, y, theta, cfg);
    double mean_ll = log_likelihood(y, theta) / static_cast<double>(y.size());
    double mean_pers = mean_persistence(state.diagram);
    if (state_out) *state_out = std::move(state);
    return assemble(mean_ll, mean_pers, loss);
}

LossBreakdown frozen_loss(const FreeParams& phi, const PipelineState& state,
                          const FilterValues& y, const LossConfig& loss) {
    GmmParams theta = from_free(phi);
    std::vector<double> lp = point_log_densities(y, theta);
    double mean_ll = 0.0;
    for (double v : lp) mean_ll += v;
    mean_ll /= static_cast<double>(y.size());

    double mean_pers = 0.0;
    std::vector<double> node_values = node_means(state.graph, lp);
    for (const auto& p : state.diagram.points) {
        mean_pers += std::abs(node_values[static_cast<std::size_t>(p.death_vertex)] -
                              node_values[static_cast<std::size_t>(p.birth_vertex)]);
    }
    if (!state.diagram.points.empty()) mean_pers /= static_cast<double>(state.diagram.size());
    return assemble(mean_ll, mean_pers, loss);
}

FreeGradient frozen_gradient_analytic(const FreeParams& phi, const PipelineState& state,
                                      const FilterValues& y, const LossConfig& loss) {
    const std::size_t k = phi.k();
    const std::size_t n = y.size();
    GmmParams theta = from_free(phi);
    ProbabilityMatrix q = responsibilities(y, theta);

    // d log p(y_i) / d(free param), one row of 3K per point
    std::vector<double> g_xi(n * k), g_mu(n * k), g_ls(n * k);
    const std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < nn; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            double qij = q.at(static_cast<std::size_t>(i), j);
            double z = (y[static_cast<std::size_t>(i)] - theta.means[j]) / theta.stds[j];
            g_xi[i * static_cast<std::ptrdiff_t>(k) + static_cast<std::ptrdiff_t>(j)] =
                qij - theta.weights[j];
            g_mu[i * static_cast<std::ptrdiff_t>(k) + static_cast<std::ptrdiff_t>(j)] =
                qij * z / theta.stds[j];
            g_ls[i * static_cast<std::ptrdiff_t>(k) + static_cast<std::ptrdiff_t>(j)] =
                qij * (z * z - 1.0);
        }
    }

    FreeGradient grad;
    grad.xi.assign(k, 0.0);
    grad.mu.assign(k, 0.0);
    grad.log_sigma.assign(k, 0.0);

    // likelihood term: -lambda1 / n * sum_i d log p(y_i); fixed summation order
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            grad.xi[j] += g_xi[i * k + j];
            grad.mu[j] += g_mu[i * k + j];
            grad.log_sigma[j] += g_ls[i * k + j];
        }
    }
    double c1 = -loss.lambda1 / static_cast<double>(n);
    for (std::size_t j = 0; j < k; ++j) {
        grad.xi[j] *= c1;
        grad.mu[j] *= c1;
        grad.log_sigma[j] *= c1;
    }

    if (loss.lambda2 > 0.0 && !state.diagram.points.empty()) {
        // node-averaged gradients, then the signed witness differences
        const std::size_t v = state.graph.nodes.size();
        std::vector<double> n_xi(v * k, 0.0), n_mu(v * k, 0.0), n_ls(v * k, 0.0);
        for (std::size_t c = 0; c < v; ++c) {
            const auto& members = state.graph.nodes[c].members;
            for (std::size_t i : members) {
                for (std::size_t j = 0; j < k; ++j) {
                    n_xi[c * k + j] += g_xi[i * k + j];
                    n_mu[c * k + j] += g_mu[i * k + j];
                    n_ls[c * k + j] += g_ls[i * k + j];
                }
            }
            double inv = 1.0 / static_cast<double>(members.size());
            for (std::size_t j = 0; j < k; ++j) {
                n_xi[c * k + j] *= inv;
                n_mu[c * k + j] *= inv;
                n_ls[c * k + j] *= inv;
            }
        }

        std::vector<double> lp = point_log_densities(y, theta);
        std::vector<double> node_values = node_means(state.graph, lp);
        double c2 = -loss.lambda2 / static_cast<double>(state.diagram.size());
        for (const auto& p : state.diagram.points) {
            std::size_t bc = static_cast<std::size_t>(p.birth_vertex);
            std::size_t dc = static_cast<std::size_t>(p.death_vertex);
            double s = sign_of(node_values[dc] - node_values[bc]);
            if (s == 0.0) continue;
            for (std::size_t j = 0; j < k; ++j) {
                grad.xi[j] += c2 * s * (n_xi[dc * k + j] - n_xi[bc * k + j]);
                grad.mu[j] += c2 * s * (n_mu[dc * k + j] - n_mu[bc * k + j]);
                grad.log_sigma[j] += c2 * s * (n_ls[dc * k + j] - n_ls[bc * k + j]);
            }
        }
    }
    return grad;
}

FreeGradient frozen_gradient_fd(const FreeParams& phi, const PipelineState& state,
                                const FilterValues& y, const LossConfig& loss) {
    const std::size_t k = phi.k();
    FreeGradient grad;
    grad.xi.assign(k, 0.0);
    grad.mu.assign(k, 0.0);
    grad.log_sigma.assign(k, 0.0);

    auto central = [&](std::vector<double> FreeParams::* block, std::size_t j) {
        FreeParams plus = phi;
        FreeParams minus = phi;
        double v = (phi.*block)[j];
        double h = 1e-5 * (1.0 + std::abs(v));
        (plus.*block)[j] = v + h;
        (minus.*block)[j] = v - h;
        double lp = frozen_loss(plus, state, y, loss).total;
        double lm = frozen_loss(minus, state, y, loss).total;
        return (lp - lm) / (2.0 * h);
    };
    for (std::size_t j = 0; j < k; ++j) {
        grad.xi[j] = central(&FreeParams::xi, j);
        grad.mu[j] = central(&FreeParams::mu, j);
        grad.log_sigma[j] = central(&FreeParams::log_sigma, j);
    }
    return grad;
}

FreeGradient loss_gradient(const GmmParams& theta, const PointCloud& pc, const FilterValues& y,
                           const ClusteringConfig& cfg, const LossConfig& loss, GradientMode mode) {
    loss.validate();
    PipelineState state = build_pipeline(pc, y, theta, cfg);
    FreeParams phi = to_free(theta);
    return mode == GradientMode::analytic ? frozen_gradient_analytic(phi, state, y, loss)
                                          : frozen_gradient_fd(phi, state, y, loss);
}

SgdResult sgd_fit(const PointCloud& pc, const FilterValues& y, const GmmParams& init,
                  const TrainConfig& train, const LossConfig& loss, const ClusteringConfig& cfg,
                  const std::function<void(std::size_t, const GmmParams&)>& checkpoint) {
    train.validate();
    loss.validate();
    init.validate();
    if (y.size() != pc.n) throw std::invalid_argument("filter length does not match point count");

    const double log_sigma_min = std::log(sigma_floor(y));
    FreeParams phi = to_free(init);

    auto gradient = [&](const FreeParams& at, const PipelineState& state) {
        return train.gradient_mode == GradientMode::analytic
                   ? frozen_gradient_analytic(at, state, y, loss)
                   : frozen_gradient_fd(at, state, y, loss);
    };

    SgdResult result;
    for (std::size_t t = 1; t <= train.steps; ++t) {
        GmmParams theta = from_free(phi);
        PipelineState state = build_pipeline(pc, y, theta, cfg);
        LossBreakdown at_start = frozen_loss(phi, state, y, loss);
        if (!std::isfinite(at_start.total) || std::abs(at_start.total) > 1e8) {
            throw std::runtime_error("training diverged at step " + std::to_string(t) +
                                     " (loss " + std::to_string(at_start.total) + ")");
        }
        result.trace.push_back({t, at_start.total, at_start.nll_term, at_start.topo_term});

        FreeGradient g = gradient(phi, state);
        for (std::size_t j = 0; j < phi.k(); ++j) phi.xi[j] -= train.learning_rate * g.xi[j];
        g = gradient(phi, state);
        for (std::size_t j = 0; j < phi.k(); ++j) phi.mu[j] -= train.learning_rate * g.mu[j];
        g = gradient(phi, state);
        for (std::size_t j = 0; j < phi.k(); ++j)
            phi.log_sigma[j] = std::max(phi.log_sigma[j] - train.learning_rate * g.log_sigma[j],
                                        log_sigma_min);

        if (checkpoint && train.checkpoint_every > 0 && t % train.checkpoint_every == 0) {
            checkpoint(t, from_free(phi));
        }
    }
    result.params = from_free(phi);
    result.params.validate();
    return result;
}

void save_trace_csv(const std::vector<TraceRecord>& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "step,total_loss,nll_term,topo_term\n";
    char buf[160];
    for (const auto& r : trace) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g", r.step, r.total_loss, r.nll_term,
                      r.topo_term);
        out << buf << '\n';
    }
}

}  // namespace softmapper
