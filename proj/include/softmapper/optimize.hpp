#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "softmapper/assignment.hpp"
#include "softmapper/clustering.hpp"
#include "softmapper/gmm.hpp"
#include "softmapper/mapper.hpp"
#include "softmapper/persistence.hpp"
#include "softmapper/types.hpp"

namespace softmapper {

struct LossConfig {
    double lambda1 = 1.0;
    double lambda2 = 1.0;

    void validate() const;
};

enum class GradientMode { analytic, finite_difference };

struct TrainConfig {
    double learning_rate = 0.0;
    std::size_t steps = 0;
    std::uint64_t seed = 0;
    GradientMode gradient_mode = GradientMode::analytic;
    std::size_t checkpoint_every = 0;  // 0 disables

    void validate() const;
};

struct TraceRecord {
    std::size_t step = 0;  // 1-based
    double total_loss = 0.0;
    double nll_term = 0.0;   // -lambda1 * mean log-likelihood
    double topo_term = 0.0;  // -lambda2 * mean persistence
};

// Everything downstream of theta that is held fixed while differentiating:
// the mode assignment, the clustered graph, and the diagram with its
// coordinate-witness nodes. All of these are piecewise constant in theta.
struct PipelineState {
    AssignmentMatrix h;
    MapperGraph graph;
    FiltrationGraph filtration;
    PersistenceDiagram diagram;
};

PipelineState build_pipeline(const PointCloud& pc, const FilterValues& y,
                             const GmmParams& theta, const ClusteringConfig& cfg);

bool same_structure(const PipelineState& a, const PipelineState& b);

struct LossBreakdown {
    double total = 0.0;
    double nll_term = 0.0;
    double topo_term = 0.0;
};

// Full pipeline loss at theta:
//   -lambda1 * logL/n  -  lambda2 * mean_persistence(D(theta)).
// Optionally hands back the structure it built.
LossBreakdown total_loss(const GmmParams& theta, const PointCloud& pc, const FilterValues& y,
                         const ClusteringConfig& cfg, const LossConfig& loss,
                         PipelineState* state_out = nullptr);

// Loss at phi with the given structure frozen; smooth in phi because every
// diagram coordinate is the log-likelihood average of a fixed node.
LossBreakdown frozen_loss(const FreeParams& phi, const PipelineState& state,
                          const FilterValues& y, const LossConfig& loss);

struct FreeGradient {
    std::vector<double> xi;
    std::vector<double> mu;
    std::vector<double> log_sigma;
};

FreeGradient frozen_gradient_analytic(const FreeParams& phi, const PipelineState& state,
                                      const FilterValues& y, const LossConfig& loss);

// Central differences with h = 1e-5 * (1 + |param|) over the same frozen
// structure; the oracle for the analytic route.
FreeGradient frozen_gradient_fd(const FreeParams& phi, const PipelineState& state,
                                const FilterValues& y, const LossConfig& loss);

// Builds the structure at theta and differentiates in the free parameters.
FreeGradient loss_gradient(const GmmParams& theta, const PointCloud& pc, const FilterValues& y,
                           const ClusteringConfig& cfg, const LossConfig& loss,
                           GradientMode mode = GradientMode::analytic);

struct SgdResult {
    GmmParams params;
    std::vector<TraceRecord> trace;
};

// Per step: rebuild the pipeline at the current parameters, record the loss,
// then update xi, then mu with the fresh xi, then log-sigma with the fresh xi
// and mu, each over the structure frozen at the step start. Std-devs are
// floored at sigma_floor(y) after every step. Aborts on non-finite loss or
// |loss| > 1e8.
SgdResult sgd_fit(const PointCloud& pc, const FilterValues& y, const GmmParams& init,
                  const TrainConfig& train, const LossConfig& loss, const ClusteringConfig& cfg,
                  const std::function<void(std::size_t, const GmmParams&)>& checkpoint = {});

void save_trace_csv(const std::vector<TraceRecord>& trace, const std::string& path);

}  // namespace softmapper
