#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "softmapper/mapper.hpp"
#include "softmapper/types.hpp"

namespace softmapper {

// Silhouette coefficient over (point, node) memberships: each membership is
// one sample labeled by its node, so points shared by two nodes contribute
// two samples. Samples in singleton nodes score 0.
double silhouette(const PointCloud& pc, const MapperGraph& g);

namespace ref {
double silhouette(const PointCloud& pc, const MapperGraph& g);
}

// Known Betti numbers of a dataset; at least one must be given.
struct GroundTruthTopology {
    std::optional<std::size_t> components;
    std::optional<std::size_t> loops;

    void validate() const;
};

// min(detected, true)/max(detected, true) per specified dimension, averaged;
// 0/0 counts as perfect agreement.
double tsr(const MapperGraph& g, const GroundTruthTopology& truth);

double sc_adj(double sc_norm, double tsr_value);

struct MetricReport {
    double sc = 0.0;
    double sc_norm = 0.0;
    std::optional<double> tsr;
    std::optional<double> sc_adj;

    std::string to_json() const;
};

MetricReport metric_report(const PointCloud& pc, const MapperGraph& g,
                           const std::optional<GroundTruthTopology>& truth);

// Pearson chi-square on the 2xC table (rows = the two histograms); columns
// empty in both rows are dropped, df = remaining columns - 1. p comes from
// the upper regularized incomplete gamma.
std::pair<double, double> chi_square_test(const std::vector<std::size_t>& counts_a,
                                          const std::vector<std::size_t>& counts_b);

// upper-tail probability of a chi-square variable with df degrees of freedom
double chi_square_upper_tail(double statistic, double df);

}  // namespace softmapper
