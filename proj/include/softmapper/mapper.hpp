#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "softmapper/assignment.hpp"
#include "softmapper/clustering.hpp"
#include "softmapper/types.hpp"

namespace softmapper {

struct MapperNode {
    std::size_t group = 0;              // interval / implicit-interval index
    std::vector<std::size_t> members;   // point ids, sorted, nonempty
};

// Nerve of the clustered pullback: an edge joins two nodes iff their member
// sets share at least one point id. No self-edges.
struct MapperGraph {
    std::vector<MapperNode> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // u < v, sorted

    void validate() const;

    std::string to_json() const;
    static MapperGraph from_json(const std::string& text);

    // Node attribute `size` = member count; with labels, `label_hist` too.
    std::string to_dot(const std::vector<int>* labels = nullptr) const;
};

// Cluster each group's pullback {x_i : H_ij >= 1}, then build the nerve.
MapperGraph mapper_function(const PointCloud& pc, const AssignmentMatrix& h,
                            const ClusteringConfig& cfg);

// K equal-length intervals over [a,b] with overlap fraction p: the length L
// solves K*L - (K-1)*p*L = b - a, and adjacent intervals overlap by exactly
// p*L. Intervals are closed, so boundary points join every interval that
// contains them.
struct StandardCoverSpec {
    std::size_t k = 1;
    double p = 0.0;      // in [0,1)
    double a = 0.0;
    double b = 0.0;
    bool auto_range = true;  // take [a,b] = [min f, max f]

    void validate() const;
};

std::vector<std::pair<double, double>> cover_intervals(const StandardCoverSpec& spec);

MapperGraph standard_mapper(const PointCloud& pc, const FilterValues& f,
                            StandardCoverSpec spec, const ClusteringConfig& cfg);

struct GraphStats {
    double average_degree = 0.0;
    std::size_t connected_components = 0;
    std::size_t loops = 0;  // first Betti number |E| - |V| + C
};

GraphStats graph_stats(const MapperGraph& g);

struct SummaryStats {
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double median = 0.0;
    double mode = 0.0;
};

// mean, normal-approximation 95% CI, median (midpoint for even counts), and
// mode after rounding to 2 decimals (ties -> smallest value).
SummaryStats summarize(const std::vector<double>& values);

struct SampleStatistics {
    SummaryStats average_degree;
    SummaryStats connected_components;
    SummaryStats loops;
    std::size_t samples = 0;

    std::string to_json() const;
};

SampleStatistics sample_statistics(const std::vector<GraphStats>& stats);

// Per-group [min,max] of the filter over assigned points; empty groups absent.
std::vector<std::optional<std::pair<double, double>>> implicit_intervals(
    const FilterValues& f, const AssignmentMatrix& h);

}  // namespace softmapper
