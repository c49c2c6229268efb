#pragma once

#include <string>
#include <vector>

#include "softmapper/types.hpp"

namespace softmapper {

enum class ClusterMethod { dbscan, agglomerative };
enum class Linkage { single, complete, average };
enum class NoisePolicy { singleton, drop };

struct ClusteringConfig {
    ClusterMethod method = ClusterMethod::dbscan;
    double eps = 0.0;           // dbscan
    std::size_t min_pts = 0;    // dbscan
    double threshold = 0.0;     // agglomerative
    Linkage linkage = Linkage::average;
    NoisePolicy noise_policy = NoisePolicy::singleton;

    void validate() const;
};

struct DbscanResult {
    std::vector<std::vector<std::size_t>> clusters;  // original point ids
    std::vector<std::size_t> noise;
};

// Classic density clustering over the listed points of pc. A point is core
// iff its closed eps-ball holds >= min_pts points counting itself. Returned
// ids index into pc.
DbscanResult dbscan(const PointCloud& pc, const std::vector<std::size_t>& ids,
                    double eps, std::size_t min_pts);

// Hierarchical merging under the chosen linkage until no two clusters are
// closer than threshold.
std::vector<std::vector<std::size_t>> agglomerative(const PointCloud& pc,
                                                    const std::vector<std::size_t>& ids,
                                                    double threshold, Linkage linkage);

// Dispatch on cfg.method and apply the noise policy (dbscan only): singleton
// keeps each noise point as its own cluster, drop discards it.
std::vector<std::vector<std::size_t>> cluster_subset(const PointCloud& pc,
                                                     const std::vector<std::size_t>& ids,
                                                     const ClusteringConfig& cfg);

Linkage linkage_from_string(const std::string& s);
NoisePolicy noise_policy_from_string(const std::string& s);

}  // namespace softmapper
