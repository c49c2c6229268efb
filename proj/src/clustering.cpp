#include "softmapper/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace softmapper {

void ClusteringConfig::validate() const {
    if (method == ClusterMethod::dbscan) {
        if (!(eps > 0.0)) throw std::invalid_argument("dbscan eps must be positive");
        if (min_pts < 1) throw std::invalid_argument("dbscan min_pts must be >= 1");
    } else {
        if (!(threshold > 0.0)) throw std::invalid_argument("agglomerative threshold must be positive");
    }
}

namespace {

// Closed-ball neighbor lists, one slot per point; rows are independent.
std::vector<std::vector<std::size_t>> neighbor_lists(const PointCloud& pc,
                                                     const std::vector<std::size_t>& ids,
                                                     double eps) {
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(ids.size());
    std::vector<std::vector<std::size_t>> nbrs(ids.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < m; ++i) {
        const double* pi = pc.point(ids[i]);
        for (std::ptrdiff_t j = 0; j < m; ++j) {
            if (euclidean_distance(pi, pc.point(ids[j]), pc.d) <= eps) {
                nbrs[i].push_back(static_cast<std::size_t>(j));
            }
        }
    }
    return nbrs;
}

}  // namespace

DbscanResult dbscan(const PointCloud& pc, const std::vector<std::size_t>& ids,
                    double eps, std::size_t min_pts) {
    if (!(eps > 0.0)) throw std::invalid_argument("dbscan eps must be positive");
    if (min_pts < 1) throw std::invalid_argument("dbscan min_pts must be >= 1");

    DbscanResult result;
    const std::size_t m = ids.size();
    if (m == 0) return result;

    auto nbrs = neighbor_lists(pc, ids, eps);

    constexpr int kUnvisited = -2;
    constexpr int kNoise = -1;
    std::vector<int> label(m, kUnvisited);

    int next_cluster = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (label[i] != kUnvisited) continue;
        if (nbrs[i].size() < min_pts) {
            label[i] = kNoise;
            continue;
        }
        int cid = next_cluster++;
        label[i] = cid;
        std::queue<std::size_t> frontier;
        frontier.push(i);
        while (!frontier.empty()) {
            std::size_t p = frontier.front();
            frontier.pop();
            if (nbrs[p].size() < min_pts) continue;  // border point, do not expand
            for (std::size_t q : nbrs[p]) {
                if (label[q] == kNoise) label[q] = cid;
                if (label[q] != kUnvisited) continue;
                label[q] = cid;
                frontier.push(q);
            }
        }
    }

    result.clusters.resize(static_cast<std::size_t>(next_cluster));
    for (std::size_t i = 0; i < m; ++i) {
        if (label[i] == kNoise) {
            result.noise.push_back(ids[i]);
        } else {
            result.clusters[static_cast<std::size_t>(label[i])].push_back(ids[i]);
        }
    }
    return result;
}

std::vector<std::vector<std::size_t>> agglomerative(const PointCloud& pc,
                                                    const std::vector<std::size_t>& ids,
                                                    double threshold, Linkage linkage) {
    if (!(threshold > 0.0)) throw std::invalid_argument("agglomerative threshold must be positive");
    const std::size_t m = ids.size();
    std::vector<std::vector<std::size_t>> clusters;
    if (m == 0) return clusters;

    // Lance-Williams updates on a dense distance matrix; fine at the sizes
    // this pipeline sees (hundreds to a few thousand points).
    std::vector<double> dist(m * m, 0.0);
    const std::ptrdiff_t mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < mm; ++i) {
        for (std::ptrdiff_t j = 0; j < mm; ++j) {
            dist[i * mm + j] = euclidean_distance(pc.point(ids[i]), pc.point(ids[j]), pc.d);
        }
    }

    std::vector<bool> alive(m, true);
    std::vector<std::size_t> size(m, 1);
    std::vector<std::vector<std::size_t>> members(m);
    for (std::size_t i = 0; i < m; ++i) members[i] = {ids[i]};

    while (true) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (!alive[i]) continue;
            for (std::size_t j = i + 1; j < m; ++j) {
                if (!alive[j]) continue;
                if (dist[i * m + j] < best) {
                    best = dist[i * m + j];
                    bi = i;
                    bj = j;
                }
            }
        }
        if (!(best < threshold)) break;

        for (std::size_t t = 0; t < m; ++t) {
            if (!alive[t] || t == bi || t == bj) continue;
            double dit = dist[bi * m + t];
            double djt = dist[bj * m + t];
            double merged;
            switch (linkage) {
                case Linkage::single: merged = std::min(dit, djt); break;
                case Linkage::complete: merged = std::max(dit, djt); break;
                case Linkage::average:
                default: {
                    double si = static_cast<double>(size[bi]);
                    double sj = static_cast<double>(size[bj]);
                    merged = (si * dit + sj * djt) / (si + sj);
                    break;
                }
            }
            dist[bi * m + t] = merged;
            dist[t * m + bi] = merged;
        }
        members[bi].insert(members[bi].end(), members[bj].begin(), members[bj].end());
        size[bi] += size[bj];
        alive[bj] = false;
    }

    for (std::size_t i = 0; i < m; ++i) {
        if (!alive[i]) continue;
        std::sort(members[i].begin(), members[i].end());
        clusters.push_back(std::move(members[i]));
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return clusters;
}

std::vector<std::vector<std::size_t>> cluster_subset(const PointCloud& pc,
                                                     const std::vector<std::size_t>& ids,
                                                     const ClusteringConfig& cfg) {
    cfg.validate();
    if (cfg.method == ClusterMethod::agglomerative) {
        return agglomerative(pc, ids, cfg.threshold, cfg.linkage);
    }
    DbscanResult r = dbscan(pc, ids, cfg.eps, cfg.min_pts);
    if (cfg.noise_policy == NoisePolicy::singleton) {
        for (std::size_t p : r.noise) r.clusters.push_back({p});
    }
    return r.clusters;
}

Linkage linkage_from_string(const std::string& s) {
    if (s == "single") return Linkage::single;
    if (s == "complete") return Linkage::complete;
    if (s == "average") return Linkage::average;
    throw std::invalid_argument("unknown linkage '" + s + "'");
}

NoisePolicy noise_policy_from_string(const std::string& s) {
    if (s == "singleton") return NoisePolicy::singleton;
    if (s == "drop") return NoisePolicy::drop;
    throw std::invalid_argument("unknown noise policy '" + s + "'");
}

}  // namespace softmapper
