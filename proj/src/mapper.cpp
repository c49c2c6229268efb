#include "softmapper/mapper.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace softmapper {

void MapperGraph::validate() const {
    std::set<std::pair<std::size_t, std::size_t>> edge_set;
    for (const auto& node : nodes) {
        if (node.members.empty()) throw std::invalid_argument("mapper node with empty member set");
        if (!std::is_sorted(node.members.begin(), node.members.end()))
            throw std::invalid_argument("mapper node members must be sorted");
    }
    for (auto [u, v] : edges) {
        if (u >= v || v >= nodes.size()) throw std::invalid_argument("mapper edge indices invalid");
        edge_set.insert({u, v});
    }
    if (edge_set.size() != edges.size()) throw std::invalid_argument("duplicate mapper edges");

    // nerve rule: edge iff member sets intersect; within one group, disjoint
    for (std::size_t u = 0; u < nodes.size(); ++u) {
        for (std::size_t v = u + 1; v < nodes.size(); ++v) {
            bool meet = false;
            const auto& a = nodes[u].members;
            const auto& b = nodes[v].members;
            std::size_t i = 0, j = 0;
            while (i < a.size() && j < b.size()) {
                if (a[i] == b[j]) { meet = true; break; }
                if (a[i] < b[j]) ++i; else ++j;
            }
            bool has_edge = edge_set.count({u, v}) > 0;
            if (meet != has_edge) throw std::invalid_argument("nerve rule violated between nodes " +
                                                              std::to_string(u) + " and " + std::to_string(v));
            if (meet && nodes[u].group == nodes[v].group)
                throw std::invalid_argument("overlapping member sets inside one group");
        }
    }
}

namespace {

MapperGraph build_nerve(std::vector<MapperNode> nodes, std::size_t point_count) {
    MapperGraph g;
    g.nodes = std::move(nodes);

    // every point occupies few nodes, so collect node lists per point
    std::vector<std::vector<std::size_t>> nodes_of_point(point_count);
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        for (std::size_t p : g.nodes[v].members) nodes_of_point[p].push_back(v);
    }
    std::set<std::pair<std::size_t, std::size_t>> edge_set;
    for (const auto& in_nodes : nodes_of_point) {
        for (std::size_t i = 0; i < in_nodes.size(); ++i) {
            for (std::size_t j = i + 1; j < in_nodes.size(); ++j) {
                std::size_t u = in_nodes[i], v = in_nodes[j];
                if (u > v) std::swap(u, v);
                if (u != v) edge_set.insert({u, v});
            }
        }
    }
    g.edges.assign(edge_set.begin(), edge_set.end());
    return g;
}

std::vector<MapperNode> cluster_groups(const PointCloud& pc,
                                       const std::vector<std::vector<std::size_t>>& group_members,
                                       const ClusteringConfig& cfg) {
    std::vector<std::vector<std::vector<std::size_t>>> clusters_per_group(group_members.size());
    const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(group_members.size());
    // groups are independent; slots keep the result deterministic
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t j = 0; j < k; ++j) {
        if (!group_members[j].empty()) {
            clusters_per_group[j] = cluster_subset(pc, group_members[j], cfg);
        }
    }
    std::vector<MapperNode> nodes;
    for (std::size_t j = 0; j < group_members.size(); ++j) {
        for (auto& cluster : clusters_per_group[j]) {
            MapperNode node;
            node.group = j;
            node.members = std::move(cluster);
            std::sort(node.members.begin(), node.members.end());
            nodes.push_back(std::move(node));
        }
    }
    return nodes;
}

}  // namespace

MapperGraph mapper_function(const PointCloud& pc, const AssignmentMatrix& h,
                            const ClusteringConfig& cfg) {
    if (h.n != pc.n) throw std::invalid_argument("assignment rows do not match point count");
    h.validate();

    std::vector<std::vector<std::size_t>> group_members(h.k);
    for (std::size_t i = 0; i < h.n; ++i) {
        for (std::size_t j = 0; j < h.k; ++j) {
            if (h.at(i, j) >= 1) group_members[j].push_back(i);
        }
    }
    return build_nerve(cluster_groups(pc, group_members, cfg), pc.n);
}

void StandardCoverSpec::validate() const {
    if (k < 1) throw std::invalid_argument("cover needs K >= 1 intervals");
    if (!(p >= 0.0) || p >= 1.0) throw std::invalid_argument("overlap fraction must lie in [0,1)");
    if (a > b) throw std::invalid_argument("cover range endpoints must satisfy a <= b");
}

std::vector<std::pair<double, double>> cover_intervals(const StandardCoverSpec& spec) {
    spec.validate();
    const double kk = static_cast<double>(spec.k);
    double len = (spec.b - spec.a) / (kk - (kk - 1.0) * spec.p);
    std::vector<std::pair<double, double>> intervals(spec.k);
    for (std::size_t j = 0; j < spec.k; ++j) {
        double lo = spec.a + static_cast<double>(j) * (1.0 - spec.p) * len;
        intervals[j] = {lo, lo + len};
    }
    intervals.back().second = spec.b;  // guard the top end against rounding
    return intervals;
}

MapperGraph standard_mapper(const PointCloud& pc, const FilterValues& f,
                            StandardCoverSpec spec, const ClusteringConfig& cfg) {
    if (f.size() != pc.n) throw std::invalid_argument("filter length does not match point count");
    if (spec.auto_range) {
        auto [lo, hi] = std::minmax_element(f.begin(), f.end());
        spec.a = *lo;
        spec.b = *hi;
    }
    auto intervals = cover_intervals(spec);

    std::vector<std::vector<std::size_t>> group_members(spec.k);
    for (std::size_t i = 0; i < pc.n; ++i) {
        for (std::size_t j = 0; j < spec.k; ++j) {
            if (f[i] >= intervals[j].first && f[i] <= intervals[j].second) {
                group_members[j].push_back(i);
            }
        }
    }
    return build_nerve(cluster_groups(pc, group_members, cfg), pc.n);
}

GraphStats graph_stats(const MapperGraph& g) {
    GraphStats s;
    const std::size_t v = g.nodes.size();
    const std::size_t e = g.edges.size();
    if (v == 0) return s;
    s.average_degree = 2.0 * static_cast<double>(e) / static_cast<double>(v);

    std::vector<std::size_t> parent(v);
    for (std::size_t i = 0; i < v; ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (auto [a, b] : g.edges) {
        std::size_t ra = find(a), rb = find(b);
        if (ra != rb) parent[ra] = rb;
    }
    std::set<std::size_t> roots;
    for (std::size_t i = 0; i < v; ++i) roots.insert(find(i));
    s.connected_components = roots.size();
    s.loops = e + s.connected_components - v;
    return s;
}

SummaryStats summarize(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("cannot summarize an empty sample");
    SummaryStats s;
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / n;

    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    double half = 1.96 * sd / std::sqrt(n);
    s.ci_low = s.mean - half;
    s.ci_high = s.mean + half;

    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    std::size_t mid = sorted.size() / 2;
    s.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

    std::map<double, std::size_t> counts;  // keys rounded to 2 decimals
    for (double v : sorted) counts[std::round(v * 100.0) / 100.0]++;
    std::size_t best = 0;
    for (const auto& [value, count] : counts) {
        if (count > best) {  // map order makes ties resolve to the smallest key
            best = count;
            s.mode = value;
        }
    }
    return s;
}

SampleStatistics sample_statistics(const std::vector<GraphStats>& stats) {
    if (stats.empty()) throw std::invalid_argument("sample_statistics needs at least one graph");
    std::vector<double> deg, comp, loops;
    deg.reserve(stats.size());
    comp.reserve(stats.size());
    loops.reserve(stats.size());
    for (const auto& s : stats) {
        deg.push_back(s.average_degree);
        comp.push_back(static_cast<double>(s.connected_components));
        loops.push_back(static_cast<double>(s.loops));
    }
    SampleStatistics out;
    out.average_degree = summarize(deg);
    out.connected_components = summarize(comp);
    out.loops = summarize(loops);
    out.samples = stats.size();
    return out;
}

std::vector<std::optional<std::pair<double, double>>> implicit_intervals(
    const FilterValues& f, const AssignmentMatrix& h) {
    if (f.size() != h.n) throw std::invalid_argument("filter length does not match assignment rows");
    std::vector<std::optional<std::pair<double, double>>> intervals(h.k);
    for (std::size_t i = 0; i < h.n; ++i) {
        for (std::size_t j = 0; j < h.k; ++j) {
            if (h.at(i, j) < 1) continue;
            if (!intervals[j]) {
                intervals[j] = {f[i], f[i]};
            } else {
                intervals[j]->first = std::min(intervals[j]->first, f[i]);
                intervals[j]->second = std::max(intervals[j]->second, f[i]);
            }
        }
    }
    return intervals;
}

std::string MapperGraph::to_json() const {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        nlohmann::json node;
        node["id"] = i;
        node["group"] = nodes[i].group;
        node["members"] = nodes[i].members;
        j["nodes"].push_back(node);
    }
    j["edges"] = nlohmann::json::array();
    for (auto [u, v] : edges) j["edges"].push_back({u, v});
    return j.dump(2) + "\n";
}

MapperGraph MapperGraph::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    MapperGraph g;
    for (const auto& node : j.at("nodes")) {
        MapperNode n;
        n.group = node.at("group").get<std::size_t>();
        n.members = node.at("members").get<std::vector<std::size_t>>();
        g.nodes.push_back(std::move(n));
    }
    for (const auto& e : j.at("edges")) {
        g.edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
    }
    g.validate();
    return g;
}

std::string MapperGraph::to_dot(const std::vector<int>* labels) const {
    std::ostringstream out;
    out << "graph mapper {\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        out << "  n" << i << " [size=" << nodes[i].members.size();
        if (labels) {
            std::map<int, std::size_t> hist;
            for (std::size_t p : nodes[i].members) hist[(*labels)[p]]++;
            out << " label_hist=\"";
            bool first = true;
            for (const auto& [lab, count] : hist) {
                out << (first ? "" : ",") << lab << ":" << count;
                first = false;
            }
            out << "\"";
        }
        out << "];\n";
    }
    for (auto [u, v] : edges) out << "  n" << u << " -- n" << v << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace softmapper
