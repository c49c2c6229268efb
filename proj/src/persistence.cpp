#include "softmapper/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace softmapper {

const char* pers_class_name(PersClass c) {
    switch (c) {
        case PersClass::ord0: return "ORD0";
        case PersClass::rel1: return "REL1";
        case PersClass::ext0: return "EXT0";
        case PersClass::ext1: return "EXT1";
    }
    return "?";
}

PersClass pers_class_from_name(const std::string& name) {
    if (name == "ORD0") return PersClass::ord0;
    if (name == "REL1") return PersClass::rel1;
    if (name == "EXT0") return PersClass::ext0;
    if (name == "EXT1") return PersClass::ext1;
    throw std::invalid_argument("unknown diagram class '" + name + "'");
}

void FiltrationGraph::validate() const {
    if (values.size() != num_vertices) throw std::invalid_argument("filtration value count != vertex count");
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("filtration values must be finite");
    }
    for (auto [u, v] : edges) {
        if (u >= num_vertices || v >= num_vertices || u == v)
            throw std::invalid_argument("filtration graph edge invalid");
    }
}

FiltrationGraph node_filtration_loglik(const MapperGraph& g, const FilterValues& y,
                                       const GmmParams& theta) {
    std::vector<double> lp = point_log_densities(y, theta);
    FiltrationGraph fg;
    fg.num_vertices = g.nodes.size();
    fg.edges = g.edges;
    fg.values.resize(g.nodes.size());
    for (std::size_t c = 0; c < g.nodes.size(); ++c) {
        double s = 0.0;
        for (std::size_t i : g.nodes[c].members) {
            if (i >= y.size()) throw std::invalid_argument("node member outside filter range");
            s += lp[i];
        }
        fg.values[c] = s / static_cast<double>(g.nodes[c].members.size());
    }
    return fg;
}

FiltrationGraph node_filtration_mean(const MapperGraph& g, const FilterValues& f) {
    FiltrationGraph fg;
    fg.num_vertices = g.nodes.size();
    fg.edges = g.edges;
    fg.values.resize(g.nodes.size());
    for (std::size_t c = 0; c < g.nodes.size(); ++c) {
        double s = 0.0;
        for (std::size_t i : g.nodes[c].members) {
            if (i >= f.size()) throw std::invalid_argument("node member outside filter range");
            s += f[i];
        }
        fg.values[c] = s / static_cast<double>(g.nodes[c].members.size());
    }
    return fg;
}

namespace {

// Union-find tracking one extremal (value, vertex) witness per component.
struct ExtremumForest {
    std::vector<int> parent;
    std::vector<int> witness;  // extremal vertex of the component

    explicit ExtremumForest(std::size_t n) : parent(n, -1), witness(n) {
        for (std::size_t i = 0; i < n; ++i) witness[i] = static_cast<int>(i);
    }

    int find(int x) {
        int root = x;
        while (parent[root] >= 0) root = parent[root];
        while (parent[x] >= 0) {
            int next = parent[x];
            parent[x] = root;
            x = next;
        }
        return root;
    }
};

bool lex_less(double va, int ia, double vb, int ib) {
    if (va != vb) return va < vb;
    return ia < ib;
}

}  // namespace

PersistenceDiagram extended_persistence(const FiltrationGraph& fg) {
    fg.validate();
    PersistenceDiagram diagram;
    const std::size_t n = fg.num_vertices;
    if (n == 0) return diagram;
    const auto& f = fg.values;

    // --- ascending pass: Ord0 and the per-component extrema for Ext0 ---
    {
        ExtremumForest forest(n);  // witness = component minimum
        std::vector<std::size_t> order(fg.edges.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        auto asc_value = [&](std::size_t e) {
            return std::max(f[fg.edges[e].first], f[fg.edges[e].second]);
        };
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return asc_value(a) < asc_value(b);
        });
        for (std::size_t e : order) {
            auto [u, v] = fg.edges[e];
            int ru = forest.find(static_cast<int>(u));
            int rv = forest.find(static_cast<int>(v));
            if (ru == rv) continue;  // ascending cycle closures carry no Ord0 point
            int wu = forest.witness[ru];
            int wv = forest.witness[rv];
            // elder rule: the component with the larger minimum dies
            int dying = lex_less(f[wu], wu, f[wv], wv) ? wv : wu;
            int surviving = dying == wu ? wv : wu;
            double edge_value = asc_value(e);
            int edge_witness = lex_less(f[u], static_cast<int>(u), f[v], static_cast<int>(v))
                                   ? static_cast<int>(v)
                                   : static_cast<int>(u);
            diagram.points.push_back({f[dying], edge_value, PersClass::ord0, dying, edge_witness});
            forest.parent[ru] = rv;
            forest.witness[forest.find(rv)] = surviving;
        }

        // Ext0: (min, max) per connected component
        std::vector<int> comp_max(n, -1);
        for (std::size_t v = 0; v < n; ++v) {
            int root = forest.find(static_cast<int>(v));
            int cur = comp_max[root];
            if (cur < 0 || lex_less(f[cur], cur, f[v], static_cast<int>(v))) {
                comp_max[root] = static_cast<int>(v);
            }
        }
        for (std::size_t v = 0; v < n; ++v) {
            int root = forest.find(static_cast<int>(v));
            if (static_cast<int>(v) == forest.witness[root]) {
                int hi = comp_max[root];
                diagram.points.push_back({f[v], f[hi], PersClass::ext0, static_cast<int>(v), hi});
            }
        }
    }

    // --- descending pass: Rel1 and Ext1 ---
    {
        ExtremumForest forest(n);  // witness = component maximum
        std::vector<char> active(n, 0);

        std::vector<std::size_t> vertex_order(n);
        for (std::size_t i = 0; i < n; ++i) vertex_order[i] = i;
        std::sort(vertex_order.begin(), vertex_order.end(), [&](std::size_t a, std::size_t b) {
            if (f[a] != f[b]) return f[a] > f[b];
            return a < b;
        });

        auto desc_value = [&](std::size_t e) {
            return std::min(f[fg.edges[e].first], f[fg.edges[e].second]);
        };
        std::vector<std::size_t> edge_order(fg.edges.size());
        for (std::size_t i = 0; i < edge_order.size(); ++i) edge_order[i] = i;
        std::stable_sort(edge_order.begin(), edge_order.end(), [&](std::size_t a, std::size_t b) {
            return desc_value(a) > desc_value(b);
        });

        std::size_t vi = 0;
        std::size_t ei = 0;
        while (vi < n) {
            double level = f[vertex_order[vi]];
            while (vi < n && f[vertex_order[vi]] == level) {
                active[vertex_order[vi]] = 1;
                ++vi;
            }
            // batch of edges entering at this level (their lower endpoint)
            std::vector<std::size_t> batch;
            while (ei < fg.edges.size() && desc_value(edge_order[ei]) == level) {
                batch.push_back(edge_order[ei]);
                ++ei;
            }
            std::vector<char> done(batch.size(), 0);
            std::size_t remaining = batch.size();
            while (remaining > 0) {
                // a cycle must be recorded against the component as it stands
                // before any higher-maximum lobe merges in at the same level,
                // so closers drain first and mergers go smallest-result-max
                // first
                bool closed_any = true;
                while (closed_any) {
                    closed_any = false;
                    for (std::size_t b = 0; b < batch.size(); ++b) {
                        if (done[b]) continue;
                        auto [u, v] = fg.edges[batch[b]];
                        int ru = forest.find(static_cast<int>(u));
                        int rv = forest.find(static_cast<int>(v));
                        if (ru != rv) continue;
                        int top = forest.witness[ru];
                        int edge_witness =
                            lex_less(f[u], static_cast<int>(u), f[v], static_cast<int>(v))
                                ? static_cast<int>(u)
                                : static_cast<int>(v);
                        diagram.points.push_back(
                            {f[top], level, PersClass::ext1, top, edge_witness});
                        done[b] = 1;
                        --remaining;
                        closed_any = true;
                    }
                }
                if (remaining == 0) break;

                std::size_t pick = batch.size();
                int pick_result_max = -1;
                for (std::size_t b = 0; b < batch.size(); ++b) {
                    if (done[b]) continue;
                    auto [u, v] = fg.edges[batch[b]];
                    int ru = forest.find(static_cast<int>(u));
                    int rv = forest.find(static_cast<int>(v));
                    int wu = forest.witness[ru];
                    int wv = forest.witness[rv];
                    int result = lex_less(f[wu], wu, f[wv], wv) ? wv : wu;
                    if (pick == batch.size() ||
                        lex_less(f[result], result, f[pick_result_max], pick_result_max)) {
                        pick = b;
                        pick_result_max = result;
                    }
                }
                auto [u, v] = fg.edges[batch[pick]];
                int ru = forest.find(static_cast<int>(u));
                int rv = forest.find(static_cast<int>(v));
                int wu = forest.witness[ru];
                int wv = forest.witness[rv];
                int dying = lex_less(f[wu], wu, f[wv], wv) ? wu : wv;
                int surviving = dying == wu ? wv : wu;
                int edge_witness = lex_less(f[u], static_cast<int>(u), f[v], static_cast<int>(v))
                                       ? static_cast<int>(u)
                                       : static_cast<int>(v);
                diagram.points.push_back({f[dying], level, PersClass::rel1, dying, edge_witness});
                forest.parent[ru] = rv;
                forest.witness[forest.find(rv)] = surviving;
                done[pick] = 1;
                --remaining;
            }
        }
    }

    // drop zero-persistence Ord0/Rel1 noise; keep Ext0/Ext1 as topology
    std::vector<DiagramPoint> kept;
    kept.reserve(diagram.points.size());
    for (const auto& p : diagram.points) {
        if ((p.cls == PersClass::ord0 || p.cls == PersClass::rel1) && p.birth == p.death) continue;
        kept.push_back(p);
    }
    diagram.points = std::move(kept);
    return diagram;
}

double mean_persistence(const PersistenceDiagram& d, bool* was_empty) {
    if (was_empty) *was_empty = d.points.empty();
    if (d.points.empty()) return 0.0;
    double s = 0.0;
    for (const auto& p : d.points) s += std::abs(p.death - p.birth);
    return s / static_cast<double>(d.points.size());
}

void save_diagram_csv(const PersistenceDiagram& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "class,birth,death\n";
    char buf[128];
    for (const auto& p : d.points) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g", pers_class_name(p.cls), p.birth, p.death);
        out << buf << '\n';
    }
}

PersistenceDiagram load_diagram_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    PersistenceDiagram d;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (line != "class,birth,death")
                throw std::runtime_error(path + ":1: unexpected diagram header");
            continue;
        }
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cls, birth, death;
        if (!std::getline(row, cls, ',') || !std::getline(row, birth, ',') || !std::getline(row, death))
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed diagram row");
        DiagramPoint p;
        p.cls = pers_class_from_name(cls);
        p.birth = std::stod(birth);
        p.death = std::stod(death);
        d.points.push_back(p);
    }
    return d;
}

bool diagrams_equal(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    if (a.points.size() != b.points.size()) return false;
    auto key = [](const DiagramPoint& p) {
        return std::tuple<int, double, double>(static_cast<int>(p.cls), p.birth, p.death);
    };
    std::vector<std::tuple<int, double, double>> ka, kb;
    ka.reserve(a.points.size());
    kb.reserve(b.points.size());
    for (const auto& p : a.points) ka.push_back(key(p));
    for (const auto& p : b.points) kb.push_back(key(p));
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    return ka == kb;
}

}  // namespace softmapper
