#include "softmapper/cone_oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace softmapper {

namespace {

enum class CellKind { vertex, edge, apex, cone_edge, cone_triangle };

struct Cell {
    CellKind kind;
    std::size_t ref;  // vertex id or edge id
    double value;
    int dim;
    bool descending;  // second half of the filtration
};

// symmetric difference of sorted index vectors (Z/2 column addition)
std::vector<int> xor_columns(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else {
            out.push_back(b[j++]);
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    return out;
}

}  // namespace

PersistenceDiagram cone_oracle(const FiltrationGraph& fg) {
    fg.validate();
    if (fg.num_vertices > 64)
        throw std::invalid_argument("cone_oracle is a verification path; refusing > 64 vertices");
    PersistenceDiagram diagram;
    if (fg.num_vertices == 0) return diagram;
    const auto& f = fg.values;

    std::vector<Cell> cells;
    for (std::size_t v = 0; v < fg.num_vertices; ++v) {
        cells.push_back({CellKind::vertex, v, f[v], 0, false});
    }
    for (std::size_t e = 0; e < fg.edges.size(); ++e) {
        double val = std::max(f[fg.edges[e].first], f[fg.edges[e].second]);
        cells.push_back({CellKind::edge, e, val, 1, false});
    }
    cells.push_back({CellKind::apex, 0, 0.0, 0, true});
    for (std::size_t v = 0; v < fg.num_vertices; ++v) {
        cells.push_back({CellKind::cone_edge, v, f[v], 1, true});
    }
    for (std::size_t e = 0; e < fg.edges.size(); ++e) {
        double val = std::min(f[fg.edges[e].first], f[fg.edges[e].second]);
        cells.push_back({CellKind::cone_triangle, e, val, 2, true});
    }

    // Filtration order: ascending half by increasing value, then the cone by
    // decreasing value; lower-dimensional cells first at ties so faces precede
    // cofaces; the apex leads the cone.
    std::vector<std::size_t> order(cells.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Cell& ca = cells[a];
        const Cell& cb = cells[b];
        if (ca.descending != cb.descending) return !ca.descending;
        if (!ca.descending) {
            if (ca.value != cb.value) return ca.value < cb.value;
            return ca.dim < cb.dim;
        }
        if (ca.kind == CellKind::apex || cb.kind == CellKind::apex)
            return ca.kind == CellKind::apex && cb.kind != CellKind::apex;
        if (ca.value != cb.value) return ca.value > cb.value;
        return ca.dim < cb.dim;
    });

    std::vector<int> position(cells.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) position[order[pos]] = static_cast<int>(pos);

    // raw cell ids before ordering
    const std::size_t vertex_base = 0;
    const std::size_t edge_base = fg.num_vertices;
    const std::size_t apex_id = edge_base + fg.edges.size();
    const std::size_t cone_edge_base = apex_id + 1;
    const std::size_t cone_triangle_base = cone_edge_base + fg.num_vertices;

    auto boundary_of = [&](std::size_t ordered_pos) {
        const Cell& c = cells[order[ordered_pos]];
        std::vector<int> col;
        switch (c.kind) {
            case CellKind::vertex:
            case CellKind::apex:
                break;
            case CellKind::edge: {
                auto [u, v] = fg.edges[c.ref];
                col.push_back(position[vertex_base + u]);
                col.push_back(position[vertex_base + v]);
                break;
            }
            case CellKind::cone_edge:
                col.push_back(position[apex_id]);
                col.push_back(position[vertex_base + c.ref]);
                break;
            case CellKind::cone_triangle: {
                auto [u, v] = fg.edges[c.ref];
                col.push_back(position[edge_base + c.ref]);
                col.push_back(position[cone_edge_base + u]);
                col.push_back(position[cone_edge_base + v]);
                break;
            }
        }
        std::sort(col.begin(), col.end());
        return col;
    };

    // standard column reduction
    const std::size_t m = cells.size();
    std::vector<std::vector<int>> reduced(m);
    std::vector<int> low_owner(m, -1);  // low row -> column holding it
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<int> col = boundary_of(j);
        while (!col.empty()) {
            int low = col.back();
            if (low_owner[low] < 0) break;
            col = xor_columns(col, reduced[static_cast<std::size_t>(low_owner[low])]);
        }
        if (!col.empty()) {
            int low = col.back();
            low_owner[low] = static_cast<int>(j);
            pairs.emplace_back(low, static_cast<int>(j));
        }
        reduced[j] = std::move(col);
    }

    for (auto [bi, di] : pairs) {
        const Cell& birth = cells[order[static_cast<std::size_t>(bi)]];
        const Cell& death = cells[order[static_cast<std::size_t>(di)]];
        if (birth.kind == CellKind::vertex && death.kind == CellKind::edge) {
            if (birth.value != death.value)
                diagram.points.push_back({birth.value, death.value, PersClass::ord0, -1, -1});
        } else if (birth.kind == CellKind::vertex && death.kind == CellKind::cone_edge) {
            diagram.points.push_back({birth.value, death.value, PersClass::ext0, -1, -1});
        } else if (birth.kind == CellKind::edge && death.kind == CellKind::cone_triangle) {
            diagram.points.push_back({birth.value, death.value, PersClass::ext1, -1, -1});
        } else if (birth.kind == CellKind::cone_edge && death.kind == CellKind::cone_triangle) {
            if (birth.value != death.value)
                diagram.points.push_back({birth.value, death.value, PersClass::rel1, -1, -1});
        } else if (birth.kind == CellKind::apex && death.kind == CellKind::cone_edge) {
            // artifact of the construction, not a feature
        } else {
            throw std::logic_error("cone reduction produced an unexpected pair shape");
        }
    }

    // the cone is contractible: every cell must participate in a pair
    if (pairs.size() * 2 != m) throw std::logic_error("cone reduction left unpaired cells");

    return diagram;
}

}  // namespace softmapper
