#pragma once

#include <string>
#include <utility>
#include <vector>

#include "softmapper/gmm.hpp"
#include "softmapper/mapper.hpp"
#include "softmapper/types.hpp"

namespace softmapper {

enum class PersClass { ord0, rel1, ext0, ext1 };

const char* pers_class_name(PersClass c);
PersClass pers_class_from_name(const std::string& name);

struct DiagramPoint {
    double birth = 0.0;
    double death = 0.0;
    PersClass cls = PersClass::ord0;
    // vertices whose filtration values realize the coordinates; -1 when the
    // producer does not track them (e.g. the reduction oracle)
    int birth_vertex = -1;
    int death_vertex = -1;
};

struct PersistenceDiagram {
    std::vector<DiagramPoint> points;

    std::size_t size() const { return points.size(); }
};

// Graph topology plus one real value per vertex. Ascending passes weight an
// edge by the larger endpoint value, descending passes by the smaller one.
struct FiltrationGraph {
    std::size_t num_vertices = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<double> values;

    void validate() const;
};

// value(c) = mean log mixture density of the points in node c
FiltrationGraph node_filtration_loglik(const MapperGraph& g, const FilterValues& y,
                                       const GmmParams& theta);

// value(c) = mean filter value of the points in node c
FiltrationGraph node_filtration_mean(const MapperGraph& g, const FilterValues& f);

// Extended persistence of a real-valued function on a graph via two
// union-find sweeps. Ord0 points come from the ascending pass, Rel1 and Ext1
// from the descending pass, Ext0 is one (component min, component max) point
// per component. Zero-persistence Ord0/Rel1 points are dropped; Ext0 and Ext1
// points are kept regardless since they witness components and independent
// cycles.
PersistenceDiagram extended_persistence(const FiltrationGraph& fg);

// Average absolute lifetime over all retained points. Empty diagrams give 0
// and set *was_empty when provided.
double mean_persistence(const PersistenceDiagram& d, bool* was_empty = nullptr);

void save_diagram_csv(const PersistenceDiagram& d, const std::string& path);
PersistenceDiagram load_diagram_csv(const std::string& path);

// Multiset comparison on (class, birth, death); coordinates are copied input
// values on both computation routes, so exact equality is meaningful.
bool diagrams_equal(const PersistenceDiagram& a, const PersistenceDiagram& b);

}  // namespace softmapper
