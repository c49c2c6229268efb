#pragma once

#include "softmapper/persistence.hpp"

namespace softmapper {

// Extended persistence by the textbook route: cone the graph with an apex,
// run the ascending sublevel filtration followed by the descending relative
// filtration, reduce the boundary matrix over Z/2, and classify the pairs.
// Independent of extended_persistence; kept as its verification oracle.
// Quadratic-to-cubic in cell count, so it refuses graphs above 64 vertices.
PersistenceDiagram cone_oracle(const FiltrationGraph& fg);

}  // namespace softmapper
