#pragma once

#include <iosfwd>
#include <string>

#include "mrx/graph.hpp"

namespace mrx {

/// JSON-lines dump: one `{"id","x","y","layer","u"}` record per vertex in
/// index order, then one `{"a","b","length"}` record per edge (a, b are
/// vertex ids).
void write_graph_jsonl(std::ostream& os, const HierGraph& graph);

/// Reads a dump back. Vertex ids are reassigned in file order; edge lengths
/// are recomputed from positions.
HierGraph read_graph_jsonl(std::istream& is);

}  // namespace mrx
