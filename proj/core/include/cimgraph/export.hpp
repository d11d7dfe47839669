#pragma once

// Delimited text outputs: graph-database loading files (one file per
// vertex and edge type) and topology result files. All files are UTF-8,
// LF, tab-separated, header first. Row order is deterministic (sorted by
// id), so identical inputs produce byte-identical files.

#include <filesystem>
#include <string>
#include <vector>

#include "cimgraph/graph.hpp"
#include "cimgraph/ntp.hpp"

namespace cimgraph {

// Loading files for the chosen strategy: vertices_<kind>.tsv for every
// vertex kind the strategy can hold, edges_<kind>.tsv per edge kind, and
// the deduplicated connectivity_nodes.tsv. Files exist (header-only)
// even when empty.
void export_graph_files(const PropertyGraph& g, const std::filesystem::path& dir);

// toponodes.tsv (id, substation, members), topoedges.tsv (device, from,
// to), islands.tsv (id, energized, nodes). Member lists are sorted and
// ';'-joined.
void write_topology_files(const BusBranchModel& m, const std::filesystem::path& dir);

// Reads files written by write_topology_files. Timing is not persisted.
// Throws Error on unreadable or malformed inputs.
BusBranchModel load_topology_files(const std::filesystem::path& dir);

// Vertex kinds a strategy's graph can contain, in file order.
std::vector<VertexKind> strategy_vertex_kinds(Strategy s);
std::vector<EdgeKind> strategy_edge_kinds(Strategy s);

}  // namespace cimgraph
