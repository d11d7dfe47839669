#pragma once

// Equivalence comparison of topology outputs. Two results are equivalent
// when their node partitions (as member sets), their topology-edge
// multisets and their island decompositions agree. A side can be a
// result directory (written by write_topology_files) or a CIM/E file
// carrying a TopoNode table (columns id, nd, one row per member), which
// compares connectivity-node membership only.

#include <filesystem>
#include <string>
#include <vector>

namespace cimgraph {

struct DiffReport {
    bool equivalent = true;
    std::vector<std::string> details;  // human-readable mismatch report
};

DiffReport diff_topology(const std::filesystem::path& a, const std::filesystem::path& b);

}  // namespace cimgraph
