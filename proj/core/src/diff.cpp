#include "cimgraph/diff.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cimgraph/error.hpp"
#include "cimgraph/export.hpp"
#include "cimgraph/model.hpp"
#include "cimgraph/ntp.hpp"

namespace cimgraph {

namespace {

using Group = std::vector<std::string>;

struct Side {
    std::string origin;
    std::vector<Group> partition;      // sorted groups of sorted members
    bool nd_only = false;              // TopoNode-table sides carry nds only
    bool has_edges = false;
    bool has_islands = false;
    std::multiset<std::string> edges;  // "device from..to" canonical lines
    std::multiset<std::string> islands;
};

Side load_dir(const std::filesystem::path& path) {
    Side side;
    side.origin = path.string();
    BusBranchModel m = load_topology_files(path);
    for (auto& n : m.nodes) {
        Group g = n.members;
        std::sort(g.begin(), g.end());
        side.partition.push_back(std::move(g));
    }
    std::sort(side.partition.begin(), side.partition.end());
    side.has_edges = true;
    for (const auto& e : m.edges) {
        auto lo = std::min(e.endpoints.first, e.endpoints.second);
        auto hi = std::max(e.endpoints.first, e.endpoints.second);
        side.edges.insert(e.device + " " + lo + ".." + hi);
    }
    side.has_islands = true;
    for (const auto& island : m.islands) {
        Group nodes = island.nodes;
        std::sort(nodes.begin(), nodes.end());
        std::string line = island.energized ? "energized:" : "de-energized:";
        for (const auto& n : nodes) line += " " + n;
        side.islands.insert(std::move(line));
    }
    return side;
}

Side load_cime_toponodes(const std::filesystem::path& path) {
    Side side;
    side.origin = path.string();
    side.nd_only = true;

    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    auto parsed = parse_cime(buf.str());
    if (!parsed.ok()) {
        throw Error("diff: '" + path.string() + "' has CIM/E parse errors");
    }
    auto bound = bind_model(parsed.doc);
    if (bound.model.toponodes.empty()) {
        throw Error("diff: '" + path.string() + "' carries no TopoNode table");
    }
    std::map<std::string, Group> by_toponode;
    for (const auto& r : bound.model.toponodes) {
        auto nd = r.attrs.find("nd");
        if (nd == r.attrs.end()) {
            throw Error("diff: TopoNode row '" + r.id + "' in '" + path.string() + "' has no nd column");
        }
        by_toponode[r.id].push_back(connectivity_vertex_id(nd->second));
    }
    for (auto& [id, group] : by_toponode) {
        std::sort(group.begin(), group.end());
        side.partition.push_back(std::move(group));
    }
    std::sort(side.partition.begin(), side.partition.end());
    return side;
}

Side load_side(const std::filesystem::path& path) {
    if (std::filesystem::is_directory(path)) return load_dir(path);
    if (std::filesystem::exists(path)) return load_cime_toponodes(path);
    throw Error("diff: no such path: " + path.string());
}

// TopoNode rows name connectivity nodes only; drop device members so the
// comparison is apples-to-apples.
std::vector<Group> restrict_to_nds(const std::vector<Group>& partition) {
    std::vector<Group> out;
    for (const auto& group : partition) {
        Group filtered;
        for (const auto& member : group) {
            if (member.starts_with("nd/")) filtered.push_back(member);
        }
        if (!filtered.empty()) out.push_back(std::move(filtered));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string show_group(const Group& g, std::size_t limit = 6) {
    std::string out = "{";
    for (std::size_t i = 0; i < g.size() && i < limit; ++i) {
        if (i) out += ", ";
        out += g[i];
    }
    if (g.size() > limit) out += ", ...";
    out += "}";
    return out;
}

template <typename T>
void report_asymmetry(const std::set<T>& only_a, const std::set<T>& only_b, const char* what,
                      DiffReport& report, auto&& show) {
    constexpr std::size_t kLimit = 5;
    std::size_t shown = 0;
    for (const auto& item : only_a) {
        if (shown++ >= kLimit) break;
        report.details.push_back(std::string(what) + " only in first result: " + show(item));
    }
    shown = 0;
    for (const auto& item : only_b) {
        if (shown++ >= kLimit) break;
        report.details.push_back(std::string(what) + " only in second result: " + show(item));
    }
}

}  // namespace

DiffReport diff_topology(const std::filesystem::path& a, const std::filesystem::path& b) {
    Side side_a = load_side(a);
    Side side_b = load_side(b);
    DiffReport report;

    auto partition_a = side_a.partition;
    auto partition_b = side_b.partition;
    if (side_a.nd_only || side_b.nd_only) {
        partition_a = restrict_to_nds(partition_a);
        partition_b = restrict_to_nds(partition_b);
    }

    if (partition_a != partition_b) {
        report.equivalent = false;
        std::set<Group> set_a(partition_a.begin(), partition_a.end());
        std::set<Group> set_b(partition_b.begin(), partition_b.end());
        std::set<Group> only_a, only_b;
        std::set_difference(set_a.begin(), set_a.end(), set_b.begin(), set_b.end(),
                            std::inserter(only_a, only_a.begin()));
        std::set_difference(set_b.begin(), set_b.end(), set_a.begin(), set_a.end(),
                            std::inserter(only_b, only_b.begin()));
        report.details.push_back("topology-node partitions differ (" +
                                 std::to_string(partition_a.size()) + " vs " +
                                 std::to_string(partition_b.size()) + " nodes)");
        report_asymmetry(only_a, only_b, "node group", report,
                         [](const Group& g) { return show_group(g); });
    }

    if (side_a.has_edges && side_b.has_edges) {
        if (side_a.edges != side_b.edges) {
            report.equivalent = false;
            std::set<std::string> only_a, only_b;
            std::set_difference(side_a.edges.begin(), side_a.edges.end(), side_b.edges.begin(),
                                side_b.edges.end(), std::inserter(only_a, only_a.begin()));
            std::set_difference(side_b.edges.begin(), side_b.edges.end(), side_a.edges.begin(),
                                side_a.edges.end(), std::inserter(only_b, only_b.begin()));
            report.details.push_back("topology-edge multisets differ (" +
                                     std::to_string(side_a.edges.size()) + " vs " +
                                     std::to_string(side_b.edges.size()) + " edges)");
            report_asymmetry(only_a, only_b, "edge", report,
                             [](const std::string& s) { return s; });
        }
    }

    if (side_a.has_islands && side_b.has_islands) {
        if (side_a.islands != side_b.islands) {
            report.equivalent = false;
            report.details.push_back("island decompositions differ (" +
                                     std::to_string(side_a.islands.size()) + " vs " +
                                     std::to_string(side_b.islands.size()) + " islands)");
        }
    }

    return report;
}

}  // namespace cimgraph
