#include "cimgraph/export.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "cimgraph/error.hpp"

namespace cimgraph {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path.string());
    return out;
}

std::string joined(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ';';
        out += items[i];
    }
    return out;
}

std::vector<std::string> split_list(const std::string& field) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(field);
    while (std::getline(in, item, ';')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path,
                                                std::size_t expected_columns) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file: " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_tabs(line);
        if (header) {
            header = false;
            continue;
        }
        if (fields.size() != expected_columns) {
            throw Error(path.string() + ": expected " + std::to_string(expected_columns) +
                        " columns, got " + std::to_string(fields.size()));
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace

std::vector<VertexKind> strategy_vertex_kinds(Strategy s) {
    std::vector<VertexKind> kinds = {
        VertexKind::connectivity_node, VertexKind::busbar,       VertexKind::generator,
        VertexKind::load,              VertexKind::compensator_p, VertexKind::ac_line,
        VertexKind::transformer,       VertexKind::compensator_s, VertexKind::dc_link,
    };
    if (s == Strategy::A) {
        kinds.push_back(VertexKind::breaker);
        kinds.push_back(VertexKind::disconnector);
    }
    return kinds;
}

std::vector<EdgeKind> strategy_edge_kinds(Strategy s) {
    if (s == Strategy::A) return {EdgeKind::plain_connection};
    return {EdgeKind::plain_connection, EdgeKind::breaker, EdgeKind::disconnector};
}

void export_graph_files(const PropertyGraph& g, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    {
        auto out = open_out(dir / "connectivity_nodes.tsv");
        out << "id\tnd\tsubstation\n";
        for (const auto& [id, v] : g.vertices()) {
            if (v.kind != VertexKind::connectivity_node) continue;
            out << id << '\t' << id.substr(3) << '\t' << v.substation << '\n';  // strip "nd/"
        }
    }

    for (VertexKind kind : strategy_vertex_kinds(g.strategy())) {
        // Pass-through column set is the union over vertices of this kind.
        std::set<std::string> attr_cols;
        for (const auto& [id, v] : g.vertices()) {
            if (v.kind != kind) continue;
            for (const auto& [k, value] : v.attrs) attr_cols.insert(k);
        }
        auto out = open_out(dir / ("vertices_" + std::string(to_string(kind)) + ".tsv"));
        out << "id\tkind\tsubstation\tname\tclosed\ti_status\tj_status";
        for (const auto& c : attr_cols) out << '\t' << c;
        out << '\n';
        for (const auto& [id, v] : g.vertices()) {
            if (v.kind != kind) continue;
            out << id << '\t' << to_string(v.kind) << '\t' << v.substation << '\t' << v.name << '\t';
            if (v.closed) out << (*v.closed ? '1' : '0');
            out << '\t';
            if (is_branch_device(v.kind)) out << (v.i_closed ? '1' : '0');
            out << '\t';
            if (is_branch_device(v.kind)) out << (v.j_closed ? '1' : '0');
            for (const auto& c : attr_cols) {
                out << '\t';
                auto it = v.attrs.find(c);
                if (it != v.attrs.end()) out << it->second;
            }
            out << '\n';
        }
    }

    for (EdgeKind kind : strategy_edge_kinds(g.strategy())) {
        auto out = open_out(dir / ("edges_" + std::string(to_string(kind)) + ".tsv"));
        out << "id\tfrom\tto\tkind\tclosed\n";
        for (const auto& [id, e] : g.edges()) {
            if (e.kind != kind) continue;
            out << id << '\t' << e.endpoints.first << '\t' << e.endpoints.second << '\t'
                << to_string(e.kind) << '\t';
            if (e.closed) out << (*e.closed ? '1' : '0');
            out << '\n';
        }
    }
}

void write_topology_files(const BusBranchModel& m, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        auto out = open_out(dir / "toponodes.tsv");
        out << "id\tsubstation\tmembers\n";
        for (const auto& n : m.nodes) {
            out << n.id << '\t' << n.substation << '\t' << joined(n.members) << '\n';
        }
    }
    {
        auto out = open_out(dir / "topoedges.tsv");
        out << "device\tfrom\tto\n";
        for (const auto& e : m.edges) {
            out << e.device << '\t' << e.endpoints.first << '\t' << e.endpoints.second << '\n';
        }
    }
    {
        auto out = open_out(dir / "islands.tsv");
        out << "id\tenergized\tnodes\n";
        for (const auto& island : m.islands) {
            out << island.id << '\t' << (island.energized ? 1 : 0) << '\t' << joined(island.nodes)
                << '\n';
        }
    }
}

BusBranchModel load_topology_files(const std::filesystem::path& dir) {
    BusBranchModel m;
    for (auto& fields : read_rows(dir / "toponodes.tsv", 3)) {
        TopologyNode n;
        n.id = std::move(fields[0]);
        n.substation = std::move(fields[1]);
        n.members = split_list(fields[2]);
        for (const auto& member : n.members) {
            if (member.starts_with("busbar/")) n.contains_busbar = true;
            if (member.starts_with("generator/")) n.contains_generator = true;
        }
        m.nodes.push_back(std::move(n));
    }
    for (auto& fields : read_rows(dir / "topoedges.tsv", 3)) {
        TopologyEdge e;
        e.id = fields[0];
        e.device = std::move(fields[0]);
        e.endpoints = {std::move(fields[1]), std::move(fields[2])};
        m.edges.push_back(std::move(e));
    }
    for (auto& fields : read_rows(dir / "islands.tsv", 3)) {
        Island island;
        island.id = std::move(fields[0]);
        island.energized = fields[1] == "1";
        island.nodes = split_list(fields[2]);
        m.islands.push_back(std::move(island));
    }
    return m;
}

}  // namespace cimgraph
