#include "cimgraph/ntp.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <unordered_set>

#include "cimgraph/disjoint_set.hpp"
#include "cimgraph/error.hpp"
#include "cimgraph/parallel.hpp"

namespace cimgraph {

namespace {

struct SubstationWork {
    std::string name;
    std::vector<std::string> busbars;  // sorted (map iteration order)
    std::vector<std::string> members;  // sorted
};

// Member vertices grouped by substation. Throws on members without one.
std::vector<SubstationWork> index_substations(const PropertyGraph& g) {
    std::map<std::string, SubstationWork> by_name;
    for (const auto& [id, v] : g.vertices()) {
        if (!is_topology_member(v.kind)) continue;
        if (v.substation.empty()) {
            throw Error("substation_tp: vertex '" + id + "' has no substation");
        }
        auto& work = by_name[v.substation];
        work.name = v.substation;
        work.members.push_back(id);
        if (v.kind == VertexKind::busbar) work.busbars.push_back(id);
    }
    std::vector<SubstationWork> out;
    out.reserve(by_name.size());
    for (auto& [name, work] : by_name) out.push_back(std::move(work));
    return out;
}

// Collects the group reachable from `seed` through plain connections and
// closed switches, staying inside one substation. Branch devices block.
std::vector<std::string> collect_group(const PropertyGraph& g, const std::string& seed,
                                       const std::string& substation,
                                       std::unordered_set<std::string>& visited) {
    std::vector<std::string> members;
    std::deque<std::string> queue;
    queue.push_back(seed);
    visited.insert(seed);
    while (!queue.empty()) {
        std::string current = std::move(queue.front());
        queue.pop_front();
        const Vertex& v = *g.find_vertex(current);
        if (is_topology_member(v.kind)) members.push_back(current);
        for (const auto& [eid, neighbor_id] : g.neighbors(current)) {
            const Edge& e = *g.find_edge(eid);
            if (e.kind != EdgeKind::plain_connection && !e.closed.value_or(false)) {
                continue;  // open switch edge (strategy B)
            }
            if (visited.count(neighbor_id)) continue;
            const Vertex& w = *g.find_vertex(neighbor_id);
            if (is_topology_member(w.kind)) {
                if (w.substation != substation) continue;
            } else if (is_switch(w.kind)) {
                if (!w.closed.value_or(false)) continue;  // open switch vertex (strategy A)
            } else {
                continue;  // branch devices terminate propagation
            }
            visited.insert(neighbor_id);
            queue.push_back(neighbor_id);
        }
    }
    return members;
}

std::vector<TopologyNode> process_substation(PropertyGraph& g, const SubstationWork& work) {
    std::vector<TopologyNode> nodes;
    std::unordered_set<std::string> visited;
    auto emit = [&](std::vector<std::string> members) {
        if (members.empty()) return;
        std::sort(members.begin(), members.end());
        TopologyNode node;
        node.id = members.front();  // canonical: minimum member id
        node.substation = work.name;
        for (const auto& m : members) {
            const Vertex& v = *g.find_vertex(m);
            if (v.kind == VertexKind::busbar) node.contains_busbar = true;
            if (v.kind == VertexKind::generator) node.contains_generator = true;
            g.set_label(m, node.id);
        }
        node.members = std::move(members);
        nodes.push_back(std::move(node));
    };
    // Pass one: traverse from every unprocessed bus bar.
    for (const auto& busbar : work.busbars) {
        if (visited.count(busbar)) continue;
        emit(collect_group(g, busbar, work.name, visited));
    }
    // Pass two: remaining members (groups with no bus bar) by the same
    // rule, seeded in ascending id order.
    for (const auto& member : work.members) {
        if (visited.count(member)) continue;
        emit(collect_group(g, member, work.name, visited));
    }
    std::sort(nodes.begin(), nodes.end(),
              [](const TopologyNode& a, const TopologyNode& b) { return a.id < b.id; });
    return nodes;
}

}  // namespace

std::vector<TopologyNode> substation_tp(PropertyGraph& g, unsigned parallelism) {
    g.clear_labels();
    auto substations = index_substations(g);
    std::vector<std::vector<TopologyNode>> slots(substations.size());
    parallel_chunks(substations.size(), parallelism, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            slots[i] = process_substation(g, substations[i]);
        }
    });
    std::vector<TopologyNode> nodes;
    for (auto& slot : slots) {
        nodes.insert(nodes.end(), std::make_move_iterator(slot.begin()),
                     std::make_move_iterator(slot.end()));
    }
    std::sort(nodes.begin(), nodes.end(),
              [](const TopologyNode& a, const TopologyNode& b) { return a.id < b.id; });
    return nodes;
}

std::vector<TopologyEdge> network_tp(const PropertyGraph& g, const std::vector<TopologyNode>& nodes,
                                     unsigned parallelism) {
    std::set<std::string> known_nodes;
    for (const auto& n : nodes) known_nodes.insert(n.id);

    std::vector<const Vertex*> devices;
    for (const auto& [id, v] : g.vertices()) {
        if (is_branch_device(v.kind)) devices.push_back(&v);
    }

    std::vector<std::optional<TopologyEdge>> slots(devices.size());
    parallel_chunks(devices.size(), parallelism, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const Vertex& device = *devices[i];
            if (!device.i_closed || !device.j_closed) continue;  // both ends must be in service
            const Vertex* i_node = g.find_vertex(device.i_node);
            const Vertex* j_node = g.find_vertex(device.j_node);
            if (!i_node || !j_node) {
                throw Error("network_tp: device '" + device.id + "' references missing end node");
            }
            if (i_node->label.empty() || j_node->label.empty()) {
                throw Error("network_tp: end node of device '" + device.id +
                            "' is unlabeled; substation processing incomplete");
            }
            TopologyEdge edge;
            edge.id = device.id;
            edge.device = device.id;
            edge.endpoints = {i_node->label, j_node->label};
            slots[i] = std::move(edge);
        }
    });

    std::vector<TopologyEdge> edges;
    for (auto& slot : slots) {
        if (!slot) continue;
        if (!known_nodes.count(slot->endpoints.first) || !known_nodes.count(slot->endpoints.second)) {
            throw Error("network_tp: edge '" + slot->id + "' references unknown topology node");
        }
        edges.push_back(std::move(*slot));
    }
    // devices iterate in id order already; keep the contract explicit
    std::sort(edges.begin(), edges.end(),
              [](const TopologyEdge& a, const TopologyEdge& b) { return a.device < b.device; });
    return edges;
}

std::vector<Island> compute_islands(BusBranchModel& m) {
    DisjointSet ds;
    for (const auto& n : m.nodes) ds.add(n.id);
    for (const auto& e : m.edges) ds.unite(e.endpoints.first, e.endpoints.second);

    std::map<std::string, const TopologyNode*> node_by_id;
    for (const auto& n : m.nodes) node_by_id.emplace(n.id, &n);

    std::vector<Island> islands;
    std::map<std::string, bool> energized_by_node;
    for (auto& group : ds.groups()) {
        Island island;
        island.id = group.front();
        island.energized = std::any_of(group.begin(), group.end(), [&](const std::string& id) {
            return node_by_id.at(id)->contains_generator;
        });
        for (const auto& id : group) energized_by_node[id] = island.energized;
        island.nodes = std::move(group);
        islands.push_back(std::move(island));
    }
    for (auto& n : m.nodes) n.energized = energized_by_node.count(n.id) ? energized_by_node[n.id] : false;
    m.islands = islands;
    return islands;
}

BusBranchModel run_ntp(PropertyGraph& g, unsigned parallelism) {
    using clock = std::chrono::steady_clock;
    auto ms_since = [](clock::time_point start) {
        return std::chrono::duration<double, std::milli>(clock::now() - start).count();
    };

    BusBranchModel model;
    auto t0 = clock::now();
    model.nodes = substation_tp(g, parallelism);
    model.timing.substation_ms = ms_since(t0);

    auto t1 = clock::now();
    model.edges = network_tp(g, model.nodes, parallelism);
    model.timing.network_ms = ms_since(t1);

    auto t2 = clock::now();
    compute_islands(model);
    model.timing.island_ms = ms_since(t2);
    return model;
}

Partition oracle_partition(const GridModel& model) {
    auto node_substation = infer_node_substations(model);
    DisjointSet ds;
    for (const auto& nd : model.connectivity_nodes) {
        if (node_substation.count(nd)) ds.add(connectivity_vertex_id(nd));
    }
    auto add_single = [&](const std::vector<SingleEndedRecord>& records, VertexKind kind) {
        for (const auto& r : records) {
            std::string vid = device_vertex_id(kind, r.id);
            ds.add(vid);
            auto st = node_substation.find(r.nd);
            if (st != node_substation.end() && st->second == r.substation) {
                ds.unite(vid, connectivity_vertex_id(r.nd));
            }
        }
    };
    add_single(model.bus_bars, VertexKind::busbar);
    add_single(model.generators, VertexKind::generator);
    add_single(model.loads, VertexKind::load);
    add_single(model.compensators_p, VertexKind::compensator_p);

    auto add_switches = [&](const std::vector<SwitchRecord>& records) {
        for (const auto& r : records) {
            if (!r.closed) continue;
            auto i = node_substation.find(r.i_nd);
            auto j = node_substation.find(r.j_nd);
            if (i != node_substation.end() && j != node_substation.end() && i->second == j->second) {
                ds.unite(connectivity_vertex_id(r.i_nd), connectivity_vertex_id(r.j_nd));
            }
        }
    };
    add_switches(model.breakers);
    add_switches(model.disconnectors);

    return Partition{ds.groups()};
}

Partition to_partition(const std::vector<TopologyNode>& nodes) {
    Partition p;
    p.groups.reserve(nodes.size());
    for (const auto& n : nodes) p.groups.push_back(n.members);
    std::sort(p.groups.begin(), p.groups.end());
    return p;
}

}  // namespace cimgraph
