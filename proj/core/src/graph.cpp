#include "cimgraph/graph.hpp"

#include <algorithm>
#include <set>

#include "cimgraph/error.hpp"

namespace cimgraph {

std::string_view to_string(Strategy s) { return s == Strategy::A ? "A" : "B"; }

std::string_view to_string(VertexKind k) {
    switch (k) {
        case VertexKind::connectivity_node: return "connectivity_node";
        case VertexKind::busbar: return "busbar";
        case VertexKind::generator: return "generator";
        case VertexKind::load: return "load";
        case VertexKind::compensator_p: return "compensator_p";
        case VertexKind::breaker: return "breaker";
        case VertexKind::disconnector: return "disconnector";
        case VertexKind::ac_line: return "ac_line";
        case VertexKind::transformer: return "transformer";
        case VertexKind::compensator_s: return "compensator_s";
        case VertexKind::dc_link: return "dc_link";
    }
    return "?";
}

std::string_view to_string(EdgeKind k) {
    switch (k) {
        case EdgeKind::plain_connection: return "plain_connection";
        case EdgeKind::breaker: return "breaker";
        case EdgeKind::disconnector: return "disconnector";
    }
    return "?";
}

bool is_switch(VertexKind k) {
    return k == VertexKind::breaker || k == VertexKind::disconnector;
}

bool is_branch_device(VertexKind k) {
    return k == VertexKind::ac_line || k == VertexKind::transformer ||
           k == VertexKind::compensator_s || k == VertexKind::dc_link;
}

bool is_topology_member(VertexKind k) {
    return k == VertexKind::connectivity_node || k == VertexKind::busbar ||
           k == VertexKind::generator || k == VertexKind::load ||
           k == VertexKind::compensator_p;
}

std::string connectivity_vertex_id(const NodeId& nd) { return "nd/" + nd; }

std::string device_vertex_id(VertexKind kind, const std::string& record_id) {
    return std::string(to_string(kind)) + "/" + record_id;
}

const Vertex* PropertyGraph::find_vertex(const std::string& id) const {
    auto it = vertices_.find(id);
    return it == vertices_.end() ? nullptr : &it->second;
}

const Edge* PropertyGraph::find_edge(const std::string& id) const {
    auto it = edges_.find(id);
    return it == edges_.end() ? nullptr : &it->second;
}

const PropertyGraph::Adjacency& PropertyGraph::neighbors(const std::string& vertex_id) const {
    static const Adjacency empty;
    auto it = adjacency_.find(vertex_id);
    return it == adjacency_.end() ? empty : it->second;
}

void PropertyGraph::add_vertex(Vertex v) {
    if (v.id.empty()) throw Error("add_vertex: empty id");
    if (!vertices_.emplace(v.id, v).second) throw Error("add_vertex: duplicate id '" + v.id + "'");
    adjacency_.emplace(v.id, Adjacency{});
}

void PropertyGraph::add_edge(Edge e) {
    if (e.id.empty()) throw Error("add_edge: empty id");
    if (edges_.count(e.id)) throw Error("add_edge: duplicate id '" + e.id + "'");
    if (!vertices_.count(e.endpoints.first)) {
        throw Error("add_edge '" + e.id + "': unknown endpoint '" + e.endpoints.first + "'");
    }
    if (!vertices_.count(e.endpoints.second)) {
        throw Error("add_edge '" + e.id + "': unknown endpoint '" + e.endpoints.second + "'");
    }
    adjacency_[e.endpoints.first].emplace_back(e.id, e.endpoints.second);
    adjacency_[e.endpoints.second].emplace_back(e.id, e.endpoints.first);
    edges_.emplace(e.id, std::move(e));
}

void PropertyGraph::remove_vertex(const std::string& id) {
    auto it = vertices_.find(id);
    if (it == vertices_.end()) throw Error("remove_vertex: unknown id '" + id + "'");
    // Copy: remove_edge mutates the adjacency list we are walking.
    Adjacency incident = adjacency_[id];
    for (const auto& [eid, neighbor] : incident) remove_edge(eid);
    adjacency_.erase(id);
    vertices_.erase(it);
}

void PropertyGraph::remove_edge(const std::string& id) {
    auto it = edges_.find(id);
    if (it == edges_.end()) throw Error("remove_edge: unknown id '" + id + "'");
    auto detach = [&](const std::string& vid) {
        auto& adj = adjacency_[vid];
        adj.erase(std::remove_if(adj.begin(), adj.end(),
                                 [&](const auto& entry) { return entry.first == id; }),
                  adj.end());
    };
    detach(it->second.endpoints.first);
    detach(it->second.endpoints.second);
    edges_.erase(it);
}

void PropertyGraph::set_switch_status(const std::string& id, bool closed) {
    if (auto v = vertices_.find(id); v != vertices_.end()) {
        if (!is_switch(v->second.kind)) {
            throw Error("set_switch_status: '" + id + "' is not a switch (kind " +
                        std::string(to_string(v->second.kind)) + ")");
        }
        v->second.closed = closed;
        return;
    }
    if (auto e = edges_.find(id); e != edges_.end()) {
        if (e->second.kind == EdgeKind::plain_connection) {
            throw Error("set_switch_status: edge '" + id + "' is not a switch");
        }
        e->second.closed = closed;
        return;
    }
    throw Error("set_switch_status: unknown id '" + id + "'");
}

void PropertyGraph::set_label(const std::string& vertex_id, std::string label) {
    auto it = vertices_.find(vertex_id);
    if (it == vertices_.end()) throw Error("set_label: unknown vertex '" + vertex_id + "'");
    it->second.label = std::move(label);
}

void PropertyGraph::clear_labels() {
    for (auto& [id, v] : vertices_) v.label.clear();
}

GraphStats PropertyGraph::stats() const {
    GraphStats s;
    s.vertex_count = vertices_.size();
    s.edge_count = edges_.size();
    std::set<std::string> substations;
    for (const auto& [id, v] : vertices_) {
        if (is_switch(v.kind)) ++s.switch_count;
        if (!v.substation.empty()) substations.insert(v.substation);
    }
    for (const auto& [id, e] : edges_) {
        if (e.kind != EdgeKind::plain_connection) ++s.switch_count;
    }
    s.substation_count = substations.size();
    return s;
}

GraphStats stats(const PropertyGraph& g) { return g.stats(); }

namespace {

struct Builder {
    const GridModel& model;
    PropertyGraph& graph;
    std::map<NodeId, std::string> node_substation;

    void require_node(const NodeId& nd, const std::string& record_id) {
        if (!model.connectivity_nodes.count(nd)) {
            throw Error("graph build: record '" + record_id + "' references unknown connectivity node '" +
                        nd + "'");
        }
    }

    void add_connectivity_vertices() {
        for (const auto& nd : model.connectivity_nodes) {
            Vertex v;
            v.id = connectivity_vertex_id(nd);
            v.kind = VertexKind::connectivity_node;
            auto st = node_substation.find(nd);
            if (st != node_substation.end()) v.substation = st->second;
            graph.add_vertex(std::move(v));
        }
    }

    void connect(const std::string& device_vid, const NodeId& nd, const char* end) {
        Edge e;
        e.id = "e/" + device_vid + end;
        e.endpoints = {device_vid, connectivity_vertex_id(nd)};
        e.kind = EdgeKind::plain_connection;
        graph.add_edge(std::move(e));
    }

    void add_single_ended(const std::vector<SingleEndedRecord>& records, VertexKind kind) {
        for (const auto& r : records) {
            require_node(r.nd, r.id);
            Vertex v;
            v.id = device_vertex_id(kind, r.id);
            v.kind = kind;
            v.name = r.name;
            v.substation = r.substation;
            v.attrs = r.attrs;
            graph.add_vertex(v);
            connect(v.id, r.nd, "");
        }
    }

    void add_branches(const std::vector<TwoEndedBranchRecord>& records, VertexKind kind) {
        for (const auto& r : records) {
            require_node(r.i_nd, r.id);
            require_node(r.j_nd, r.id);
            Vertex v;
            v.id = device_vertex_id(kind, r.id);
            v.kind = kind;
            v.name = r.name;
            v.substation = r.substation;
            v.i_node = connectivity_vertex_id(r.i_nd);
            v.j_node = connectivity_vertex_id(r.j_nd);
            v.i_closed = r.i_closed;
            v.j_closed = r.j_closed;
            v.attrs = r.attrs;
            graph.add_vertex(v);
            connect(v.id, r.i_nd, "/i");
            connect(v.id, r.j_nd, "/j");
        }
    }

    void add_switches(const std::vector<SwitchRecord>& records, VertexKind vkind, EdgeKind ekind) {
        for (const auto& r : records) {
            require_node(r.i_nd, r.id);
            require_node(r.j_nd, r.id);
            if (graph.strategy() == Strategy::A) {
                Vertex v;
                v.id = device_vertex_id(vkind, r.id);
                v.kind = vkind;
                v.name = r.name;
                v.substation = r.substation;
                v.closed = r.closed;
                v.attrs = r.attrs;
                graph.add_vertex(v);
                connect(v.id, r.i_nd, "/i");
                connect(v.id, r.j_nd, "/j");
            } else {
                Edge e;
                e.id = device_vertex_id(vkind, r.id);
                e.endpoints = {connectivity_vertex_id(r.i_nd), connectivity_vertex_id(r.j_nd)};
                e.kind = ekind;
                e.closed = r.closed;
                graph.add_edge(std::move(e));
            }
        }
    }

    void run() {
        node_substation = infer_node_substations(model);
        add_connectivity_vertices();
        add_single_ended(model.bus_bars, VertexKind::busbar);
        add_single_ended(model.generators, VertexKind::generator);
        add_single_ended(model.loads, VertexKind::load);
        add_single_ended(model.compensators_p, VertexKind::compensator_p);
        add_branches(model.ac_lines, VertexKind::ac_line);
        add_branches(model.transformers, VertexKind::transformer);
        add_branches(model.compensators_s, VertexKind::compensator_s);
        add_branches(model.dc_lines, VertexKind::dc_link);
        add_switches(model.breakers, VertexKind::breaker, EdgeKind::breaker);
        add_switches(model.disconnectors, VertexKind::disconnector, EdgeKind::disconnector);
    }
};

}  // namespace

PropertyGraph build_graph(const GridModel& model, Strategy strategy) {
    PropertyGraph g(strategy);
    Builder{model, g, {}}.run();
    return g;
}

PropertyGraph build_vertex_graph(const GridModel& model) { return build_graph(model, Strategy::A); }

PropertyGraph build_mixed_graph(const GridModel& model) { return build_graph(model, Strategy::B); }

}  // namespace cimgraph
