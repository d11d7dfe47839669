#pragma once

// In-memory property graph over a GridModel, built under one of two
// mappings: strategy A models every object as a vertex; strategy B turns
// breakers and disconnectors into edges, everything else staying a
// vertex. Vertex and edge ids are record ids namespaced by type
// ("busbar/BB1", "nd/N7") so the fifteen tables cannot collide.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cimgraph/model.hpp"

namespace cimgraph {

enum class Strategy { A, B };

std::string_view to_string(Strategy s);

enum class VertexKind {
    connectivity_node,
    busbar,
    generator,
    load,
    compensator_p,
    breaker,        // strategy A only
    disconnector,   // strategy A only
    ac_line,
    transformer,
    compensator_s,
    dc_link,
};

enum class EdgeKind { plain_connection, breaker, disconnector };

std::string_view to_string(VertexKind k);
std::string_view to_string(EdgeKind k);

bool is_switch(VertexKind k);
bool is_branch_device(VertexKind k);
// Vertices that can join a topology node: connectivity nodes and
// single-ended devices.
bool is_topology_member(VertexKind k);

struct Vertex {
    std::string id;
    VertexKind kind = VertexKind::connectivity_node;
    std::string name;
    std::string substation;          // empty = none
    std::optional<bool> closed;      // switch kinds only
    // Branch devices only: end connectivity-node vertex ids and statuses.
    std::string i_node, j_node;
    bool i_closed = false, j_closed = false;
    std::string label;               // topology-node working field
    Attrs attrs;
};

struct Edge {
    std::string id;
    std::pair<std::string, std::string> endpoints;
    EdgeKind kind = EdgeKind::plain_connection;
    std::optional<bool> closed;      // breaker/disconnector edges only
};

struct GraphStats {
    std::size_t vertex_count = 0;
    std::size_t edge_count = 0;
    std::size_t switch_count = 0;
    std::size_t substation_count = 0;

    bool operator==(const GraphStats&) const = default;
};

// Structure is read-only during topology processing; only vertex labels
// and switch statuses are written, and those writes are partitioned so
// threads never share a vertex. Structural mutations (add/remove) need
// exclusive access.
class PropertyGraph {
public:
    using Adjacency = std::vector<std::pair<std::string, std::string>>;  // (edge id, neighbor)

    explicit PropertyGraph(Strategy strategy = Strategy::A) : strategy_(strategy) {}

    Strategy strategy() const { return strategy_; }
    const std::map<std::string, Vertex>& vertices() const { return vertices_; }
    const std::map<std::string, Edge>& edges() const { return edges_; }

    const Vertex* find_vertex(const std::string& id) const;
    const Edge* find_edge(const std::string& id) const;
    const Adjacency& neighbors(const std::string& vertex_id) const;

    void add_vertex(Vertex v);                       // throws on duplicate id
    void add_edge(Edge e);                           // throws on duplicate/unknown endpoints
    void remove_vertex(const std::string& id);       // removes incident edges
    void remove_edge(const std::string& id);

    // Flips the status of the switch vertex (A) or switch edge (B).
    // Throws on unknown ids and on ids that name a non-switch.
    void set_switch_status(const std::string& id, bool closed);

    void set_label(const std::string& vertex_id, std::string label);
    void clear_labels();

    GraphStats stats() const;

private:
    Strategy strategy_;
    std::map<std::string, Vertex> vertices_;
    std::map<std::string, Edge> edges_;
    std::map<std::string, Adjacency> adjacency_;

    friend PropertyGraph build_graph(const GridModel&, Strategy);
};

// Namespaced vertex id helpers.
std::string connectivity_vertex_id(const NodeId& nd);
std::string device_vertex_id(VertexKind kind, const std::string& record_id);

// Strategy A: every object a vertex, one plain edge per (object, nd) pair.
PropertyGraph build_vertex_graph(const GridModel& model);
// Strategy B: like A, except each breaker/disconnector becomes one edge.
PropertyGraph build_mixed_graph(const GridModel& model);
PropertyGraph build_graph(const GridModel& model, Strategy strategy);

GraphStats stats(const PropertyGraph& g);

}  // namespace cimgraph
