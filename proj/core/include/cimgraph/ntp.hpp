#pragma once

// Network topology processing: node-breaker to bus-branch conversion.
//
// Phase one works per substation (substation topology is independent):
// breadth-first traversal from bus bars through closed switches collects
// connectivity nodes and single-ended devices into topology nodes. Branch
// devices (lines, transformers, series devices, DC links) block
// traversal; phase two turns each of them whose both ends are in service
// into a topology edge between the nodes found in phase one. Islands are
// the connected components of the result.
//
// All ids are canonical (a topology node is named by its minimum member
// vertex id), so results do not depend on traversal order, thread count
// or strategy.

#include <string>
#include <vector>

#include "cimgraph/graph.hpp"

namespace cimgraph {

struct TopologyNode {
    std::string id;  // minimum member vertex id, lexicographic
    std::string substation;
    std::vector<std::string> members;  // sorted vertex ids
    bool contains_busbar = false;
    bool contains_generator = false;
    bool energized = false;  // set by island analysis

    bool operator==(const TopologyNode&) const = default;
};

struct TopologyEdge {
    std::string id;       // = device vertex id
    std::string device;   // branch device vertex id
    std::pair<std::string, std::string> endpoints;  // topology node ids

    bool operator==(const TopologyEdge&) const = default;
};

struct Island {
    std::string id;  // minimum member topology-node id
    std::vector<std::string> nodes;  // sorted topology node ids
    bool energized = false;

    bool operator==(const Island&) const = default;
};

struct PhaseTimings {
    double substation_ms = 0.0;
    double network_ms = 0.0;
    double island_ms = 0.0;
};

struct BusBranchModel {
    std::vector<TopologyNode> nodes;    // sorted by id
    std::vector<TopologyEdge> edges;    // sorted by device id
    std::vector<Island> islands;        // sorted by id
    PhaseTimings timing;
};

// Oracle output: the traversable vertex population partitioned into
// groups, each group sorted, groups sorted by first member.
struct Partition {
    std::vector<std::vector<std::string>> groups;

    bool operator==(const Partition&) const = default;
};

// Phase one. `parallelism` is a thread-count hint (0 = auto). Labels
// every topology-member vertex in g with its topology-node id. Throws if
// a member vertex has no substation.
std::vector<TopologyNode> substation_tp(PropertyGraph& g, unsigned parallelism = 0);

// Phase two. Requires substation_tp to have labeled every connectivity
// node; throws when a referenced end node carries no label.
std::vector<TopologyEdge> network_tp(const PropertyGraph& g,
                                     const std::vector<TopologyNode>& nodes,
                                     unsigned parallelism = 0);

// Connected components of the (nodes, edges) graph. Fills m.islands and
// sets the energized flag on islands and nodes.
std::vector<Island> compute_islands(BusBranchModel& m);

// substation_tp + network_tp + compute_islands with per-phase timings.
BusBranchModel run_ntp(PropertyGraph& g, unsigned parallelism = 0);

// Independent correctness oracle: union-find over connectivity nodes and
// single-ended devices, straight from the GridModel records, never
// touching the property graph. Closed switches whose two ends sit in the
// same substation merge their nodes.
Partition oracle_partition(const GridModel& model);

// Topology-node member sets as a Partition, for oracle comparison.
Partition to_partition(const std::vector<TopologyNode>& nodes);

}  // namespace cimgraph
