#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cimgraph/error.hpp"
#include "cimgraph/graph.hpp"
#include "cimgraph/ntp.hpp"
#include "cimgraph/synth.hpp"
#include "support/helpers.hpp"

using namespace cimgraph;
namespace ts = testing_support;

namespace {

// BB1 -(closed breaker)- N1 with load L1, BB1 -(open disconnector)- N2
// with generator G1, all in substation S1.
GridModel forked_substation_model() {
    GridModel m;
    m.substations.push_back({"S1", "S1", {}});
    SingleEndedRecord bb{"BB1", "BB1", "S1", "NB", SingleEndedKind::busbar, {}};
    m.bus_bars.push_back(bb);
    SwitchRecord brk{"BRK", "BRK", "S1", "NB", "N1", true, SwitchKind::breaker, {}};
    m.breakers.push_back(brk);
    SingleEndedRecord load{"L1", "L1", "S1", "N1", SingleEndedKind::load, {}};
    m.loads.push_back(load);
    SwitchRecord dis{"DIS", "DIS", "S1", "NB", "N2", false, SwitchKind::disconnector, {}};
    m.disconnectors.push_back(dis);
    SingleEndedRecord gen{"G1", "G1", "S1", "N2", SingleEndedKind::generator, {}};
    m.generators.push_back(gen);
    m.connectivity_nodes = {"NB", "N1", "N2"};
    return m;
}

Partition run_substation_partition(const GridModel& m, Strategy strategy, unsigned parallelism = 0) {
    auto g = build_graph(m, strategy);
    return to_partition(substation_tp(g, parallelism));
}

}  // namespace

TEST_CASE("closed and open switches split the fixture into two topology nodes") {
    auto model = forked_substation_model();
    Partition expected;
    expected.groups = {{"busbar/BB1", "load/L1", "nd/N1", "nd/NB"}, {"generator/G1", "nd/N2"}};
    std::sort(expected.groups.begin(), expected.groups.end());
    for (Strategy strategy : {Strategy::A, Strategy::B}) {
        CAPTURE(to_string(strategy));
        auto got = run_substation_partition(model, strategy);
        CHECK(got == expected);
        CHECK(got == oracle_partition(model));
    }
}

TEST_CASE("a substation holding only one bus bar forms one topology node") {
    GridModel m;
    m.substations.push_back({"S1", "S1", {}});
    m.bus_bars.push_back({"BB1", "BB1", "S1", "N1", SingleEndedKind::busbar, {}});
    m.connectivity_nodes = {"N1"};
    auto g = build_vertex_graph(m);
    auto nodes = substation_tp(g);
    REQUIRE(nodes.size() == 1);
    CHECK(nodes[0].members == std::vector<std::string>{"busbar/BB1", "nd/N1"});
    CHECK(nodes[0].id == "busbar/BB1");
    CHECK(nodes[0].contains_busbar);
}

TEST_CASE("two bus bars joined by a closed bus tie merge into one node") {
    GridModel m;
    m.substations.push_back({"S1", "S1", {}});
    m.bus_bars.push_back({"BB1", "BB1", "S1", "N1", SingleEndedKind::busbar, {}});
    m.bus_bars.push_back({"BB2", "BB2", "S1", "N2", SingleEndedKind::busbar, {}});
    m.breakers.push_back({"TIE", "TIE", "S1", "N1", "N2", true, SwitchKind::breaker, {}});
    m.connectivity_nodes = {"N1", "N2"};
    for (Strategy strategy : {Strategy::A, Strategy::B}) {
        auto got = run_substation_partition(m, strategy);
        CHECK(got.groups.size() == 1);
        CHECK(got == oracle_partition(m));
    }
    // Open tie: two nodes.
    m.breakers[0].closed = false;
    CHECK(run_substation_partition(m, Strategy::A).groups.size() == 2);
    CHECK(oracle_partition(m).groups.size() == 2);
}

TEST_CASE("substation_tp names the vertex that lacks a substation") {
    auto model = ts::three_device_model();
    model.loads[0].substation.clear();
    auto g = build_vertex_graph(model);
    CHECK_THROWS_WITH_AS(substation_tp(g), doctest::Contains("load/LD1"), Error);
}

TEST_CASE("network_tp emits an edge only when both ends are in service") {
    auto source = load_case("case two\nbus 1 1 0\nbus 2 0 1\nbranch 1 2 line\n");
    auto model = synthesize_node_breaker(source);
    for (bool j_closed : {true, false}) {
        auto variant = model;
        variant.ac_lines[0].j_closed = j_closed;
        auto g = build_mixed_graph(variant);
        auto nodes = substation_tp(g);
        auto edges = network_tp(g, nodes);
        if (j_closed) {
            REQUIRE(edges.size() == 1);
            CHECK(edges[0].device == "ac_line/ln_1");
            CHECK(edges[0].endpoints.first != edges[0].endpoints.second);
        } else {
            CHECK(edges.empty());
        }
    }
}

TEST_CASE("a branch whose ends share a topology node becomes a self-edge, kept") {
    // Line strung between two nodes of the same substation that a closed
    // tie already joins: both ends land in one topology node.
    GridModel m;
    m.substations.push_back({"S1", "S1", {}});
    m.bus_bars.push_back({"BB1", "BB1", "S1", "N1", SingleEndedKind::busbar, {}});
    m.bus_bars.push_back({"BB2", "BB2", "S1", "N2", SingleEndedKind::busbar, {}});
    m.breakers.push_back({"TIE", "TIE", "S1", "N1", "N2", true, SwitchKind::breaker, {}});
    TwoEndedBranchRecord line;
    line.id = "LOOP";
    line.kind = BranchKind::ac_line;
    line.i_nd = "N1";
    line.j_nd = "N2";
    m.ac_lines.push_back(line);
    m.connectivity_nodes = {"N1", "N2"};

    auto g = build_mixed_graph(m);
    auto result = run_ntp(g);
    REQUIRE(result.nodes.size() == 1);
    REQUIRE(result.edges.size() == 1);
    CHECK(result.edges[0].endpoints.first == result.edges[0].endpoints.second);
    CHECK(result.islands.size() == 1);
}

TEST_CASE("network_tp reports unlabeled end nodes") {
    auto source = load_case("case two\nbus 1 1 0\nbus 2 0 1\nbranch 1 2 line\n");
    auto model = synthesize_node_breaker(source);
    auto g = build_mixed_graph(model);
    auto nodes = substation_tp(g);
    g.clear_labels();  // simulate an incomplete phase one
    CHECK_THROWS_WITH_AS(network_tp(g, nodes), doctest::Contains("unlabeled"), Error);
}

TEST_CASE("islands: connected case is one island, cutting lines splits it") {
    auto source = load_case(
        "case three\nbus 1 1 0\nbus 2 0 1\nbus 3 0 1\n"
        "branch 1 2 line\nbranch 2 3 line\n");
    auto model = synthesize_node_breaker(source);
    {
        auto g = build_mixed_graph(model);
        auto result = run_ntp(g);
        REQUIRE(result.islands.size() == 1);
        CHECK(result.islands[0].energized);
        CHECK(result.islands[0].nodes.size() == 3);
    }
    // Take bus 3's line out of service at both ends: bus 3 islands alone,
    // carries only load, so it is de-energized.
    model.ac_lines[1].i_closed = false;
    model.ac_lines[1].j_closed = false;
    {
        auto g = build_mixed_graph(model);
        auto result = run_ntp(g);
        REQUIRE(result.islands.size() == 2);
        int energized = 0, dark = 0;
        for (const auto& island : result.islands) island.energized ? ++energized : ++dark;
        CHECK(energized == 1);
        CHECK(dark == 1);
        for (const auto& node : result.nodes) {
            bool in_dark_island = node.substation == "sub_3";
            CHECK(node.energized == !in_dark_island);
        }
    }
}

TEST_CASE("series compensators and DC links block traversal and become edges") {
    GridModel m;
    m.substations.push_back({"S1", "S1", {}});
    m.substations.push_back({"S2", "S2", {}});
    m.bus_bars.push_back({"BB1", "BB1", "S1", "N1", SingleEndedKind::busbar, {}});
    m.bus_bars.push_back({"BB2", "BB2", "S1", "N2", SingleEndedKind::busbar, {}});
    m.bus_bars.push_back({"BB3", "BB3", "S2", "N3", SingleEndedKind::busbar, {}});
    m.compensators_p.push_back({"CP1", "CP1", "S1", "N1", SingleEndedKind::compensator_p, {}});
    TwoEndedBranchRecord cs;
    cs.id = "CS1";
    cs.kind = BranchKind::compensator_s;
    cs.i_nd = "N1";
    cs.j_nd = "N2";
    m.compensators_s.push_back(cs);
    TwoEndedBranchRecord dc;
    dc.id = "DC1";
    dc.kind = BranchKind::dc_link;
    dc.i_nd = "N2";
    dc.j_nd = "N3";
    m.dc_lines.push_back(dc);
    m.connectivity_nodes = {"N1", "N2", "N3"};

    for (Strategy strategy : {Strategy::A, Strategy::B}) {
        auto g = build_graph(m, strategy);
        auto result = run_ntp(g);
        // The series devices do not merge their sides: three nodes.
        REQUIRE(result.nodes.size() == 3);
        CHECK(to_partition(result.nodes) == oracle_partition(m));
        // Both in-service branch devices appear as topology edges.
        REQUIRE(result.edges.size() == 2);
        CHECK(result.edges[0].device == "compensator_s/CS1");
        CHECK(result.edges[1].device == "dc_link/DC1");
        CHECK(result.islands.size() == 1);
    }
}

TEST_CASE("oracle handles the trivial switch configurations") {
    auto model = ts::three_device_model();
    auto p = oracle_partition(model);
    // One closed switch: bus bar, both nodes and the load in one group.
    CHECK(p.groups.size() == 1);

    model.breakers[0].closed = false;
    p = oracle_partition(model);
    REQUIRE(p.groups.size() == 2);
    CHECK(p.groups[0] == std::vector<std::string>{"busbar/BB1", "nd/N1"});
    CHECK(p.groups[1] == std::vector<std::string>{"load/LD1", "nd/N2"});
}

TEST_CASE("oracle equivalence over random switch configurations") {
    auto source = load_case_file(ts::data_file("ieee14.case").string());
    auto base = synthesize_node_breaker(source);
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        double fraction = (trial % 11) / 10.0;
        auto model = perturb_switches(base, fraction, rng());
        auto expected = oracle_partition(model);
        Strategy strategy = trial % 2 ? Strategy::A : Strategy::B;
        auto got = run_substation_partition(model, strategy, 1 + trial % 4);
        REQUIRE(got == expected);
    }
}

TEST_CASE("oracle equivalence holds over 1000 random ieee118 configurations") {
    auto source = load_case_file(ts::data_file("ieee118.case").string());
    auto base = synthesize_node_breaker(source);
    std::mt19937_64 rng(118118);
    for (int trial = 0; trial < 1000; ++trial) {
        double fraction = (trial % 101) / 100.0;
        auto model = perturb_switches(base, fraction, rng());
        auto expected = oracle_partition(model);
        Strategy strategy = trial % 2 ? Strategy::A : Strategy::B;
        auto got = run_substation_partition(model, strategy, 1 + trial % 8);
        REQUIRE(got == expected);
    }
}

TEST_CASE("run_ntp on an empty graph returns an empty model") {
    PropertyGraph g;
    auto result = run_ntp(g);
    CHECK(result.nodes.empty());
    CHECK(result.edges.empty());
    CHECK(result.islands.empty());
}

TEST_CASE("run_ntp on the three-device substation: one node, no edges, one island") {
    auto g = build_vertex_graph(ts::three_device_model());
    auto result = run_ntp(g);
    REQUIRE(result.nodes.size() == 1);
    CHECK(result.nodes[0].members ==
          std::vector<std::string>{"busbar/BB1", "load/LD1", "nd/N1", "nd/N2"});
    CHECK(result.edges.empty());
    REQUIRE(result.islands.size() == 1);
    CHECK_FALSE(result.islands[0].energized);  // loads only, no generator
}

TEST_CASE("IEEE-14 all closed recovers 14 nodes, 20 edges, one island") {
    auto source = load_case_file(ts::data_file("ieee14.case").string());
    auto model = synthesize_node_breaker(source);
    for (Strategy strategy : {Strategy::A, Strategy::B}) {
        auto g = build_graph(model, strategy);
        auto result = run_ntp(g);
        CHECK(result.nodes.size() == 14);
        CHECK(result.edges.size() == 20);
        REQUIRE(result.islands.size() == 1);
        CHECK(result.islands[0].energized);
    }
}

TEST_CASE("recovered bus-branch graph is isomorphic to the source case") {
    auto source = load_case_file(ts::data_file("ieee14.case").string());
    auto model = synthesize_node_breaker(source);
    auto g = build_mixed_graph(model);
    auto result = run_ntp(g);

    // Substations are named after buses, and all-closed substations
    // collapse to one node each: node <-> bus is a bijection.
    std::map<std::string, std::string> bus_of_node;
    for (const auto& node : result.nodes) {
        REQUIRE(node.substation.starts_with("sub_"));
        bus_of_node[node.id] = node.substation.substr(4);
    }
    CHECK(bus_of_node.size() == source.buses.size());

    std::multiset<std::pair<std::string, std::string>> got, expected;
    for (const auto& e : result.edges) {
        auto a = bus_of_node.at(e.endpoints.first);
        auto b = bus_of_node.at(e.endpoints.second);
        got.insert({std::min(a, b), std::max(a, b)});
    }
    for (const auto& b : source.branches) {
        expected.insert({std::min(b.from, b.to), std::max(b.from, b.to)});
    }
    CHECK(got == expected);
}

TEST_CASE("results are identical across parallelism levels and strategies") {
    auto source = load_case_file(ts::data_file("ieee14.case").string());
    auto base = synthesize_node_breaker(source);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        auto model = perturb_switches(base, 0.25, rng());
        std::vector<BusBranchModel> results;
        for (Strategy strategy : {Strategy::A, Strategy::B}) {
            for (unsigned parallelism : {1u, 2u, 0u}) {
                auto g = build_graph(model, strategy);
                results.push_back(run_ntp(g, parallelism));
            }
        }
        for (std::size_t i = 1; i < results.size(); ++i) {
            CHECK(results[i].nodes == results[0].nodes);
            CHECK(results[i].edges == results[0].edges);
            CHECK(results[i].islands == results[0].islands);
        }
    }
}

TEST_CASE("closing switches never increases the node count, opening never decreases") {
    auto source = load_case_file(ts::data_file("ieee14.case").string());
    auto base = synthesize_node_breaker(source);
    std::mt19937_64 rng(11);
    auto node_count = [](const GridModel& m) {
        auto g = build_mixed_graph(m);
        return substation_tp(g).size();
    };
    for (int trial = 0; trial < 25; ++trial) {
        auto model = perturb_switches(base, 0.5, rng());
        auto switches = [&]() {
            std::vector<SwitchRecord*> all;
            for (auto& s : model.breakers) all.push_back(&s);
            for (auto& s : model.disconnectors) all.push_back(&s);
            return all;
        }();
        auto before = node_count(model);
        SwitchRecord* target = switches[rng() % switches.size()];
        bool was_closed = target->closed;
        target->closed = !was_closed;
        auto after = node_count(model);
        if (was_closed) {
            CHECK(after >= before);  // opened one switch
        } else {
            CHECK(after <= before);  // closed one switch
        }
    }
}

TEST_CASE("fraction-one perturbation yields zero topology edges") {
    auto source = load_case_file(ts::data_file("ieee14.case").string());
    auto model = perturb_switches(synthesize_node_breaker(source), 1.0, 3);
    auto g = build_mixed_graph(model);
    auto result = run_ntp(g);
    CHECK(result.edges.empty());  // every end status open, both-closed rule
    CHECK(to_partition(result.nodes) == oracle_partition(model));
    // No bus bar can reach anything through an open switch: every group
    // is a lone node or a node plus its directly attached devices.
    for (const auto& node : result.nodes) {
        std::size_t nds = 0;
        for (const auto& m : node.members) nds += m.starts_with("nd/") ? 1 : 0;
        CHECK(nds <= 1);
    }
}
