#pragma once

// Node-breaker synthesis: expands a plain bus-branch test case (IEEE 14,
// IEEE 118, generated) into a full GridModel using a configurable
// substation template, so topology processing can be exercised and
// checked against the source case.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cimgraph/model.hpp"

namespace cimgraph {

enum class CaseBranchKind { line, transformer };

struct CaseBus {
    std::string id;
    bool has_generator = false;
    bool has_load = false;

    bool operator==(const CaseBus&) const = default;
};

struct CaseBranch {
    std::string from;
    std::string to;
    CaseBranchKind kind = CaseBranchKind::line;

    bool operator==(const CaseBranch&) const = default;
};

struct BusBranchCase {
    std::string name;
    std::vector<CaseBus> buses;
    std::vector<CaseBranch> branches;

    bool operator==(const BusBranchCase&) const = default;
};

// Case file format, one record per line, '#' comments:
//   case <name>
//   bus <id> <has_generator:0|1> <has_load:0|1>
//   branch <from> <to> <line|transformer>
// Throws Error on duplicate bus ids and branches referencing undeclared
// buses.
BusBranchCase load_case(std::string_view text);
BusBranchCase load_case_file(const std::string& path);
std::string serialize_case(const BusBranchCase& c);

// Switch chains are listed from the bus bar outward.
struct SubstationTemplate {
    std::vector<SwitchKind> branch_chain{SwitchKind::disconnector, SwitchKind::breaker,
                                         SwitchKind::disconnector};
    std::vector<SwitchKind> device_chain{SwitchKind::breaker, SwitchKind::disconnector};
    int bus_sections = 1;

    // Key-value config: branch_chain / device_chain as comma-separated
    // kind lists, bus_sections as an integer.
    static SubstationTemplate from_text(std::string_view text);
    static SubstationTemplate from_file(const std::string& path);
};

// One substation and bus bar per bus (one per bus section); every branch
// end expands to the branch chain between bus bar and the device's end
// node, every generator/load attaches through the device chain. All
// switches closed, all branch ends in service. Ids derive from the case
// name, bus ids and branch ordinals only, so output is deterministic;
// the seed feeds bus-section assignment when bus_sections > 1.
GridModel synthesize_node_breaker(const BusBranchCase& c,
                                  const SubstationTemplate& tmpl = SubstationTemplate{},
                                  std::uint64_t seed = 0);

// Opens a uniformly random subset of the switchable statuses — breaker
// and disconnector positions plus branch-end in-service flags —
// round(fraction * population) of them, deterministically under the
// seed. fraction 0 is the identity, fraction 1 opens everything.
GridModel perturb_switches(GridModel model, double fraction, std::uint64_t seed);

// Random connected case for scale tests: bus_count buses, a spanning
// tree plus ~0.6 * bus_count extra branches, deterministic under seed.
BusBranchCase generate_case(std::size_t bus_count, std::uint64_t seed);

}  // namespace cimgraph
