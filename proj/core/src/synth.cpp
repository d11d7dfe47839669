#include "cimgraph/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "cimgraph/error.hpp"

namespace cimgraph {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

bool parse_flag(const std::string& token, const std::string& context) {
    if (token == "1") return true;
    if (token == "0") return false;
    throw Error("case file: " + context + ": expected 0 or 1, got '" + token + "'");
}

// Bounded draw via modulo; bias is irrelevant here, determinism is not.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
    return n == 0 ? 0 : rng() % n;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

SwitchKind parse_switch_kind(const std::string& token, int line_no) {
    if (token == "breaker") return SwitchKind::breaker;
    if (token == "disconnector") return SwitchKind::disconnector;
    throw Error("template line " + std::to_string(line_no) + ": unknown switch kind '" + token + "'");
}

}  // namespace

BusBranchCase load_case(std::string_view text) {
    BusBranchCase c;
    c.name = "case";
    std::set<std::string> bus_ids;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        const std::string& directive = tokens[0];
        if (directive == "case") {
            if (tokens.size() != 2) throw Error("case file line " + std::to_string(line_no) + ": expected 'case <name>'");
            c.name = tokens[1];
        } else if (directive == "bus") {
            if (tokens.size() != 4) {
                throw Error("case file line " + std::to_string(line_no) + ": expected 'bus <id> <gen> <load>'");
            }
            CaseBus bus;
            bus.id = tokens[1];
            if (!bus_ids.insert(bus.id).second) {
                throw Error("case file line " + std::to_string(line_no) + ": duplicate bus id '" + bus.id + "'");
            }
            bus.has_generator = parse_flag(tokens[2], "bus " + bus.id + " gen flag");
            bus.has_load = parse_flag(tokens[3], "bus " + bus.id + " load flag");
            c.buses.push_back(std::move(bus));
        } else if (directive == "branch") {
            if (tokens.size() != 4) {
                throw Error("case file line " + std::to_string(line_no) +
                            ": expected 'branch <from> <to> <line|transformer>'");
            }
            CaseBranch branch;
            branch.from = tokens[1];
            branch.to = tokens[2];
            if (tokens[3] == "line") branch.kind = CaseBranchKind::line;
            else if (tokens[3] == "transformer") branch.kind = CaseBranchKind::transformer;
            else throw Error("case file line " + std::to_string(line_no) + ": unknown branch kind '" + tokens[3] + "'");
            c.branches.push_back(std::move(branch));
        } else {
            throw Error("case file line " + std::to_string(line_no) + ": unknown directive '" + directive + "'");
        }
    }
    if (c.buses.empty()) throw Error("case file: no buses");
    for (const auto& b : c.branches) {
        if (!bus_ids.count(b.from)) throw Error("case file: branch references undeclared bus '" + b.from + "'");
        if (!bus_ids.count(b.to)) throw Error("case file: branch references undeclared bus '" + b.to + "'");
    }
    return c;
}

BusBranchCase load_case_file(const std::string& path) { return load_case(read_file(path)); }

std::string serialize_case(const BusBranchCase& c) {
    std::ostringstream out;
    out << "case " << c.name << "\n";
    for (const auto& b : c.buses) {
        out << "bus " << b.id << ' ' << (b.has_generator ? 1 : 0) << ' ' << (b.has_load ? 1 : 0) << "\n";
    }
    for (const auto& b : c.branches) {
        out << "branch " << b.from << ' ' << b.to << ' '
            << (b.kind == CaseBranchKind::line ? "line" : "transformer") << "\n";
    }
    return out.str();
}

SubstationTemplate SubstationTemplate::from_text(std::string_view text) {
    SubstationTemplate tmpl;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        auto strip = [](const std::string& s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        if (strip(line).empty()) continue;
        if (eq == std::string::npos) {
            throw Error("template line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        if (key == "bus_sections") {
            try {
                tmpl.bus_sections = std::stoi(value);
            } catch (const std::exception&) {
                tmpl.bus_sections = 0;
            }
            if (tmpl.bus_sections < 1) {
                throw Error("template line " + std::to_string(line_no) + ": bus_sections must be >= 1");
            }
        } else if (key == "branch_chain" || key == "device_chain") {
            std::vector<SwitchKind> chain;
            std::istringstream items(value);
            std::string item;
            while (std::getline(items, item, ',')) {
                item = strip(item);
                if (!item.empty()) chain.push_back(parse_switch_kind(item, line_no));
            }
            if (chain.empty()) {
                throw Error("template line " + std::to_string(line_no) + ": empty switch chain");
            }
            (key == "branch_chain" ? tmpl.branch_chain : tmpl.device_chain) = std::move(chain);
        } else {
            throw Error("template line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    return tmpl;
}

SubstationTemplate SubstationTemplate::from_file(const std::string& path) {
    return from_text(read_file(path));
}

namespace {

struct Synthesizer {
    const BusBranchCase& source;
    const SubstationTemplate& tmpl;
    std::mt19937_64 rng;
    GridModel model;

    std::string substation_id(const std::string& bus) const { return "sub_" + bus; }

    std::string bus_node(const std::string& bus, int section) const {
        if (tmpl.bus_sections == 1) return "nd_" + bus + "_bus";
        return "nd_" + bus + "_bus" + std::to_string(section);
    }

    NodeId node(std::string id) {
        model.connectivity_nodes.insert(id);
        return id;
    }

    void add_switch(SwitchKind kind, const std::string& id, const std::string& substation,
                    const NodeId& i_nd, const NodeId& j_nd) {
        SwitchRecord sw;
        sw.id = id;
        sw.name = id;
        sw.substation = substation;
        sw.i_nd = i_nd;
        sw.j_nd = j_nd;
        sw.closed = true;
        sw.kind = kind;
        (kind == SwitchKind::breaker ? model.breakers : model.disconnectors).push_back(std::move(sw));
    }

    // Chain of switches between the section bus bar node and `end`, with
    // intermediate nodes named <stem>_1.., switches named sw_<stem>_<k>.
    void add_chain(const std::vector<SwitchKind>& chain, const std::string& stem,
                   const std::string& bus, const NodeId& end) {
        int section = tmpl.bus_sections == 1 ? 0 : static_cast<int>(draw_below(rng, tmpl.bus_sections));
        NodeId previous = node(bus_node(bus, section));
        const std::string substation = substation_id(bus);
        for (std::size_t k = 0; k < chain.size(); ++k) {
            NodeId next = (k + 1 == chain.size()) ? end : node("nd_" + stem + "_" + std::to_string(k + 1));
            add_switch(chain[k], "sw_" + stem + "_" + std::to_string(k + 1), substation, previous, next);
            previous = next;
        }
    }

    void add_buses() {
        for (const auto& bus : source.buses) {
            PlainRecord sub;
            sub.id = substation_id(bus.id);
            sub.name = source.name + "/" + bus.id;
            model.substations.push_back(std::move(sub));

            for (int s = 0; s < tmpl.bus_sections; ++s) {
                SingleEndedRecord bb;
                bb.id = tmpl.bus_sections == 1 ? "bb_" + bus.id : "bb_" + bus.id + "_s" + std::to_string(s);
                bb.name = bb.id;
                bb.substation = substation_id(bus.id);
                bb.nd = node(bus_node(bus.id, s));
                bb.kind = SingleEndedKind::busbar;
                bb.attrs.emplace("kv", "138");
                model.bus_bars.push_back(std::move(bb));
            }
            // Adjacent sections joined by closed bus-tie breakers.
            for (int s = 0; s + 1 < tmpl.bus_sections; ++s) {
                add_switch(SwitchKind::breaker, "tie_" + bus.id + "_" + std::to_string(s + 1),
                           substation_id(bus.id), node(bus_node(bus.id, s)), node(bus_node(bus.id, s + 1)));
            }
        }
    }

    void add_device(const std::string& bus, const char* what, SingleEndedKind kind) {
        std::string stem = bus + "_" + what;
        SingleEndedRecord dev;
        dev.id = std::string(what) + "_" + bus;
        dev.name = dev.id;
        dev.substation = substation_id(bus);
        dev.nd = node("nd_" + stem);
        dev.kind = kind;
        add_chain(tmpl.device_chain, stem, bus, dev.nd);
        (kind == SingleEndedKind::generator ? model.generators : model.loads).push_back(std::move(dev));
    }

    void add_branches() {
        for (std::size_t i = 0; i < source.branches.size(); ++i) {
            const auto& branch = source.branches[i];
            const std::string ordinal = std::to_string(i + 1);
            const bool is_line = branch.kind == CaseBranchKind::line;
            TwoEndedBranchRecord rec;
            rec.id = (is_line ? "ln_" : "tr_") + ordinal;
            rec.name = rec.id;
            rec.kind = is_line ? BranchKind::ac_line : BranchKind::transformer;
            rec.i_nd = node("nd_" + ordinal + "_i");
            rec.j_nd = node("nd_" + ordinal + "_j");
            rec.i_closed = true;
            rec.j_closed = true;
            add_chain(tmpl.branch_chain, ordinal + "_i", branch.from, rec.i_nd);
            add_chain(tmpl.branch_chain, ordinal + "_j", branch.to, rec.j_nd);
            (is_line ? model.ac_lines : model.transformers).push_back(std::move(rec));
        }
    }

    GridModel run() {
        model.section_name = source.name;
        PlainRecord bv;
        bv.id = "bv_1";
        bv.name = "138kV";
        bv.attrs.emplace("kv", "138");
        model.base_voltages.push_back(std::move(bv));

        add_buses();
        add_branches();
        for (const auto& bus : source.buses) {
            if (bus.has_generator) add_device(bus.id, "gen", SingleEndedKind::generator);
            if (bus.has_load) add_device(bus.id, "load", SingleEndedKind::load);
        }
        return std::move(model);
    }
};

}  // namespace

GridModel synthesize_node_breaker(const BusBranchCase& c, const SubstationTemplate& tmpl,
                                  std::uint64_t seed) {
    if (c.buses.empty()) throw Error("synthesize_node_breaker: case has no buses");
    if (tmpl.branch_chain.empty() || tmpl.device_chain.empty()) {
        throw Error("synthesize_node_breaker: template chains must be non-empty");
    }
    if (tmpl.bus_sections < 1) throw Error("synthesize_node_breaker: bus_sections must be >= 1");
    Synthesizer synth{c, tmpl, std::mt19937_64(seed), {}};
    return synth.run();
}

GridModel perturb_switches(GridModel model, double fraction, std::uint64_t seed) {
    if (fraction < 0.0 || fraction > 1.0) {
        throw Error("perturb_switches: fraction must be in [0, 1]");
    }
    // The switchable population is every status that gates topology:
    // breaker/disconnector positions plus each branch end's in-service
    // flag (fraction 1 must sever every connection, including topology
    // edges).
    std::vector<bool*> flags;
    for (auto& r : model.breakers) flags.push_back(&r.closed);
    for (auto& r : model.disconnectors) flags.push_back(&r.closed);
    for (auto* list : {&model.ac_lines, &model.transformers, &model.compensators_s, &model.dc_lines}) {
        for (auto& r : *list) {
            flags.push_back(&r.i_closed);
            flags.push_back(&r.j_closed);
        }
    }
    const auto count = static_cast<std::uint64_t>(flags.size());
    const auto open_count = static_cast<std::uint64_t>(std::llround(fraction * static_cast<double>(count)));

    // Partial Fisher-Yates: the first open_count entries end up a uniform
    // sample of the population.
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order(flags.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::uint64_t i = 0; i < open_count; ++i) {
        std::uint64_t j = i + draw_below(rng, count - i);
        std::swap(order[i], order[j]);
        *flags[order[i]] = false;
    }
    return model;
}

BusBranchCase generate_case(std::size_t bus_count, std::uint64_t seed) {
    if (bus_count == 0) throw Error("generate_case: bus_count must be >= 1");
    std::mt19937_64 rng(seed);
    BusBranchCase c;
    c.name = "synthetic" + std::to_string(bus_count) + "s" + std::to_string(seed);

    int width = 1;
    for (std::size_t n = bus_count; n >= 10; n /= 10) ++width;
    auto bus_id = [&](std::size_t i) {
        std::string digits = std::to_string(i + 1);
        return "b" + std::string(width - digits.size(), '0') + digits;
    };

    for (std::size_t i = 0; i < bus_count; ++i) {
        CaseBus bus;
        bus.id = bus_id(i);
        bus.has_generator = i == 0 || draw_below(rng, 10) < 3;
        bus.has_load = draw_below(rng, 10) < 7;
        c.buses.push_back(std::move(bus));
    }
    auto branch_kind = [&]() {
        return draw_below(rng, 10) < 2 ? CaseBranchKind::transformer : CaseBranchKind::line;
    };
    // Spanning tree keeps the case a single island.
    for (std::size_t i = 1; i < bus_count; ++i) {
        c.branches.push_back({bus_id(draw_below(rng, i)), bus_id(i), branch_kind()});
    }
    const std::size_t extras = (bus_count * 6) / 10;
    for (std::size_t k = 0; k < extras; ++k) {
        std::size_t a = draw_below(rng, bus_count);
        std::size_t b = draw_below(rng, bus_count);
        if (a == b) b = (b + 1) % bus_count;
        c.branches.push_back({bus_id(a), bus_id(b), branch_kind()});
    }
    return c;
}

}  // namespace cimgraph
