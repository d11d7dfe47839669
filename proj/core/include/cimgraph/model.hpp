#pragma once

// Typed grid model bound from the raw CIM/E tables, plus the deduplicated
// connectivity-node set. Electrical parameters are carried as opaque
// strings; only connectivity and switch status are interpreted.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cimgraph/cime.hpp"

namespace cimgraph {

using NodeId = std::string;            // the CIM/E `nd` value, exact match
using Attrs = std::map<std::string, std::string>;  // pass-through columns

enum class SwitchKind { breaker, disconnector };
enum class SingleEndedKind { busbar, generator, load, compensator_p };
enum class BranchKind { ac_line, transformer, compensator_s, dc_link };

std::string_view to_string(SwitchKind k);
std::string_view to_string(SingleEndedKind k);
std::string_view to_string(BranchKind k);

struct SwitchRecord {
    std::string id;
    std::string name;
    std::string substation;
    NodeId i_nd;
    NodeId j_nd;
    bool closed = false;
    SwitchKind kind = SwitchKind::breaker;
    Attrs attrs;
};

// Bus bar, generator, load, compensator_P: connectivity nodes with a
// single side connection.
struct SingleEndedRecord {
    std::string id;
    std::string name;
    std::string substation;
    NodeId nd;
    SingleEndedKind kind = SingleEndedKind::busbar;
    Attrs attrs;
};

struct TwoEndedBranchRecord {
    std::string id;
    std::string name;
    NodeId i_nd;
    NodeId j_nd;
    bool i_closed = true;
    bool j_closed = true;
    BranchKind kind = BranchKind::ac_line;
    std::string substation;  // empty for inter-substation lines
    Attrs attrs;
};

// Rows kept only for pass-through or cross-validation (base voltage,
// substation, converter, island, toponode).
struct PlainRecord {
    std::string id;
    std::string name;
    Attrs attrs;
};

struct GridModel {
    std::vector<PlainRecord> base_voltages;
    std::vector<PlainRecord> substations;
    std::vector<SingleEndedRecord> bus_bars;
    std::vector<TwoEndedBranchRecord> ac_lines;
    std::vector<SingleEndedRecord> generators;
    std::vector<TwoEndedBranchRecord> transformers;
    std::vector<SingleEndedRecord> loads;
    std::vector<SingleEndedRecord> compensators_p;
    std::vector<TwoEndedBranchRecord> compensators_s;
    std::vector<PlainRecord> converters;
    std::vector<TwoEndedBranchRecord> dc_lines;
    std::vector<PlainRecord> islands;    // input table, cross-validation only
    std::vector<PlainRecord> toponodes;  // input table, cross-validation only
    std::vector<SwitchRecord> breakers;
    std::vector<SwitchRecord> disconnectors;
    std::set<NodeId> connectivity_nodes;
    std::vector<ClassTable> extra_tables;  // unrecognized, pass-through
    std::string section_name;              // from the source tables

    std::size_t switch_count() const { return breakers.size() + disconnectors.size(); }
};

struct ValidationIssue {
    std::string record_id;
    std::string message;
    Severity severity = Severity::error;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const;  // no error-severity issues
    std::size_t error_count() const;
    std::size_t warning_count() const;
};

// Column names used to bind each class table. Only `nd` is stable
// across real exports; everything else is configurable as
// `Class.field = column` lines. Fields: id, name, st, nd, i_nd, j_nd,
// point (switch status, "1" = closed), i_off/j_off ("0" = in service),
// k_nd/k_off (optional third transformer winding).
class AttributeMapping {
public:
    static AttributeMapping defaults();
    // One `Class.field = column` entry per line; '#' comments allowed.
    static AttributeMapping from_text(std::string_view text);
    static AttributeMapping from_file(const std::string& path);

    const std::string& column(std::string_view class_name, std::string_view field) const;
    void set(std::string_view class_name, std::string_view field, std::string_view column);

private:
    // class -> field -> column; "" class holds the defaults
    std::map<std::string, std::map<std::string, std::string>> overrides_;
    std::map<std::string, std::string> defaults_;
};

// Canonical class names recognized by bind_model, in table order.
const std::vector<std::string>& cime_class_names();

struct BindResult {
    GridModel model;
    ValidationReport report;
};

// Bind every recognized table of `doc` into typed records; unrecognized
// tables are retained opaquely. connectivity_nodes is the deduplicated
// union of all nd columns.
BindResult bind_model(const RawDocument& doc, const AttributeMapping& mapping = AttributeMapping::defaults());

// Inverse of bind_model over the typed fields: emits one canonical table
// per populated record list plus the retained extra tables.
RawDocument unbind_model(const GridModel& model, const AttributeMapping& mapping = AttributeMapping::defaults());

// Deterministic (lexicographically sorted) deduplicated list of every
// NodeId referenced anywhere in the model.
std::vector<NodeId> collect_connectivity_nodes(const GridModel& model);

// Checks the GridModel invariants plus substation membership rules.
ValidationReport validate(const GridModel& model);

// Substation of each connectivity node, inferred from the single-ended
// devices and switches that reference it. Nodes referenced only by branch
// devices stay unassigned; conflicting claims keep the first and are
// reported by validate().
std::map<NodeId, std::string> infer_node_substations(const GridModel& model);

}  // namespace cimgraph
