#include "cimgraph/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cimgraph/error.hpp"

namespace cimgraph {

namespace {

// Canonical null token: the format cannot represent empty fields (runs of
// whitespace collapse), so canonical tables write "-" for absent values
// and the binder maps "-" back to the empty string.
constexpr std::string_view kNull = "-";

constexpr std::string_view kBaseVoltage = "BaseVoltage";
constexpr std::string_view kSubstation = "Substation";
constexpr std::string_view kBus = "Bus";
constexpr std::string_view kACline = "ACline";
constexpr std::string_view kGenerator = "Generator";
constexpr std::string_view kTransformer = "Transformer";
constexpr std::string_view kLoad = "Load";
constexpr std::string_view kCompensatorP = "Compensator_P";
constexpr std::string_view kCompensatorS = "Compensator_S";
constexpr std::string_view kConverter = "Converter";
constexpr std::string_view kDCline = "DCline";
constexpr std::string_view kIsland = "Island";
constexpr std::string_view kTopoNode = "TopoNode";
constexpr std::string_view kBreaker = "Breaker";
constexpr std::string_view kDisconnector = "Disconnector";

std::string nullable(std::string_view v) {
    return v == kNull ? std::string() : std::string(v);
}

std::string or_null(const std::string& v) {
    return v.empty() ? std::string(kNull) : v;
}

struct TableView {
    const ClassTable& table;
    std::map<std::string, std::size_t> column_index;

    explicit TableView(const ClassTable& t) : table(t) {
        for (std::size_t i = 0; i < t.attributes.size(); ++i) {
            column_index.emplace(t.attributes[i], i);
        }
    }

    bool has(const std::string& column) const { return column_index.count(column) > 0; }

    // Row value for a mapped column; empty when the column is missing,
    // the row is short, or the field holds the null token.
    std::string value(const std::vector<std::string>& row, const std::string& column) const {
        auto it = column_index.find(column);
        if (it == column_index.end() || it->second >= row.size()) return {};
        return nullable(row[it->second]);
    }
};

struct Binder {
    const AttributeMapping& mapping;
    BindResult result;
    std::map<std::string, std::set<std::string>> seen_ids;  // per class

    void issue(Severity sev, std::string record_id, std::string message) {
        result.report.issues.push_back({std::move(record_id), std::move(message), sev});
    }

    bool require_columns(const TableView& view, const std::string& class_name,
                         std::initializer_list<std::string_view> fields) {
        bool ok = true;
        for (auto field : fields) {
            const auto& col = mapping.column(class_name, field);
            if (!view.has(col)) {
                issue(Severity::error, class_name,
                      "table '" + class_name + "': missing required column '" + col + "'");
                ok = false;
            }
        }
        return ok;
    }

    bool claim_id(const std::string& class_name, const std::string& id) {
        if (id.empty()) {
            issue(Severity::error, class_name, "table '" + class_name + "': row with empty id dropped");
            return false;
        }
        if (!seen_ids[class_name].insert(id).second) {
            issue(Severity::error, id, "duplicate id '" + id + "' in table '" + class_name + "'");
            return false;
        }
        return true;
    }

    // Columns consumed by the typed fields; everything else passes through.
    Attrs passthrough(const TableView& view, const std::vector<std::string>& row,
                      const std::set<std::string>& consumed) const {
        Attrs attrs;
        const std::size_t width = std::min(view.table.attributes.size(), row.size());
        for (std::size_t i = 0; i < width; ++i) {
            const auto& name = view.table.attributes[i];
            if (consumed.count(name)) continue;
            auto value = nullable(row[i]);
            if (!value.empty()) attrs.emplace(name, value);
        }
        return attrs;
    }

    std::set<std::string> consumed_columns(const std::string& class_name,
                                           std::initializer_list<std::string_view> fields) const {
        std::set<std::string> out;
        for (auto field : fields) out.insert(mapping.column(class_name, field));
        return out;
    }

    bool parse_switch_status(const std::string& value, const std::string& id) {
        if (value == "1") return true;
        if (value != "0") {
            issue(Severity::warning, id, "switch '" + id + "': unrecognized status '" + value + "', treated as open");
        }
        return false;
    }

    // End status columns use "0" = in service.
    bool parse_end_status(const std::string& value, const std::string& id) {
        if (value == "0") return true;
        if (value != "1") {
            issue(Severity::warning, id, "branch '" + id + "': unrecognized end status '" + value + "', treated as off");
        }
        return false;
    }

    // Island/TopoNode cross-validation tables carry one row per member,
    // so their ids repeat; claim_ids is off for them.
    void bind_plain(const ClassTable& table, std::vector<PlainRecord>& out, bool claim_ids = true) {
        TableView view(table);
        if (!require_columns(view, table.class_name, {"id"})) return;
        auto consumed = consumed_columns(table.class_name, {"id", "name"});
        for (const auto& row : table.rows) {
            PlainRecord rec;
            rec.id = view.value(row, mapping.column(table.class_name, "id"));
            if (claim_ids) {
                if (!claim_id(table.class_name, rec.id)) continue;
            } else if (rec.id.empty()) {
                issue(Severity::error, table.class_name,
                      "table '" + table.class_name + "': row with empty id dropped");
                continue;
            }
            rec.name = view.value(row, mapping.column(table.class_name, "name"));
            rec.attrs = passthrough(view, row, consumed);
            out.push_back(std::move(rec));
        }
    }

    void bind_single(const ClassTable& table, SingleEndedKind kind, std::vector<SingleEndedRecord>& out) {
        TableView view(table);
        if (!require_columns(view, table.class_name, {"id", "nd"})) return;
        auto consumed = consumed_columns(table.class_name, {"id", "name", "st", "nd"});
        for (const auto& row : table.rows) {
            SingleEndedRecord rec;
            rec.kind = kind;
            rec.id = view.value(row, mapping.column(table.class_name, "id"));
            if (!claim_id(table.class_name, rec.id)) continue;
            rec.name = view.value(row, mapping.column(table.class_name, "name"));
            rec.substation = view.value(row, mapping.column(table.class_name, "st"));
            rec.nd = view.value(row, mapping.column(table.class_name, "nd"));
            if (rec.nd.empty()) {
                issue(Severity::error, rec.id, "record '" + rec.id + "': empty nd, row dropped");
                continue;
            }
            rec.attrs = passthrough(view, row, consumed);
            out.push_back(std::move(rec));
        }
    }

    void bind_switch(const ClassTable& table, SwitchKind kind, std::vector<SwitchRecord>& out) {
        TableView view(table);
        if (!require_columns(view, table.class_name, {"id", "i_nd", "j_nd", "point"})) return;
        if (!view.has(mapping.column(table.class_name, "st"))) {
            // Topology processing will reject substation-less switches.
            issue(Severity::warning, table.class_name,
                  "table '" + table.class_name + "': no substation column '" +
                      mapping.column(table.class_name, "st") + "'");
        }
        auto consumed = consumed_columns(table.class_name, {"id", "name", "st", "i_nd", "j_nd", "point"});
        for (const auto& row : table.rows) {
            SwitchRecord rec;
            rec.kind = kind;
            rec.id = view.value(row, mapping.column(table.class_name, "id"));
            if (!claim_id(table.class_name, rec.id)) continue;
            rec.name = view.value(row, mapping.column(table.class_name, "name"));
            rec.substation = view.value(row, mapping.column(table.class_name, "st"));
            rec.i_nd = view.value(row, mapping.column(table.class_name, "i_nd"));
            rec.j_nd = view.value(row, mapping.column(table.class_name, "j_nd"));
            if (rec.i_nd.empty() || rec.j_nd.empty()) {
                issue(Severity::error, rec.id, "switch '" + rec.id + "': missing endpoint nd, row dropped");
                continue;
            }
            rec.closed = parse_switch_status(view.value(row, mapping.column(table.class_name, "point")), rec.id);
            rec.attrs = passthrough(view, row, consumed);
            out.push_back(std::move(rec));
        }
    }

    void bind_branch(const ClassTable& table, BranchKind kind, std::vector<TwoEndedBranchRecord>& out) {
        TableView view(table);
        if (!require_columns(view, table.class_name, {"id", "i_nd", "j_nd", "i_off", "j_off"})) return;
        auto consumed = consumed_columns(table.class_name,
                                         {"id", "name", "st", "i_nd", "j_nd", "i_off", "j_off"});
        for (const auto& row : table.rows) {
            TwoEndedBranchRecord rec;
            rec.kind = kind;
            rec.id = view.value(row, mapping.column(table.class_name, "id"));
            if (!claim_id(table.class_name, rec.id)) continue;
            rec.name = view.value(row, mapping.column(table.class_name, "name"));
            rec.substation = view.value(row, mapping.column(table.class_name, "st"));
            rec.i_nd = view.value(row, mapping.column(table.class_name, "i_nd"));
            rec.j_nd = view.value(row, mapping.column(table.class_name, "j_nd"));
            if (rec.i_nd.empty() || rec.j_nd.empty()) {
                issue(Severity::error, rec.id, "branch '" + rec.id + "': missing endpoint nd, row dropped");
                continue;
            }
            rec.i_closed = parse_end_status(view.value(row, mapping.column(table.class_name, "i_off")), rec.id);
            rec.j_closed = parse_end_status(view.value(row, mapping.column(table.class_name, "j_off")), rec.id);
            rec.attrs = passthrough(view, row, consumed);
            out.push_back(std::move(rec));
        }
    }

    // Two-winding rows bind directly; a row with a third winding (k_nd)
    // expands to a star of three records around a synthetic internal node.
    void bind_transformer(const ClassTable& table) {
        TableView view(table);
        const std::string cls(kTransformer);
        if (!require_columns(view, cls, {"id", "i_nd", "j_nd", "i_off", "j_off"})) return;
        auto consumed = consumed_columns(cls, {"id", "name", "st", "i_nd", "j_nd", "i_off", "j_off",
                                               "k_nd", "k_off"});
        for (const auto& row : table.rows) {
            std::string id = view.value(row, mapping.column(cls, "id"));
            if (!claim_id(cls, id)) continue;
            std::string name = view.value(row, mapping.column(cls, "name"));
            std::string st = view.value(row, mapping.column(cls, "st"));
            std::string i_nd = view.value(row, mapping.column(cls, "i_nd"));
            std::string j_nd = view.value(row, mapping.column(cls, "j_nd"));
            std::string k_nd = view.value(row, mapping.column(cls, "k_nd"));
            if (i_nd.empty() || j_nd.empty()) {
                issue(Severity::error, id, "transformer '" + id + "': missing endpoint nd, row dropped");
                continue;
            }
            bool i_closed = parse_end_status(view.value(row, mapping.column(cls, "i_off")), id);
            bool j_closed = parse_end_status(view.value(row, mapping.column(cls, "j_off")), id);
            Attrs attrs = passthrough(view, row, consumed);

            if (k_nd.empty()) {
                TwoEndedBranchRecord rec;
                rec.kind = BranchKind::transformer;
                rec.id = std::move(id);
                rec.name = std::move(name);
                rec.substation = std::move(st);
                rec.i_nd = std::move(i_nd);
                rec.j_nd = std::move(j_nd);
                rec.i_closed = i_closed;
                rec.j_closed = j_closed;
                rec.attrs = std::move(attrs);
                result.model.transformers.push_back(std::move(rec));
                continue;
            }

            std::string k_off_col = mapping.column(cls, "k_off");
            bool k_closed = view.has(k_off_col) ? parse_end_status(view.value(row, k_off_col), id) : true;
            std::string star = id + ".star";
            result.model.connectivity_nodes.insert(star);
            auto make_winding = [&](const char* suffix, const std::string& outer, bool outer_closed) {
                TwoEndedBranchRecord rec;
                rec.kind = BranchKind::transformer;
                rec.id = id + suffix;
                rec.name = name.empty() ? name : name + suffix;
                rec.substation = st;
                rec.i_nd = outer;
                rec.j_nd = star;
                rec.i_closed = outer_closed;
                rec.j_closed = true;
                rec.attrs = attrs;
                result.model.transformers.push_back(std::move(rec));
            };
            make_winding(".w1", i_nd, i_closed);
            make_winding(".w2", j_nd, j_closed);
            make_winding(".w3", k_nd, k_closed);
        }
    }

    // Union of every nd column over every table, recognized or not.
    void scan_connectivity_nodes(const RawDocument& doc) {
        for (const auto& table : doc.tables) {
            TableView view(table);
            for (auto field : {"nd", "i_nd", "j_nd", "k_nd"}) {
                const auto& col = mapping.column(table.class_name, field);
                if (!view.has(col)) continue;
                for (const auto& row : table.rows) {
                    auto value = view.value(row, col);
                    if (!value.empty()) result.model.connectivity_nodes.insert(std::move(value));
                }
            }
        }
    }

    void bind_document(const RawDocument& doc) {
        bool have_substation_table = false;
        for (const auto& table : doc.tables) {
            if (result.model.section_name.empty() && !table.section_name.empty()) {
                result.model.section_name = table.section_name;
            }
            auto& m = result.model;
            if (table.class_name == kBaseVoltage) bind_plain(table, m.base_voltages);
            else if (table.class_name == kSubstation) { bind_plain(table, m.substations); have_substation_table = true; }
            else if (table.class_name == kBus) bind_single(table, SingleEndedKind::busbar, m.bus_bars);
            else if (table.class_name == kGenerator) bind_single(table, SingleEndedKind::generator, m.generators);
            else if (table.class_name == kLoad) bind_single(table, SingleEndedKind::load, m.loads);
            else if (table.class_name == kCompensatorP) bind_single(table, SingleEndedKind::compensator_p, m.compensators_p);
            else if (table.class_name == kACline) bind_branch(table, BranchKind::ac_line, m.ac_lines);
            else if (table.class_name == kCompensatorS) bind_branch(table, BranchKind::compensator_s, m.compensators_s);
            else if (table.class_name == kDCline) bind_branch(table, BranchKind::dc_link, m.dc_lines);
            else if (table.class_name == kTransformer) bind_transformer(table);
            else if (table.class_name == kBreaker) bind_switch(table, SwitchKind::breaker, m.breakers);
            else if (table.class_name == kDisconnector) bind_switch(table, SwitchKind::disconnector, m.disconnectors);
            else if (table.class_name == kConverter) bind_plain(table, m.converters);
            else if (table.class_name == kIsland) bind_plain(table, m.islands, false);
            else if (table.class_name == kTopoNode) bind_plain(table, m.toponodes, false);
            else m.extra_tables.push_back(table);
        }
        scan_connectivity_nodes(doc);

        if (have_substation_table) {
            std::set<std::string> declared;
            for (const auto& s : result.model.substations) declared.insert(s.id);
            auto check = [&](const std::string& id, const std::string& st) {
                if (!st.empty() && !declared.count(st)) {
                    issue(Severity::warning, id, "record '" + id + "' references undeclared substation '" + st + "'");
                }
            };
            for (const auto& r : result.model.bus_bars) check(r.id, r.substation);
            for (const auto& r : result.model.generators) check(r.id, r.substation);
            for (const auto& r : result.model.loads) check(r.id, r.substation);
            for (const auto& r : result.model.compensators_p) check(r.id, r.substation);
            for (const auto& r : result.model.breakers) check(r.id, r.substation);
            for (const auto& r : result.model.disconnectors) check(r.id, r.substation);
            for (const auto& r : result.model.ac_lines) check(r.id, r.substation);
            for (const auto& r : result.model.transformers) check(r.id, r.substation);
            for (const auto& r : result.model.compensators_s) check(r.id, r.substation);
            for (const auto& r : result.model.dc_lines) check(r.id, r.substation);
        }
    }
};

// First claim wins; later conflicting claims are reported when a sink is
// provided.
std::map<NodeId, std::string> infer_impl(const GridModel& model,
                                         std::vector<ValidationIssue>* conflicts) {
    std::map<NodeId, std::string> out;
    auto claim = [&](const NodeId& nd, const std::string& st, const std::string& record_id) {
        if (st.empty() || nd.empty()) return;
        auto [it, inserted] = out.emplace(nd, st);
        if (!inserted && it->second != st && conflicts) {
            conflicts->push_back({record_id,
                                  "connectivity node '" + nd + "' claimed by substations '" +
                                      it->second + "' and '" + st + "'",
                                  Severity::warning});
        }
    };
    for (const auto& r : model.bus_bars) claim(r.nd, r.substation, r.id);
    for (const auto& r : model.generators) claim(r.nd, r.substation, r.id);
    for (const auto& r : model.loads) claim(r.nd, r.substation, r.id);
    for (const auto& r : model.compensators_p) claim(r.nd, r.substation, r.id);
    for (const auto& r : model.breakers) { claim(r.i_nd, r.substation, r.id); claim(r.j_nd, r.substation, r.id); }
    for (const auto& r : model.disconnectors) { claim(r.i_nd, r.substation, r.id); claim(r.j_nd, r.substation, r.id); }
    return out;
}

void attr_key_union(const Attrs& a, std::vector<std::string>& into) {
    for (const auto& [k, v] : a) {
        if (std::find(into.begin(), into.end(), k) == into.end()) into.push_back(k);
    }
}

}  // namespace

std::string_view to_string(SwitchKind k) {
    return k == SwitchKind::breaker ? "breaker" : "disconnector";
}

std::string_view to_string(SingleEndedKind k) {
    switch (k) {
        case SingleEndedKind::busbar: return "busbar";
        case SingleEndedKind::generator: return "generator";
        case SingleEndedKind::load: return "load";
        case SingleEndedKind::compensator_p: return "compensator_p";
    }
    return "?";
}

std::string_view to_string(BranchKind k) {
    switch (k) {
        case BranchKind::ac_line: return "ac_line";
        case BranchKind::transformer: return "transformer";
        case BranchKind::compensator_s: return "compensator_s";
        case BranchKind::dc_link: return "dc_link";
    }
    return "?";
}

bool ValidationReport::ok() const { return error_count() == 0; }

std::size_t ValidationReport::error_count() const {
    return static_cast<std::size_t>(std::count_if(
        issues.begin(), issues.end(),
        [](const ValidationIssue& i) { return i.severity == Severity::error; }));
}

std::size_t ValidationReport::warning_count() const {
    return issues.size() - error_count();
}

AttributeMapping AttributeMapping::defaults() {
    AttributeMapping m;
    for (auto field : {"id", "name", "st", "nd", "i_nd", "j_nd", "point", "i_off", "j_off",
                       "k_nd", "k_off"}) {
        m.defaults_[field] = field;
    }
    return m;
}

AttributeMapping AttributeMapping::from_text(std::string_view text) {
    AttributeMapping m = defaults();
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto strip = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string stripped = strip(line);
        if (stripped.empty()) continue;
        auto eq = stripped.find('=');
        auto dot = stripped.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
            throw Error("mapping line " + std::to_string(line_no) + ": expected 'Class.field = column'");
        }
        std::string cls = strip(stripped.substr(0, dot));
        std::string field = strip(stripped.substr(dot + 1, eq - dot - 1));
        std::string column = strip(stripped.substr(eq + 1));
        if (cls.empty() || field.empty() || column.empty()) {
            throw Error("mapping line " + std::to_string(line_no) + ": expected 'Class.field = column'");
        }
        m.set(cls, field, column);
    }
    return m;
}

AttributeMapping AttributeMapping::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read mapping file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

const std::string& AttributeMapping::column(std::string_view class_name, std::string_view field) const {
    auto cls = overrides_.find(std::string(class_name));
    if (cls != overrides_.end()) {
        auto it = cls->second.find(std::string(field));
        if (it != cls->second.end()) return it->second;
    }
    auto it = defaults_.find(std::string(field));
    if (it == defaults_.end()) throw Error("unknown mapping field: " + std::string(field));
    return it->second;
}

void AttributeMapping::set(std::string_view class_name, std::string_view field, std::string_view column) {
    overrides_[std::string(class_name)][std::string(field)] = std::string(column);
}

const std::vector<std::string>& cime_class_names() {
    static const std::vector<std::string> names = {
        std::string(kBaseVoltage), std::string(kSubstation), std::string(kBus),
        std::string(kACline), std::string(kGenerator), std::string(kTransformer),
        std::string(kLoad), std::string(kCompensatorP), std::string(kCompensatorS),
        std::string(kConverter), std::string(kDCline), std::string(kIsland),
        std::string(kTopoNode), std::string(kBreaker), std::string(kDisconnector)};
    return names;
}

BindResult bind_model(const RawDocument& doc, const AttributeMapping& mapping) {
    Binder binder{mapping, {}, {}};
    binder.bind_document(doc);
    return std::move(binder.result);
}

RawDocument unbind_model(const GridModel& model, const AttributeMapping& mapping) {
    RawDocument doc;
    const std::string section = model.section_name.empty() ? "model" : model.section_name;

    auto add_table = [&](std::string_view class_name, const std::vector<std::string>& typed_cols,
                         const std::vector<std::string>& extra_cols, auto&& row_fn, std::size_t count) {
        if (count == 0) return;
        ClassTable table;
        table.class_name = std::string(class_name);
        table.section_name = section;
        for (const auto& c : typed_cols) table.attributes.push_back(mapping.column(class_name, c));
        for (const auto& c : extra_cols) table.attributes.push_back(c);
        for (std::size_t i = 0; i < count; ++i) {
            table.rows.push_back(row_fn(i, extra_cols));
        }
        doc.tables.push_back(std::move(table));
    };

    auto attr_cols = [](const auto& records) {
        std::vector<std::string> cols;
        for (const auto& r : records) attr_key_union(r.attrs, cols);
        std::sort(cols.begin(), cols.end());
        return cols;
    };
    auto attr_values = [](const Attrs& attrs, const std::vector<std::string>& cols,
                          std::vector<std::string>& row) {
        for (const auto& c : cols) {
            auto it = attrs.find(c);
            row.push_back(it == attrs.end() ? std::string(kNull) : or_null(it->second));
        }
    };

    auto plain_table = [&](std::string_view cls, const std::vector<PlainRecord>& records) {
        auto extra = attr_cols(records);
        add_table(cls, {"id", "name"}, extra,
                  [&](std::size_t i, const std::vector<std::string>& cols) {
                      const auto& r = records[i];
                      std::vector<std::string> row{or_null(r.id), or_null(r.name)};
                      attr_values(r.attrs, cols, row);
                      return row;
                  },
                  records.size());
    };
    auto single_table = [&](std::string_view cls, const std::vector<SingleEndedRecord>& records) {
        auto extra = attr_cols(records);
        add_table(cls, {"id", "name", "st", "nd"}, extra,
                  [&](std::size_t i, const std::vector<std::string>& cols) {
                      const auto& r = records[i];
                      std::vector<std::string> row{or_null(r.id), or_null(r.name),
                                                   or_null(r.substation), or_null(r.nd)};
                      attr_values(r.attrs, cols, row);
                      return row;
                  },
                  records.size());
    };
    auto switch_table = [&](std::string_view cls, const std::vector<SwitchRecord>& records) {
        auto extra = attr_cols(records);
        add_table(cls, {"id", "name", "st", "i_nd", "j_nd", "point"}, extra,
                  [&](std::size_t i, const std::vector<std::string>& cols) {
                      const auto& r = records[i];
                      std::vector<std::string> row{or_null(r.id),   or_null(r.name),
                                                   or_null(r.substation), or_null(r.i_nd),
                                                   or_null(r.j_nd), r.closed ? "1" : "0"};
                      attr_values(r.attrs, cols, row);
                      return row;
                  },
                  records.size());
    };
    auto branch_table = [&](std::string_view cls, const std::vector<TwoEndedBranchRecord>& records) {
        auto extra = attr_cols(records);
        add_table(cls, {"id", "name", "st", "i_nd", "j_nd", "i_off", "j_off"}, extra,
                  [&](std::size_t i, const std::vector<std::string>& cols) {
                      const auto& r = records[i];
                      std::vector<std::string> row{or_null(r.id),   or_null(r.name),
                                                   or_null(r.substation), or_null(r.i_nd),
                                                   or_null(r.j_nd), r.i_closed ? "0" : "1",
                                                   r.j_closed ? "0" : "1"};
                      attr_values(r.attrs, cols, row);
                      return row;
                  },
                  records.size());
    };

    plain_table(kBaseVoltage, model.base_voltages);
    plain_table(kSubstation, model.substations);
    single_table(kBus, model.bus_bars);
    branch_table(kACline, model.ac_lines);
    single_table(kGenerator, model.generators);
    branch_table(kTransformer, model.transformers);
    single_table(kLoad, model.loads);
    single_table(kCompensatorP, model.compensators_p);
    branch_table(kCompensatorS, model.compensators_s);
    plain_table(kConverter, model.converters);
    branch_table(kDCline, model.dc_lines);
    plain_table(kIsland, model.islands);
    plain_table(kTopoNode, model.toponodes);
    switch_table(kBreaker, model.breakers);
    switch_table(kDisconnector, model.disconnectors);

    for (const auto& t : model.extra_tables) doc.tables.push_back(t);
    return doc;
}

std::vector<NodeId> collect_connectivity_nodes(const GridModel& model) {
    std::set<NodeId> nodes = model.connectivity_nodes;
    auto single = [&](const std::vector<SingleEndedRecord>& rs) {
        for (const auto& r : rs) if (!r.nd.empty()) nodes.insert(r.nd);
    };
    auto switches = [&](const std::vector<SwitchRecord>& rs) {
        for (const auto& r : rs) { if (!r.i_nd.empty()) nodes.insert(r.i_nd); if (!r.j_nd.empty()) nodes.insert(r.j_nd); }
    };
    auto branches = [&](const std::vector<TwoEndedBranchRecord>& rs) {
        for (const auto& r : rs) { if (!r.i_nd.empty()) nodes.insert(r.i_nd); if (!r.j_nd.empty()) nodes.insert(r.j_nd); }
    };
    single(model.bus_bars);
    single(model.generators);
    single(model.loads);
    single(model.compensators_p);
    switches(model.breakers);
    switches(model.disconnectors);
    branches(model.ac_lines);
    branches(model.transformers);
    branches(model.compensators_s);
    branches(model.dc_lines);
    return {nodes.begin(), nodes.end()};
}

ValidationReport validate(const GridModel& model) {
    ValidationReport report;
    auto issue = [&](Severity sev, const std::string& id, std::string msg) {
        report.issues.push_back({id, std::move(msg), sev});
    };

    auto check_dup = [&](const char* what, const auto& records) {
        std::set<std::string> seen;
        for (const auto& r : records) {
            if (r.id.empty()) {
                issue(Severity::error, r.id, std::string(what) + " with empty id");
            } else if (!seen.insert(r.id).second) {
                issue(Severity::error, r.id, "duplicate " + std::string(what) + " id '" + r.id + "'");
            }
        }
    };
    check_dup("base voltage", model.base_voltages);
    check_dup("substation", model.substations);
    check_dup("bus bar", model.bus_bars);
    check_dup("ac line", model.ac_lines);
    check_dup("generator", model.generators);
    check_dup("transformer", model.transformers);
    check_dup("load", model.loads);
    check_dup("compensator_p", model.compensators_p);
    check_dup("compensator_s", model.compensators_s);
    check_dup("converter", model.converters);
    check_dup("dc line", model.dc_lines);
    check_dup("breaker", model.breakers);
    check_dup("disconnector", model.disconnectors);

    auto known_nd = [&](const std::string& id, const NodeId& nd) {
        if (nd.empty()) {
            issue(Severity::error, id, "record '" + id + "': empty nd");
        } else if (!model.connectivity_nodes.count(nd)) {
            issue(Severity::error, id, "record '" + id + "': nd '" + nd + "' not in connectivity_nodes");
        }
    };
    for (const auto* list : {&model.bus_bars, &model.generators, &model.loads, &model.compensators_p}) {
        for (const auto& r : *list) known_nd(r.id, r.nd);
    }
    auto check_two_ended = [&](const std::string& id, const NodeId& i_nd, const NodeId& j_nd) {
        known_nd(id, i_nd);
        known_nd(id, j_nd);
        if (!i_nd.empty() && i_nd == j_nd) {
            issue(Severity::error, id, "record '" + id + "': i_nd == j_nd ('" + i_nd + "')");
        }
    };

    std::set<std::string> declared;
    for (const auto& s : model.substations) declared.insert(s.id);

    for (const auto* list : {&model.breakers, &model.disconnectors}) {
        for (const auto& r : *list) {
            check_two_ended(r.id, r.i_nd, r.j_nd);
            if (r.substation.empty()) {
                issue(Severity::error, r.id, "switch '" + r.id + "' has no substation");
            } else if (!declared.count(r.substation)) {
                issue(Severity::warning, r.id,
                      "switch '" + r.id + "' references undeclared substation '" + r.substation + "'");
            }
        }
    }
    for (const auto* list : {&model.ac_lines, &model.transformers, &model.compensators_s, &model.dc_lines}) {
        for (const auto& r : *list) check_two_ended(r.id, r.i_nd, r.j_nd);
    }

    auto node_substation = infer_impl(model, &report.issues);
    for (const auto& r : model.ac_lines) {
        auto i = node_substation.find(r.i_nd);
        auto j = node_substation.find(r.j_nd);
        if (i != node_substation.end() && j != node_substation.end() && i->second == j->second) {
            issue(Severity::warning, r.id,
                  "ac line '" + r.id + "': both endpoints in substation '" + i->second + "'");
        }
    }
    return report;
}

std::map<NodeId, std::string> infer_node_substations(const GridModel& model) {
    return infer_impl(model, nullptr);
}

}  // namespace cimgraph
