#pragma once

// CIM/E text format: parsing and serialization.
//
// A document is a sequence of system statements (<! ... !>) and class
// tables. A table opens with <Name::Section>, carries one @-prefixed
// attribute header, #-prefixed object rows and //-comments, and closes
// with </Name::Section>. Fields have no quoting mechanism and cannot
// contain whitespace; input fields split on runs of spaces/tabs, output
// uses single tabs.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cimgraph {

struct ClassTable {
    std::string class_name;
    std::string section_name;
    std::vector<std::string> attributes;
    std::vector<std::vector<std::string>> rows;
    // //-comment lines, keyed by the index of the row they precede
    // (rows.size() = after the last row). Preserved for round-trips only.
    std::vector<std::pair<std::size_t, std::string>> comments;

    bool operator==(const ClassTable&) const = default;
};

struct RawDocument {
    std::vector<std::string> system_statements;
    std::vector<ClassTable> tables;

    bool operator==(const RawDocument&) const = default;
};

enum class Severity { warning, error };

struct ParseDiagnostic {
    int line = 0;  // 1-based line in the original input
    Severity severity = Severity::error;
    std::string message;
};

struct ParseResult {
    RawDocument doc;
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const;           // no error-severity diagnostics
    std::size_t error_count() const;
};

// Total over arbitrary byte input: malformed constructs produce
// diagnostics and parsing resynchronizes at the next table boundary.
// Accepts LF and CRLF line endings.
ParseResult parse_cime(std::string_view text);

// Inverse of parse_cime; output reparses to an equal document.
// Throws Error if a row width does not match its header.
std::string serialize_cime(const RawDocument& doc);

// First table with the given class name (exact, case-sensitive), or null.
const ClassTable* get_table(const RawDocument& doc, std::string_view class_name);

}  // namespace cimgraph
