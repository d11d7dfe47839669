#pragma once

// Shared fixtures and generators for the unit and acceptance suites.

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cimgraph/cime.hpp"
#include "cimgraph/model.hpp"
#include "cimgraph/synth.hpp"

namespace testing_support {

// Skeleton document shaped like the format reference: one class table,
// a system statement, an attribute header, a comment and three object
// rows of three values.
inline std::string fig3_text() {
    return "<! System Statement !>\n"
           "<Model::case>\n"
           "@ attr1  attr2\tattr3\n"
           "// comment\n"
           "# v11  v12  v13\n"
           "# v21  v22  v23\n"
           "# v31  v32  v33\n"
           "</Model::case>\n";
}

// Single-substation fixture: bus bar on N1, closed breaker N1-N2, closed
// disconnector N2-N3 feeding a load, open breaker N1-N4 toward a
// generator.
inline std::string substation_fixture_text() {
    return "<Substation::fix>\n"
           "@ id name\n"
           "# S1 Station1\n"
           "</Substation::fix>\n"
           "<Bus::fix>\n"
           "@ id name st nd kv\n"
           "# BB1 bus1 S1 N1 138\n"
           "</Bus::fix>\n"
           "<Breaker::fix>\n"
           "@ id name st i_nd j_nd point\n"
           "# BRK1 brk1 S1 N1 N2 1\n"
           "# BRK2 brk2 S1 N1 N4 0\n"
           "</Breaker::fix>\n"
           "<Disconnector::fix>\n"
           "@ id name st i_nd j_nd point\n"
           "# DIS1 dis1 S1 N2 N3 1\n"
           "</Disconnector::fix>\n"
           "<Load::fix>\n"
           "@ id name st nd\n"
           "# LD1 load1 S1 N3\n"
           "</Load::fix>\n"
           "<Generator::fix>\n"
           "@ id name st nd\n"
           "# GEN1 gen1 S1 N4\n"
           "</Generator::fix>\n";
}

// Bus bar on N1, one closed breaker N1-N2, load on N2: the smallest
// model with a switch.
inline cimgraph::GridModel three_device_model(bool breaker_closed = true) {
    cimgraph::GridModel m;
    m.section_name = "tiny";
    cimgraph::PlainRecord sub;
    sub.id = "S1";
    sub.name = "S1";
    m.substations.push_back(sub);

    cimgraph::SingleEndedRecord bb;
    bb.id = "BB1";
    bb.name = "BB1";
    bb.substation = "S1";
    bb.nd = "N1";
    bb.kind = cimgraph::SingleEndedKind::busbar;
    m.bus_bars.push_back(bb);

    cimgraph::SwitchRecord sw;
    sw.id = "SW1";
    sw.name = "SW1";
    sw.substation = "S1";
    sw.i_nd = "N1";
    sw.j_nd = "N2";
    sw.closed = breaker_closed;
    sw.kind = cimgraph::SwitchKind::breaker;
    m.breakers.push_back(sw);

    cimgraph::SingleEndedRecord ld;
    ld.id = "LD1";
    ld.name = "LD1";
    ld.substation = "S1";
    ld.nd = "N2";
    ld.kind = cimgraph::SingleEndedKind::load;
    m.loads.push_back(ld);

    m.connectivity_nodes = {"N1", "N2"};
    return m;
}

inline std::string identifier(std::mt19937_64& rng, std::size_t min_len = 1, std::size_t max_len = 8) {
    static const std::string alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_";
    std::size_t len = min_len + rng() % (max_len - min_len + 1);
    std::string out;
    for (std::size_t i = 0; i < len; ++i) out += alphabet[rng() % alphabet.size()];
    return out;
}

// Field values exercise characters that look like markers; they are only
// special at line starts.
inline std::string field_value(std::mt19937_64& rng) {
    static const std::string alphabet =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.-:/<>!@#";
    std::size_t len = 1 + rng() % 10;
    std::string out;
    for (std::size_t i = 0; i < len; ++i) out += alphabet[rng() % alphabet.size()];
    return out;
}

// Documents valid by construction: unique (class, section) pairs, rows
// exactly header-wide, comment positions sorted.
inline cimgraph::RawDocument random_document(std::mt19937_64& rng) {
    cimgraph::RawDocument doc;
    std::size_t statements = rng() % 3;
    for (std::size_t i = 0; i < statements; ++i) {
        std::string stmt = identifier(rng);
        if (rng() % 2) stmt += " " + identifier(rng);
        doc.system_statements.push_back(std::move(stmt));
    }
    std::set<std::pair<std::string, std::string>> seen;
    std::size_t tables = rng() % 6;
    for (std::size_t t = 0; t < tables; ++t) {
        cimgraph::ClassTable table;
        do {
            table.class_name = identifier(rng);
            table.section_name = identifier(rng);
        } while (!seen.insert({table.class_name, table.section_name}).second);
        std::size_t attrs = 1 + rng() % 5;
        for (std::size_t a = 0; a < attrs; ++a) table.attributes.push_back(identifier(rng));
        std::size_t rows = rng() % 6;
        for (std::size_t r = 0; r < rows; ++r) {
            std::vector<std::string> row;
            for (std::size_t a = 0; a < attrs; ++a) row.push_back(field_value(rng));
            table.rows.push_back(std::move(row));
        }
        std::size_t comments = rng() % 3;
        std::vector<std::size_t> positions;
        for (std::size_t c = 0; c < comments; ++c) positions.push_back(rng() % (rows + 1));
        std::sort(positions.begin(), positions.end());
        for (auto pos : positions) {
            table.comments.emplace_back(pos, identifier(rng) + " " + identifier(rng));
        }
        doc.tables.push_back(std::move(table));
    }
    return doc;
}

inline std::string random_bytes(std::mt19937_64& rng, std::size_t max_len = 400) {
    std::size_t len = rng() % (max_len + 1);
    std::string out;
    out.reserve(len);
    for (std::size_t i = 0; i < len; ++i) out += static_cast<char>(rng() % 256);
    return out;
}

inline std::filesystem::path data_file(const std::string& name) {
    return std::filesystem::path(CIMGRAPH_DATA_DIR) / name;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Unique scratch directory below the test working directory, removed on
// destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("cimgraph_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

// Raw-text oracle for the connectivity-node set: scan every table for
// the default nd column names, independent of the binder.
inline std::set<std::string> scan_nd_columns(const cimgraph::RawDocument& doc) {
    std::set<std::string> out;
    for (const auto& table : doc.tables) {
        for (std::size_t col = 0; col < table.attributes.size(); ++col) {
            const auto& name = table.attributes[col];
            if (name != "nd" && name != "i_nd" && name != "j_nd" && name != "k_nd") continue;
            for (const auto& row : table.rows) {
                if (!row[col].empty() && row[col] != "-") out.insert(row[col]);
            }
        }
    }
    return out;
}

}  // namespace testing_support
