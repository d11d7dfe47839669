#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cimgraph/cime.hpp"
#include "cimgraph/error.hpp"
#include "cimgraph/parallel.hpp"
#include "support/helpers.hpp"

using namespace cimgraph;
namespace ts = testing_support;

TEST_CASE("skeleton document parses into one table of three rows") {
    auto result = parse_cime(ts::fig3_text());
    REQUIRE(result.ok());
    REQUIRE(result.doc.tables.size() == 1);
    const auto& table = result.doc.tables[0];
    CHECK(table.class_name == "Model");
    CHECK(table.section_name == "case");
    CHECK(table.attributes == std::vector<std::string>{"attr1", "attr2", "attr3"});
    REQUIRE(table.rows.size() == 3);
    for (const auto& row : table.rows) CHECK(row.size() == 3);
    CHECK(table.rows[0] == std::vector<std::string>{"v11", "v12", "v13"});
    REQUIRE(table.comments.size() == 1);
    CHECK(table.comments[0] == std::pair<std::size_t, std::string>{0, "comment"});
    CHECK(result.doc.system_statements == std::vector<std::string>{"System Statement"});
}

TEST_CASE("empty input gives an empty document with no diagnostics") {
    auto result = parse_cime("");
    CHECK(result.doc.tables.empty());
    CHECK(result.doc.system_statements.empty());
    CHECK(result.diagnostics.empty());
}

TEST_CASE("CRLF input parses like LF input") {
    std::string lf = ts::fig3_text();
    std::string crlf;
    for (char c : lf) {
        if (c == '\n') crlf += '\r';
        crlf += c;
    }
    CHECK(parse_cime(lf).doc == parse_cime(crlf).doc);
}

TEST_CASE("skeleton round-trips exactly") {
    auto first = parse_cime(ts::fig3_text());
    auto text = serialize_cime(first.doc);
    auto second = parse_cime(text);
    CHECK(second.ok());
    CHECK(second.doc == first.doc);
}

TEST_CASE("tag grammar accepts whitespace around the separator") {
    auto result = parse_cime("<Breaker :: east>\n@ id\n# b1\n</Breaker :: east>\n");
    REQUIRE(result.ok());
    REQUIRE(result.doc.tables.size() == 1);
    CHECK(result.doc.tables[0].class_name == "Breaker");
    CHECK(result.doc.tables[0].section_name == "east");
}

TEST_CASE("mismatched close tag keeps the table and reports an error") {
    auto result = parse_cime("<A::x>\n@ c\n# 1\n</B::x>\n");
    REQUIRE(result.doc.tables.size() == 1);
    CHECK(result.doc.tables[0].class_name == "A");
    CHECK(result.doc.tables[0].rows.size() == 1);
    CHECK(result.error_count() == 1);
    CHECK(result.diagnostics[0].line == 4);
}

TEST_CASE("rows outside any table are dropped with a diagnostic") {
    auto result = parse_cime("# stray row\n<A::x>\n@ c\n</A::x>\n");
    REQUIRE(result.doc.tables.size() == 1);
    CHECK(result.doc.tables[0].rows.empty());
    CHECK(result.error_count() == 1);
    CHECK(result.diagnostics[0].line == 1);
}

TEST_CASE("short rows are padded and long rows truncated, both diagnosed") {
    auto result = parse_cime("<A::x>\n@ c1 c2 c3\n# a\n# a b c d\n</A::x>\n");
    REQUIRE(result.doc.tables.size() == 1);
    const auto& rows = result.doc.tables[0].rows;
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"a", "", ""});
    CHECK(rows[1] == std::vector<std::string>{"a", "b", "c"});
    CHECK(result.error_count() == 2);
}

TEST_CASE("nested open tags close the previous table with an error") {
    auto result = parse_cime("<A::x>\n@ c\n<B::x>\n@ d\n</B::x>\n");
    REQUIRE(result.doc.tables.size() == 2);
    CHECK(result.doc.tables[0].class_name == "A");
    CHECK(result.doc.tables[1].class_name == "B");
    CHECK(result.error_count() == 1);
}

TEST_CASE("unterminated table at end of input is kept with an error") {
    auto result = parse_cime("<A::x>\n@ c\n# 1\n");
    REQUIRE(result.doc.tables.size() == 1);
    CHECK(result.doc.tables[0].rows.size() == 1);
    CHECK(result.error_count() == 1);
}

TEST_CASE("stray close tag is diagnosed and ignored") {
    auto result = parse_cime("</A::x>\n");
    CHECK(result.doc.tables.empty());
    CHECK(result.error_count() == 1);
}

TEST_CASE("duplicate attribute header is ignored with an error") {
    auto result = parse_cime("<A::x>\n@ c1\n@ c2\n# v\n</A::x>\n");
    REQUIRE(result.doc.tables.size() == 1);
    CHECK(result.doc.tables[0].attributes == std::vector<std::string>{"c1"});
    CHECK(result.error_count() == 1);
}

TEST_CASE("get_table is exact and case-sensitive") {
    auto result = parse_cime("<Breaker::x>\n@ id\n# b1\n</Breaker::x>\n");
    REQUIRE(result.ok());
    CHECK(get_table(result.doc, "Breaker") != nullptr);
    CHECK(get_table(result.doc, "breaker") == nullptr);
    CHECK(get_table(result.doc, "Break") == nullptr);
}

TEST_CASE("get_table finds the bus table in the substation fixture") {
    auto result = parse_cime(ts::substation_fixture_text());
    REQUIRE(result.ok());
    const auto* bus = get_table(result.doc, "Bus");
    REQUIRE(bus != nullptr);
    REQUIRE(bus->rows.size() == 1);
    CHECK(bus->rows[0][0] == "BB1");
}

TEST_CASE("serializing an empty table gives open tag, header, close tag") {
    ClassTable table;
    table.class_name = "A";
    table.section_name = "x";
    table.attributes = {"c1", "c2"};
    RawDocument doc;
    doc.tables.push_back(table);
    auto text = serialize_cime(doc);
    CHECK(text == "<A::x>\n@\tc1\tc2\n</A::x>\n");
}

TEST_CASE("serializer rejects rows that do not match the header width") {
    ClassTable table;
    table.class_name = "A";
    table.section_name = "x";
    table.attributes = {"c1", "c2"};
    table.rows.push_back({"only"});
    RawDocument doc;
    doc.tables.push_back(table);
    CHECK_THROWS_AS(serialize_cime(doc), Error);
    try {
        serialize_cime(doc);
    } catch (const Error& e) {
        std::string what = e.what();
        CHECK(what.find("A") != std::string::npos);
        CHECK(what.find("0") != std::string::npos);
    }
}

TEST_CASE("random documents round-trip through serialize and parse") {
    std::mt19937_64 rng(20240811);
    for (int i = 0; i < 100; ++i) {
        auto doc = ts::random_document(rng);
        auto text = serialize_cime(doc);
        auto reparsed = parse_cime(text);
        REQUIRE(reparsed.error_count() == 0);
        REQUIRE(reparsed.doc == doc);
        // Fixpoint: a second round gives the same document again.
        auto again = parse_cime(serialize_cime(reparsed.doc));
        REQUIRE(again.doc == reparsed.doc);
    }
}

TEST_CASE("parser and serializer are safe to call concurrently") {
    auto text = ts::fig3_text();
    auto reference = parse_cime(text).doc;
    std::vector<RawDocument> results(16);
    cimgraph::parallel_chunks(results.size(), 8, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            results[i] = parse_cime(serialize_cime(parse_cime(text).doc)).doc;
        }
    });
    for (const auto& doc : results) CHECK(doc == reference);
}

TEST_CASE("parser is total over arbitrary byte input") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        auto junk = ts::random_bytes(rng);
        auto result = parse_cime(junk);  // must not throw or crash
        // Whatever was recovered must serialize and reparse to a fixpoint.
        auto text = serialize_cime(result.doc);
        auto reparsed = parse_cime(text);
        CHECK(reparsed.doc == result.doc);
    }
}
