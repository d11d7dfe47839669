#include "cimgraph/cime.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "cimgraph/error.hpp"

namespace cimgraph {

namespace {

// '\r' counts as whitespace so CRLF input and stray carriage returns can
// never leak into tokens.
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_fields(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        std::size_t start = i;
        while (i < s.size() && !is_space(s[i])) ++i;
        if (i > start) out.emplace_back(s.substr(start, i - start));
    }
    return out;
}

bool has_whitespace(std::string_view s) {
    return std::any_of(s.begin(), s.end(), [](char c) { return is_space(c); });
}

struct TagName {
    std::string class_name;
    std::string section_name;
};

// <Name::Section> with optional whitespace around '::'. `inner` excludes
// the angle brackets and any leading '/'.
bool parse_tag(std::string_view inner, TagName& out) {
    auto sep = inner.find("::");
    if (sep == std::string_view::npos) return false;
    auto cls = trim(inner.substr(0, sep));
    auto sec = trim(inner.substr(sep + 2));
    if (cls.empty() || has_whitespace(cls) || has_whitespace(sec)) return false;
    if (sec.find("::") != std::string_view::npos) return false;
    out.class_name = std::string(cls);
    out.section_name = std::string(sec);
    return true;
}

struct LineReader {
    std::string_view text;
    std::size_t pos = 0;
    int line_no = 0;

    bool next(std::string_view& line) {
        if (pos >= text.size()) return false;
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            line = text.substr(pos);
            pos = text.size();
        } else {
            line = text.substr(pos, eol - pos);
            pos = eol + 1;
        }
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        return true;
    }
};

class Parser {
public:
    explicit Parser(std::string_view text) : reader_{text} {}

    ParseResult run() {
        std::string_view line;
        while (reader_.next(line)) {
            handle_line(line);
        }
        if (in_table_) {
            diag(Severity::error, "end of input inside table <" + open_tag_str() + ">");
            finish_table();
        }
        if (in_system_) {
            diag(Severity::error, "end of input inside system statement");
            in_system_ = false;
        }
        return std::move(result_);
    }

private:
    LineReader reader_;
    ParseResult result_;

    bool in_system_ = false;
    bool in_table_ = false;
    TagName open_tag_;
    ClassTable table_;
    bool saw_header_ = false;

    std::string open_tag_str() const {
        return open_tag_.class_name + "::" + open_tag_.section_name;
    }

    void diag(Severity sev, std::string msg) {
        result_.diagnostics.push_back({reader_.line_no, sev, std::move(msg)});
    }

    void finish_table() {
        result_.doc.tables.push_back(std::move(table_));
        table_ = ClassTable{};
        in_table_ = false;
        saw_header_ = false;
    }

    void handle_line(std::string_view raw) {
        std::string_view line = trim(raw);
        if (in_system_) {
            consume_system_line(line);
            return;
        }
        if (line.empty()) return;

        if (line.starts_with("<!")) {
            in_system_ = true;
            consume_system_line(line.substr(2));
            return;
        }
        if (line.starts_with("</")) {
            handle_close(line);
            return;
        }
        if (line.front() == '<') {
            handle_open(line);
            return;
        }
        if (line.front() == '@') {
            handle_header(line.substr(1));
            return;
        }
        if (line.front() == '#') {
            handle_row(line.substr(1));
            return;
        }
        if (line.starts_with("//")) {
            handle_comment(line.substr(2));
            return;
        }
        if (in_table_) {
            diag(Severity::error, "unrecognized line inside table <" + open_tag_str() + ">, dropped");
        } else {
            diag(Severity::error, "content outside any table, dropped");
        }
    }

    void consume_system_line(std::string_view content) {
        auto end = content.find("!>");
        auto body = trim(end == std::string_view::npos ? content : content.substr(0, end));
        // Blank statement lines are never stored, so serialize/parse agree.
        if (!body.empty()) result_.doc.system_statements.emplace_back(body);
        if (end == std::string_view::npos) return;
        auto tail = trim(content.substr(end + 2));
        if (!tail.empty()) {
            diag(Severity::warning, "trailing content after '!>' ignored");
        }
        in_system_ = false;
    }

    void handle_open(std::string_view line) {
        if (line.back() != '>') {
            diag(Severity::error, "malformed class tag, line dropped");
            return;
        }
        TagName tag;
        if (!parse_tag(line.substr(1, line.size() - 2), tag)) {
            diag(Severity::error, "malformed class tag, line dropped");
            return;
        }
        if (in_table_) {
            // Tables cannot nest: close the open one best-effort and
            // resynchronize on the new boundary.
            diag(Severity::error,
                 "table <" + open_tag_str() + "> not closed before <" + tag.class_name +
                     "::" + tag.section_name + "> opens");
            finish_table();
        }
        in_table_ = true;
        open_tag_ = tag;
        table_.class_name = tag.class_name;
        table_.section_name = tag.section_name;
    }

    void handle_close(std::string_view line) {
        if (!in_table_) {
            diag(Severity::error, "close tag without an open table, ignored");
            return;
        }
        TagName tag;
        if (line.back() != '>' || !parse_tag(line.substr(2, line.size() - 3), tag)) {
            diag(Severity::error, "malformed close tag for <" + open_tag_str() + ">, table closed");
            finish_table();
            return;
        }
        if (tag.class_name != open_tag_.class_name || tag.section_name != open_tag_.section_name) {
            diag(Severity::error,
                 "close tag </" + tag.class_name + "::" + tag.section_name +
                     "> does not match open tag <" + open_tag_str() + ">");
        }
        finish_table();
    }

    void handle_header(std::string_view rest) {
        if (!in_table_) {
            diag(Severity::error, "attribute header outside any table, dropped");
            return;
        }
        if (saw_header_) {
            diag(Severity::error, "duplicate attribute header in table <" + open_tag_str() + ">, ignored");
            return;
        }
        table_.attributes = split_fields(rest);
        saw_header_ = true;
    }

    void handle_row(std::string_view rest) {
        if (!in_table_) {
            diag(Severity::error, "object row outside any table, dropped");
            return;
        }
        auto fields = split_fields(rest);
        const std::size_t want = table_.attributes.size();
        if (fields.size() < want) {
            diag(Severity::error,
                 "row has " + std::to_string(fields.size()) + " fields, header has " +
                     std::to_string(want) + "; padded");
            fields.resize(want);
        } else if (fields.size() > want) {
            diag(Severity::error,
                 "row has " + std::to_string(fields.size()) + " fields, header has " +
                     std::to_string(want) + "; truncated");
            fields.resize(want);
        }
        table_.rows.push_back(std::move(fields));
    }

    void handle_comment(std::string_view body) {
        if (!in_table_) return;  // comments outside tables carry nothing
        table_.comments.emplace_back(table_.rows.size(), std::string(trim(body)));
    }
};

}  // namespace

bool ParseResult::ok() const { return error_count() == 0; }

std::size_t ParseResult::error_count() const {
    return static_cast<std::size_t>(
        std::count_if(diagnostics.begin(), diagnostics.end(),
                      [](const ParseDiagnostic& d) { return d.severity == Severity::error; }));
}

ParseResult parse_cime(std::string_view text) { return Parser(text).run(); }

std::string serialize_cime(const RawDocument& doc) {
    std::ostringstream out;
    for (const auto& stmt : doc.system_statements) {
        out << "<! " << stmt << " !>\n";
    }
    for (const auto& table : doc.tables) {
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            if (table.rows[r].size() != table.attributes.size()) {
                throw Error("serialize_cime: table " + table.class_name + " row " +
                            std::to_string(r) + " has " + std::to_string(table.rows[r].size()) +
                            " fields, header has " + std::to_string(table.attributes.size()));
            }
        }
        out << '<' << table.class_name << "::" << table.section_name << ">\n";
        out << '@';
        for (const auto& attr : table.attributes) out << '\t' << attr;
        out << '\n';
        auto comment = table.comments.begin();
        auto emit_comments_before = [&](std::size_t row_index) {
            while (comment != table.comments.end() && comment->first <= row_index) {
                out << "// " << comment->second << '\n';
                ++comment;
            }
        };
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            emit_comments_before(r);
            out << '#';
            for (const auto& field : table.rows[r]) out << '\t' << field;
            out << '\n';
        }
        emit_comments_before(table.rows.size());
        out << "</" << table.class_name << "::" << table.section_name << ">\n";
    }
    return out.str();
}

const ClassTable* get_table(const RawDocument& doc, std::string_view class_name) {
    for (const auto& table : doc.tables) {
        if (table.class_name == class_name) return &table;
    }
    return nullptr;
}

}  // namespace cimgraph
