// cimgraph CLI: synthesize node-breaker CIM/E cases, export graph loading
// files, run network topology processing, benchmark it, and diff results.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cimgraph/cime.hpp"
#include "cimgraph/diff.hpp"
#include "cimgraph/error.hpp"
#include "cimgraph/export.hpp"
#include "cimgraph/graph.hpp"
#include "cimgraph/model.hpp"
#include "cimgraph/ntp.hpp"
#include "cimgraph/parallel.hpp"
#include "cimgraph/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPipeline = 1;
constexpr int kExitUsage = 2;

namespace fs = std::filesystem;
using cimgraph::Strategy;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cimgraph::Error("cannot read file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cimgraph::Error("cannot write file: " + path.string());
    out << content;
}

Strategy parse_strategy(const std::string& s) {
    if (s == "a" || s == "A") return Strategy::A;
    if (s == "b" || s == "B") return Strategy::B;
    throw cimgraph::Error("unknown strategy '" + s + "' (expected a or b)");
}

// "auto" maps to 0, which the library resolves to hardware concurrency.
unsigned parse_parallelism(const std::string& s) {
    if (s == "auto") return 0;
    try {
        long value = std::stol(s);
        if (value >= 1) return static_cast<unsigned>(value);
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("--parallelism", "expected a positive integer or 'auto'");
}

void print_diagnostics(const std::vector<cimgraph::ParseDiagnostic>& diagnostics) {
    for (const auto& d : diagnostics) {
        std::cerr << "line " << d.line << ": "
                  << (d.severity == cimgraph::Severity::error ? "error" : "warning") << ": "
                  << d.message << "\n";
    }
}

void print_report(const cimgraph::ValidationReport& report) {
    for (const auto& issue : report.issues) {
        std::cerr << (issue.severity == cimgraph::Severity::error ? "error" : "warning") << ": "
                  << issue.message << "\n";
    }
}

cimgraph::GridModel load_and_bind(const fs::path& path, const std::string& mapping_path) {
    auto mapping = mapping_path.empty() ? cimgraph::AttributeMapping::defaults()
                                        : cimgraph::AttributeMapping::from_file(mapping_path);
    auto parsed = cimgraph::parse_cime(read_file(path));
    print_diagnostics(parsed.diagnostics);
    if (!parsed.ok()) {
        throw cimgraph::Error(path.string() + ": " + std::to_string(parsed.error_count()) +
                              " parse error(s)");
    }
    auto bound = cimgraph::bind_model(parsed.doc, mapping);
    print_report(bound.report);
    if (!bound.report.ok()) {
        throw cimgraph::Error(path.string() + ": model binding failed");
    }
    return std::move(bound.model);
}

struct KeyValuePrinter {
    bool delim;
    void operator()(const std::string& key, const std::string& value) const {
        if (delim) {
            std::cout << key << '\t' << value << '\n';
        } else {
            std::printf("%-16s %s\n", key.c_str(), value.c_str());
        }
    }
    void operator()(const std::string& key, double ms) const {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.1f", ms);
        (*this)(key, std::string(buf));
    }
    void operator()(const std::string& key, std::size_t n) const {
        (*this)(key, std::to_string(n));
    }
};

int cmd_synth(const std::string& case_path, std::size_t generate_buses,
              const std::string& template_path, std::uint64_t seed, double open_fraction,
              const std::string& out_path) {
    auto source = case_path.empty() ? cimgraph::generate_case(generate_buses, seed)
                                    : cimgraph::load_case_file(case_path);
    auto tmpl = template_path.empty() ? cimgraph::SubstationTemplate{}
                                      : cimgraph::SubstationTemplate::from_file(template_path);
    auto model = cimgraph::synthesize_node_breaker(source, tmpl, seed);
    if (open_fraction > 0.0) {
        model = cimgraph::perturb_switches(std::move(model), open_fraction, seed);
    }
    auto report = cimgraph::validate(model);
    print_report(report);
    if (!report.ok()) return kExitPipeline;
    write_file(out_path, cimgraph::serialize_cime(cimgraph::unbind_model(model)));

    std::cout << "wrote " << out_path << ": " << source.buses.size() << " buses, "
              << source.branches.size() << " branches -> " << model.substations.size()
              << " substations, " << model.switch_count() << " switches, "
              << model.connectivity_nodes.size() << " connectivity nodes\n";
    return kExitOk;
}

int cmd_export(const std::string& in_path, const std::string& strategy_name,
               const std::string& mapping_path, const std::string& out_dir) {
    auto model = load_and_bind(in_path, mapping_path);
    auto graph = cimgraph::build_graph(model, parse_strategy(strategy_name));
    cimgraph::export_graph_files(graph, out_dir);
    auto s = graph.stats();
    std::cout << "exported strategy " << cimgraph::to_string(graph.strategy()) << " loading files to "
              << out_dir << ": " << s.vertex_count << " vertices, " << s.edge_count << " edges, "
              << s.switch_count << " switches, " << s.substation_count << " substations\n";
    return kExitOk;
}

int cmd_ntp(const std::string& in_path, const std::string& strategy_name,
            const std::string& parallelism_text, const std::string& mapping_path,
            const std::string& out_dir, const std::string& format) {
    unsigned parallelism = parse_parallelism(parallelism_text);
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    auto model = load_and_bind(in_path, mapping_path);
    auto graph = cimgraph::build_graph(model, parse_strategy(strategy_name));
    double load_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();

    auto result = cimgraph::run_ntp(graph, parallelism);
    cimgraph::write_topology_files(result, out_dir);

    for (const auto& e : result.edges) {
        if (e.endpoints.first == e.endpoints.second) {
            std::cerr << "warning: device '" << e.device
                      << "' connects topology node '" << e.endpoints.first << "' to itself\n";
        }
    }

    KeyValuePrinter print{format == "delim"};
    print("nodes", result.nodes.size());
    print("edges", result.edges.size());
    print("islands", result.islands.size());
    print("load_ms", load_ms);
    print("substation_tp_ms", result.timing.substation_ms);
    print("network_tp_ms", result.timing.network_ms);
    print("island_ms", result.timing.island_ms);
    return kExitOk;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

int cmd_bench(const std::string& in_path, const std::string& strategies_text, int repetitions,
              const std::string& parallelism_text, const std::string& mapping_path,
              const std::string& format) {
    unsigned parallelism = parse_parallelism(parallelism_text);
    std::vector<Strategy> strategies;
    std::istringstream items(strategies_text);
    std::string item;
    while (std::getline(items, item, ',')) {
        if (!item.empty()) strategies.push_back(parse_strategy(item));
    }
    if (strategies.empty()) throw CLI::ValidationError("--strategies", "expected a, b or a,b");

    const bool delim = format == "delim";
    const std::string text = read_file(in_path);
    const auto mapping = mapping_path.empty() ? cimgraph::AttributeMapping::defaults()
                                              : cimgraph::AttributeMapping::from_file(mapping_path);
    using clock = std::chrono::steady_clock;

    if (delim) {
        std::cout << "strategy\tphase\tmin_ms\tmedian_ms\n";
    } else {
        std::printf("%-9s %-16s %10s %10s\n", "strategy", "phase", "min_ms", "median_ms");
    }
    for (Strategy strategy : strategies) {
        std::vector<double> load, substation, network, island, total;
        std::size_t nodes = 0, edges = 0, islands = 0;
        for (int rep = 0; rep < repetitions; ++rep) {
            auto t0 = clock::now();
            auto parsed = cimgraph::parse_cime(text);
            if (!parsed.ok()) throw cimgraph::Error(in_path + ": parse errors");
            auto bound = cimgraph::bind_model(parsed.doc, mapping);
            if (!bound.report.ok()) throw cimgraph::Error(in_path + ": bind errors");
            auto graph = cimgraph::build_graph(bound.model, strategy);
            double load_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();

            auto result = cimgraph::run_ntp(graph, parallelism);
            load.push_back(load_ms);
            substation.push_back(result.timing.substation_ms);
            network.push_back(result.timing.network_ms);
            island.push_back(result.timing.island_ms);
            total.push_back(result.timing.substation_ms + result.timing.network_ms +
                            result.timing.island_ms);
            nodes = result.nodes.size();
            edges = result.edges.size();
            islands = result.islands.size();
        }
        auto row = [&](const char* phase, const std::vector<double>& values) {
            double lo = *std::min_element(values.begin(), values.end());
            double mid = median(values);
            if (delim) {
                std::printf("%s\t%s\t%.1f\t%.1f\n",
                            std::string(cimgraph::to_string(strategy)).c_str(), phase, lo, mid);
            } else {
                std::printf("%-9s %-16s %10.1f %10.1f\n",
                            std::string(cimgraph::to_string(strategy)).c_str(), phase, lo, mid);
            }
        };
        row("load", load);
        row("substation_tp", substation);
        row("network_tp", network);
        row("island", island);
        row("ntp_total", total);
        std::cerr << "strategy " << cimgraph::to_string(strategy) << ": " << nodes << " nodes, "
                  << edges << " edges, " << islands << " islands\n";
    }
    return kExitOk;
}

int cmd_diff(const std::string& a, const std::string& b) {
    auto report = cimgraph::diff_topology(a, b);
    for (const auto& line : report.details) std::cout << line << "\n";
    if (report.equivalent) {
        std::cout << "equivalent\n";
        return kExitOk;
    }
    std::cout << "NOT equivalent\n";
    return kExitPipeline;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CIM/E grid model tooling: parse, synthesize, export, topology-process"};
    app.require_subcommand(1);

    std::string case_path, template_path, in_path, out_path, out_dir, mapping_path;
    std::string strategy = "b", strategies = "a,b", parallelism = "auto", format = "human";
    std::string diff_a, diff_b;
    std::uint64_t seed = 0;
    double open_fraction = 0.0;
    int repetitions = 5;

    std::size_t generate_buses = 0;
    auto* synth = app.add_subcommand("synth", "Synthesize a node-breaker CIM/E file from a bus-branch case");
    auto* case_opt =
        synth->add_option("--case", case_path, "bus-branch case file")->check(CLI::ExistingFile);
    synth->add_option("--generate", generate_buses, "generate a random connected case of N buses instead")
        ->check(CLI::PositiveNumber)
        ->excludes(case_opt);
    synth->add_option("--template", template_path, "substation template config")->check(CLI::ExistingFile);
    synth->add_option("--seed", seed, "deterministic seed");
    synth->add_option("--open-fraction", open_fraction, "fraction of switches to open")
        ->check(CLI::Range(0.0, 1.0));
    synth->add_option("--out", out_path, "output CIM/E path")->required();

    auto* exp = app.add_subcommand("export", "Export graph-database loading files from a CIM/E file");
    exp->add_option("--in", in_path, "CIM/E input")->required()->check(CLI::ExistingFile);
    exp->add_option("--strategy", strategy, "graph strategy: a (all vertices) or b (switches as edges)")
        ->check(CLI::IsMember({"a", "b", "A", "B"}));
    exp->add_option("--mapping", mapping_path, "attribute mapping file")->check(CLI::ExistingFile);
    exp->add_option("--out", out_dir, "output directory")->required();

    auto* ntp = app.add_subcommand("ntp", "Run network topology processing");
    ntp->add_option("--in", in_path, "CIM/E input")->required()->check(CLI::ExistingFile);
    ntp->add_option("--strategy", strategy, "graph strategy: a or b")
        ->check(CLI::IsMember({"a", "b", "A", "B"}));
    ntp->add_option("--parallelism", parallelism, "thread count or 'auto'");
    ntp->add_option("--mapping", mapping_path, "attribute mapping file")->check(CLI::ExistingFile);
    ntp->add_option("--out", out_dir, "output directory")->required();
    ntp->add_option("--format", format, "summary format")->check(CLI::IsMember({"human", "delim"}));

    auto* bench = app.add_subcommand("bench", "Benchmark topology processing");
    bench->add_option("--in", in_path, "CIM/E input")->required()->check(CLI::ExistingFile);
    bench->add_option("--strategies", strategies, "comma-separated strategies to run");
    bench->add_option("--repetitions", repetitions, "runs per strategy")->check(CLI::PositiveNumber);
    bench->add_option("--parallelism", parallelism, "thread count or 'auto'");
    bench->add_option("--mapping", mapping_path, "attribute mapping file")->check(CLI::ExistingFile);
    bench->add_option("--format", format, "table format")->check(CLI::IsMember({"human", "delim"}));

    auto* diff = app.add_subcommand("diff", "Compare two topology results for equivalence");
    diff->add_option("first", diff_a, "result directory or CIM/E file")->required()->check(CLI::ExistingPath);
    diff->add_option("second", diff_b, "result directory or CIM/E file")->required()->check(CLI::ExistingPath);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (synth->parsed()) {
            if (case_path.empty() && generate_buses == 0) {
                std::cerr << "synth: either --case or --generate is required\n";
                return kExitUsage;
            }
            return cmd_synth(case_path, generate_buses, template_path, seed, open_fraction, out_path);
        }
        if (exp->parsed()) return cmd_export(in_path, strategy, mapping_path, out_dir);
        if (ntp->parsed()) return cmd_ntp(in_path, strategy, parallelism, mapping_path, out_dir, format);
        if (bench->parsed()) return cmd_bench(in_path, strategies, repetitions, parallelism, mapping_path, format);
        if (diff->parsed()) return cmd_diff(diff_a, diff_b);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPipeline;
    }
    return kExitUsage;
}
