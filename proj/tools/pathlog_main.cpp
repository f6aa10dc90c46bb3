#include "pathlog/compiler.hpp"
#include "pathlog/engine.hpp"
#include "pathlog/graph.hpp"
#include "pathlog/indexing.hpp"
#include "pathlog/nrpq.hpp"
#include "pathlog/reference_eval.hpp"
#include "pathlog/tdn.hpp"
#include "pathlog/xml.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace pathlog;
using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    out << text;
}

// "all", "@file" (whitespace-separated ids) or a comma-separated id list.
NodeSet parse_start(const std::string& spec, const LabeledGraph& g) {
    NodeSet out;
    if (spec == "all") return g.nodes;
    if (!spec.empty() && spec[0] == '@') {
        std::istringstream in(read_file(spec.substr(1)));
        NodeId id;
        while (in >> id) out.insert(id);
    } else {
        std::string cur;
        std::istringstream in(spec);
        while (std::getline(in, cur, ','))
            if (!cur.empty()) out.insert(cur);
    }
    for (const NodeId& v : out)
        if (!g.has_node(v))
            throw ValidationError("start node '" + v + "' is not in the graph");
    return out;
}

IndexDef parse_def(const std::string& spec, const std::set<Label>& alphabet) {
    auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ValidationError("index definition must look like name=QUERY");
    IndexDef def;
    def.name = spec.substr(0, eq);
    def.definition = desugar(parse_path(spec.substr(eq + 1)), alphabet);
    return def;
}

NodeSet answer_nodes(const std::set<Substitution>& answers, const std::string& var) {
    NodeSet out;
    for (const Substitution& s : answers) {
        const Term* t = s.lookup(var);
        if (t && !t->is_var()) out.insert(t->text);
    }
    return out;
}

struct EvalOptions {
    std::string graph_file;
    std::string query_text;
    std::string filter_text;
    std::string start_spec;
    std::string engine = "topdown";
    std::vector<std::string> reports;
    bool json = false;
};

int run_eval(const EvalOptions& opt, bool tdn_only) {
    LabeledGraph g = load_graph(read_file(opt.graph_file));
    if (opt.query_text.empty() == opt.filter_text.empty())
        throw ValidationError("exactly one of --query / --filter is required");
    NodeSet start = parse_start(opt.start_spec, g);

    PathPtr path;
    FilterPtr filter;
    if (!opt.query_text.empty())
        path = desugar(parse_path(opt.query_text), g.edge_alphabet());
    else
        filter = desugar(parse_filter(opt.filter_text), g.edge_alphabet());

    auto compute_tdn = [&] {
        return path ? tdn_path(g, start, *path) : tdn_filter(g, start, *filter);
    };

    if (tdn_only) {
        std::cout << emit_facts(compute_tdn());
        return 0;
    }

    std::set<std::string> reports(opt.reports.begin(), opt.reports.end());
    for (const std::string& r : reports)
        if (r != "visited" && r != "tdn" && r != "reached" && r != "stats")
            throw ValidationError("unknown report '" + r + "'");

    NodeSet answers;
    EvalResult result;
    bool have_result = false;

    if (opt.engine == "reference") {
        answers = path ? eval_path_from(g, *path, start) : eval_filter_from(g, *filter, start);
    } else {
        CompilationUnit cu =
            path ? compile_query(*path, start) : compile_filter_query(*filter, start);
        FactDb db = to_facts(g);
        if (opt.engine == "bottomup") {
            auto model = eval_bottomup_naive(cu.program, db);
            answers = answer_nodes(answers_from_model(cu.goal, model, db), "X");
        } else if (opt.engine == "topdown") {
            result = eval_topdown(Query{cu.goal, cu.program}, db);
            have_result = true;
            answers = answer_nodes(result.answers, "X");
        } else {
            throw ValidationError("unknown engine '" + opt.engine + "'");
        }
    }

    if (!have_result)
        for (std::string r : {"visited", "reached", "stats"})
            if (reports.count(r))
                throw ValidationError("report '" + r + "' is only available with --engine topdown");

    if (opt.json) {
        ordered_json out;
        out["answers"] = answers;
        if (have_result) {
            out["visited_count"] = result.visited.size();
            out["stats"] = {{"calls", result.stats.calls},
                            {"resumptions", result.stats.resumptions},
                            {"probes", result.stats.probes}};
        }
        if (reports.count("visited")) {
            std::vector<std::string> facts;
            for (const Fact& f : result.visited.facts()) facts.push_back(f.str());
            out["visited"] = facts;
        }
        if (reports.count("tdn")) {
            std::vector<std::string> facts;
            for (const Fact& f : compute_tdn().facts()) facts.push_back(f.str());
            out["tdn"] = facts;
        }
        if (reports.count("reached")) {
            ordered_json reached = ordered_json::object();
            for (const auto& [pred, nodes] : result.reached) reached[pred] = nodes;
            out["reached"] = reached;
        }
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    for (const NodeId& v : answers) std::cout << v << "\n";
    if (reports.count("visited")) {
        std::cout << "-- visited\n" << emit_facts(result.visited);
    }
    if (reports.count("tdn")) {
        std::cout << "-- tdn\n" << emit_facts(compute_tdn());
    }
    if (reports.count("reached")) {
        std::cout << "-- reached\n";
        for (const auto& [pred, nodes] : result.reached) {
            std::cout << pred << ":";
            for (const NodeId& v : nodes) std::cout << " " << v;
            std::cout << "\n";
        }
    }
    if (reports.count("stats")) {
        std::cout << "-- stats\n"
                  << "calls " << result.stats.calls << "\n"
                  << "resumptions " << result.stats.resumptions << "\n"
                  << "probes " << result.stats.probes << "\n";
    }
    return 0;
}

struct BenchRow {
    int depth = 0;
    int elements = 0;
    std::size_t facts = 0;
    std::size_t answers = 0;
    std::size_t visited = 0;
    EvalStats stats;
    bool indexed = false;
    std::size_t indexed_visited = 0;
    EvalStats indexed_stats;
};

BenchRow bench_one(int depth, int fanout, double density, std::uint64_t seed,
                   const std::string& xpath, bool indexed) {
    BenchRow row;
    row.depth = depth;
    std::string doc = gen_synthetic_doc(depth, fanout, density, seed);
    XmlGraphEncoding enc = xml_to_graph(doc);
    row.elements = static_cast<int>(enc.graph.labeled_nodes("element").size());

    XPathExpr expr = xpath_parse(xpath);
    PathPtr plain = xpath_to_nrpq(expr);
    FactDb db = to_facts(enc.graph);
    row.facts = db.size();

    CompilationUnit cu = compile_query(*plain, {enc.document_node});
    EvalResult res = eval_topdown(Query{cu.goal, cu.program}, db);
    row.answers = res.answers.size();
    row.visited = res.visited.size();
    row.stats = res.stats;

    if (indexed) {
        if (expr.steps.size() != 2 || expr.steps[0].axis != XPathStep::Axis::Descendant ||
            expr.steps[1].axis != XPathStep::Axis::Descendant || expr.steps[0].wildcard ||
            expr.steps[1].wildcard)
            throw ValidationError("--indexed requires an //outer//inner expression");
        auto [defs, query] = indexed_descendant_query(expr.steps[0].name, expr.steps[1].name);
        LabeledGraph enriched = enc.graph;
        for (const IndexDef& def : defs) enriched = build_index(enriched, def);
        CompilationUnit icu = compile_query(*query, {enc.document_node});
        EvalResult ires = eval_topdown(Query{icu.goal, icu.program}, to_facts(enriched));
        if (answer_nodes(ires.answers, "X") != answer_nodes(res.answers, "X"))
            throw Error("indexed and plain answers disagree");
        row.indexed = true;
        row.indexed_visited = ires.visited.size();
        row.indexed_stats = ires.stats;
    }
    return row;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nested regular path queries over labeled graphs"};
    app.require_subcommand(1);

    EvalOptions eval_opt;
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a query on a graph");
    eval_cmd->add_option("--graph", eval_opt.graph_file, "graph file")->required();
    eval_cmd->add_option("--query", eval_opt.query_text, "path query");
    eval_cmd->add_option("--filter", eval_opt.filter_text, "filter query");
    eval_cmd->add_option("--start", eval_opt.start_spec,
                         "start nodes: id1,id2 | @file | all")->required();
    eval_cmd->add_option("--engine", eval_opt.engine, "topdown | bottomup | reference");
    eval_cmd->add_option("--report", eval_opt.reports, "visited, tdn, reached, stats")
        ->delimiter(',');
    eval_cmd->add_flag("--json", eval_opt.json, "machine-readable output");

    EvalOptions tdn_opt;
    CLI::App* tdn_cmd = app.add_subcommand("tdn", "emit the needed subgraph facts");
    tdn_cmd->add_option("--graph", tdn_opt.graph_file, "graph file")->required();
    tdn_cmd->add_option("--query", tdn_opt.query_text, "path query");
    tdn_cmd->add_option("--filter", tdn_opt.filter_text, "filter query");
    tdn_cmd->add_option("--start", tdn_opt.start_spec, "start nodes")->required();

    struct {
        std::string query, filter, start, graph;
    } compile_opt;
    CLI::App* compile_cmd = app.add_subcommand("compile", "compile a query to datalog");
    compile_cmd->add_option("--query", compile_opt.query, "path query");
    compile_cmd->add_option("--filter", compile_opt.filter, "filter query");
    compile_cmd->add_option("--start", compile_opt.start, "start nodes")->required();
    compile_cmd->add_option("--graph", compile_opt.graph,
                            "graph file (for wildcards and --start all)");

    struct {
        std::string graph, out;
        std::vector<std::string> defs;
    } index_opt;
    CLI::App* index_cmd = app.add_subcommand("index", "index operations");
    index_cmd->require_subcommand(1);
    CLI::App* index_build = index_cmd->add_subcommand("build", "materialize index relations");
    index_build->add_option("--graph", index_opt.graph, "graph file")->required();
    index_build->add_option("--def", index_opt.defs, "name=QUERY definition")
        ->required()->take_all();
    index_build->add_option("-o,--out", index_opt.out, "output file (default stdout)");

    struct {
        std::string query, graph;
        std::vector<std::string> defs;
    } rewrite_opt;
    CLI::App* rewrite_cmd = app.add_subcommand("rewrite", "substitute index definitions");
    rewrite_cmd->add_option("--query", rewrite_opt.query, "path query")->required();
    rewrite_cmd->add_option("--def", rewrite_opt.defs, "name=QUERY definition")
        ->required()->take_all();
    rewrite_cmd->add_option("--graph", rewrite_opt.graph, "graph file (for wildcards)");

    struct {
        std::string input, out;
    } x2g_opt;
    CLI::App* x2g_cmd = app.add_subcommand("xml2graph", "encode an XML document as a graph");
    x2g_cmd->add_option("input", x2g_opt.input, "XML file ('-' for stdin)")->required();
    x2g_cmd->add_option("-o,--out", x2g_opt.out, "output file (default stdout)");

    std::string xpath_expr;
    CLI::App* xp_cmd = app.add_subcommand("xpath2nrpq", "translate an XPath expression");
    xp_cmd->add_option("expression", xpath_expr, "absolute /, // expression")->required();

    struct {
        int depth = 3, fanout = 2;
        double density = 1.0;
        std::uint64_t seed = 7;
        std::string out;
    } gen_opt;
    CLI::App* gen_cmd = app.add_subcommand("gen-xml", "generate a synthetic document");
    gen_cmd->add_option("--depth", gen_opt.depth, "listitem nesting depth");
    gen_cmd->add_option("--fanout", gen_opt.fanout, "children per level");
    gen_cmd->add_option("--density", gen_opt.density, "keyword probability [0,1]");
    gen_cmd->add_option("--seed", gen_opt.seed, "random seed");
    gen_cmd->add_option("-o,--out", gen_opt.out, "output file (default stdout)");

    struct {
        std::vector<int> depths{1, 2, 3};
        int fanout = 2;
        double density = 1.0;
        std::uint64_t seed = 7;
        std::string xpath = "//listitem//keyword";
        bool indexed = false;
        bool json = false;
    } bench_opt;
    CLI::App* bench_cmd = app.add_subcommand("bench", "measure work on synthetic documents");
    bench_cmd->add_option("--depths", bench_opt.depths, "document depths")->delimiter(',');
    bench_cmd->add_option("--fanout", bench_opt.fanout, "children per level");
    bench_cmd->add_option("--density", bench_opt.density, "keyword probability");
    bench_cmd->add_option("--seed", bench_opt.seed, "random seed");
    bench_cmd->add_option("--xpath", bench_opt.xpath, "query to measure");
    bench_cmd->add_flag("--indexed", bench_opt.indexed, "also run the jump-indexed form");
    bench_cmd->add_flag("--json", bench_opt.json, "machine-readable output");

    try {
        app.parse(argc, argv);

        if (eval_cmd->parsed()) return run_eval(eval_opt, false);
        if (tdn_cmd->parsed()) return run_eval(tdn_opt, true);

        if (compile_cmd->parsed()) {
            if (compile_opt.query.empty() == compile_opt.filter.empty())
                throw ValidationError("exactly one of --query / --filter is required");
            std::set<Label> alphabet;
            LabeledGraph g;
            bool have_graph = !compile_opt.graph.empty();
            if (have_graph) {
                g = load_graph(read_file(compile_opt.graph));
                alphabet = g.edge_alphabet();
            }
            NodeSet start;
            if (have_graph) {
                start = parse_start(compile_opt.start, g);
            } else {
                if (compile_opt.start == "all")
                    throw ValidationError("--start all needs --graph");
                std::string cur;
                std::istringstream in(compile_opt.start);
                while (std::getline(in, cur, ','))
                    if (!cur.empty()) start.insert(cur);
            }
            CompilationUnit cu =
                !compile_opt.query.empty()
                    ? compile_query(*desugar(parse_path(compile_opt.query), alphabet), start)
                    : compile_filter_query(*desugar(parse_filter(compile_opt.filter), alphabet),
                                           start);
            std::cout << emit_text(cu);
            return 0;
        }

        if (index_build->parsed()) {
            LabeledGraph g = load_graph(read_file(index_opt.graph));
            for (const std::string& spec : index_opt.defs)
                g = build_index(g, parse_def(spec, g.edge_alphabet()));
            write_output(index_opt.out, emit_graph(g));
            return 0;
        }

        if (rewrite_cmd->parsed()) {
            std::set<Label> alphabet;
            if (!rewrite_opt.graph.empty())
                alphabet = load_graph(read_file(rewrite_opt.graph)).edge_alphabet();
            std::vector<IndexDef> defs;
            for (const std::string& spec : rewrite_opt.defs)
                defs.push_back(parse_def(spec, alphabet));
            PathPtr q = desugar(parse_path(rewrite_opt.query), alphabet);
            std::cout << to_text(*rewrite_with_indexes(q, defs)) << "\n";
            return 0;
        }

        if (x2g_cmd->parsed()) {
            XmlGraphEncoding enc = xml_to_graph(read_file(x2g_opt.input));
            write_output(x2g_opt.out,
                         "# document node: " + enc.document_node + "\n" + emit_graph(enc.graph));
            return 0;
        }

        if (xp_cmd->parsed()) {
            std::cout << to_text(*xpath_to_nrpq(xpath_parse(xpath_expr))) << "\n";
            return 0;
        }

        if (gen_cmd->parsed()) {
            write_output(gen_opt.out, gen_synthetic_doc(gen_opt.depth, gen_opt.fanout,
                                                        gen_opt.density, gen_opt.seed));
            return 0;
        }

        if (bench_cmd->parsed()) {
            std::vector<BenchRow> rows;
            for (int depth : bench_opt.depths)
                rows.push_back(bench_one(depth, bench_opt.fanout, bench_opt.density,
                                         bench_opt.seed, bench_opt.xpath, bench_opt.indexed));
            if (bench_opt.json) {
                ordered_json out = ordered_json::array();
                for (const BenchRow& r : rows) {
                    ordered_json row{{"depth", r.depth},     {"elements", r.elements},
                                     {"facts", r.facts},     {"answers", r.answers},
                                     {"visited", r.visited}, {"calls", r.stats.calls},
                                     {"resumptions", r.stats.resumptions},
                                     {"probes", r.stats.probes}};
                    if (r.indexed) {
                        row["indexed_visited"] = r.indexed_visited;
                        row["indexed_resumptions"] = r.indexed_stats.resumptions;
                        row["indexed_probes"] = r.indexed_stats.probes;
                    }
                    out.push_back(row);
                }
                std::cout << out.dump(2) << "\n";
            } else {
                std::cout << "depth elements facts answers visited resumptions probes";
                if (bench_opt.indexed) std::cout << " i_visited i_resumptions i_probes";
                std::cout << "\n";
                for (const BenchRow& r : rows) {
                    std::cout << r.depth << " " << r.elements << " " << r.facts << " "
                              << r.answers << " " << r.visited << " " << r.stats.resumptions
                              << " " << r.stats.probes;
                    if (r.indexed)
                        std::cout << " " << r.indexed_visited << " "
                                  << r.indexed_stats.resumptions << " "
                                  << r.indexed_stats.probes;
                    std::cout << "\n";
                }
            }
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const pathlog::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
