#include "pathlog/graph.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace pathlog {

std::set<Label> LabeledGraph::edge_alphabet() const {
    std::set<Label> out;
    for (const auto& [label, pairs] : edges) out.insert(label);
    return out;
}

const std::set<std::pair<NodeId, NodeId>>& LabeledGraph::edge_set(const Label& a) const {
    static const std::set<std::pair<NodeId, NodeId>> empty;
    auto it = edges.find(a);
    return it == edges.end() ? empty : it->second;
}

const std::set<NodeId>& LabeledGraph::labeled_nodes(const Label& a) const {
    static const std::set<NodeId> empty;
    auto it = node_labels.find(a);
    return it == node_labels.end() ? empty : it->second;
}

std::string Fact::predicate() const {
    switch (kind) {
    case FactKind::Node: return "node";
    case FactKind::NodeLabel: return "node_" + label;
    case FactKind::Edge: return "edge_" + label;
    }
    return "node";
}

std::string Fact::str() const {
    if (kind == FactKind::Edge) return predicate() + "(" + a + "," + b + ")";
    return predicate() + "(" + a + ")";
}

bool Fact::operator<(const Fact& o) const {
    return std::make_tuple(predicate(), a, b) < std::make_tuple(o.predicate(), o.a, o.b);
}

Fact node_fact(NodeId v) {
    Fact f;
    f.kind = FactKind::Node;
    f.a = std::move(v);
    return f;
}

Fact node_label_fact(Label l, NodeId v) {
    Fact f;
    f.kind = FactKind::NodeLabel;
    f.label = std::move(l);
    f.a = std::move(v);
    return f;
}

Fact edge_fact(Label l, NodeId src, NodeId dst) {
    Fact f;
    f.kind = FactKind::Edge;
    f.label = std::move(l);
    f.a = std::move(src);
    f.b = std::move(dst);
    return f;
}

struct FactDb::Lazy {
    std::once_flag once;
    std::unique_ptr<const FactIndex> index;
};

FactDb::FactDb() : lazy_(std::make_shared<Lazy>()) {}

FactDb::FactDb(std::set<Fact> facts)
    : facts_(std::move(facts)), lazy_(std::make_shared<Lazy>()) {}

const FactIndex& FactDb::index() const {
    auto holder = lazy_;
    std::call_once(holder->once,
                   [&] { holder->index = std::make_unique<FactIndex>(facts_); });
    return *holder->index;
}

FactIndex::FactIndex(const std::set<Fact>& facts) {
    for (const Fact& f : facts) {
        Relation& rel = rels_[f.predicate()];
        rel.arity = f.arity();
        rel.all.push_back(&f);
        rel.by_first[f.a].push_back(&f);
        if (f.arity() == 2) rel.by_second[f.b].push_back(&f);
    }
}

const FactIndex::Relation* FactIndex::relation(const std::string& predicate) const {
    auto it = rels_.find(predicate);
    return it == rels_.end() ? nullptr : &it->second;
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

} // namespace

LabeledGraph load_graph(const std::string& text) {
    // Two passes so line order never matters: nodes first, then labels/edges.
    struct Pending {
        int line;
        std::vector<std::string> tokens;
    };
    LabeledGraph g;
    std::vector<Pending> rest;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        const std::string& kw = tokens[0];
        if (kw == "node") {
            if (tokens.size() != 2)
                throw ParseError("graph line " + std::to_string(lineno) +
                                 ": expected 'node <id>'");
            g.nodes.insert(tokens[1]);
        } else if (kw == "label" || kw == "edge") {
            rest.push_back({lineno, std::move(tokens)});
        } else {
            throw ParseError("graph line " + std::to_string(lineno) +
                             ": unknown directive '" + kw + "'");
        }
    }

    for (const auto& [ln, tokens] : rest) {
        auto require_node = [&](const std::string& id) {
            if (!g.has_node(id))
                throw ValidationError("graph line " + std::to_string(ln) +
                                      ": unknown node '" + id + "'");
        };
        if (tokens[0] == "label") {
            if (tokens.size() != 3)
                throw ParseError("graph line " + std::to_string(ln) +
                                 ": expected 'label <name> <id>'");
            require_node(tokens[2]);
            g.node_labels[tokens[1]].insert(tokens[2]);
        } else {
            if (tokens.size() != 4)
                throw ParseError("graph line " + std::to_string(ln) +
                                 ": expected 'edge <name> <src> <dst>'");
            require_node(tokens[2]);
            require_node(tokens[3]);
            g.edges[tokens[1]].insert({tokens[2], tokens[3]});
        }
    }
    return g;
}

std::string emit_graph(const LabeledGraph& g) { return emit_facts(to_facts(g)); }

FactDb to_facts(const LabeledGraph& g) {
    std::set<Fact> facts;
    for (const NodeId& v : g.nodes) facts.insert(node_fact(v));
    for (const auto& [label, vs] : g.node_labels)
        for (const NodeId& v : vs) facts.insert(node_label_fact(label, v));
    for (const auto& [label, pairs] : g.edges)
        for (const auto& [src, dst] : pairs) facts.insert(edge_fact(label, src, dst));
    return FactDb(std::move(facts));
}

LabeledGraph from_facts(const FactDb& db) {
    LabeledGraph g;
    for (const Fact& f : db.facts())
        if (f.kind == FactKind::Node) g.nodes.insert(f.a);
    for (const Fact& f : db.facts()) {
        if (f.kind == FactKind::NodeLabel) {
            if (!g.has_node(f.a))
                throw ValidationError("fact " + f.str() + " labels a missing node");
            g.node_labels[f.label].insert(f.a);
        } else if (f.kind == FactKind::Edge) {
            if (!g.has_node(f.a) || !g.has_node(f.b))
                throw ValidationError("fact " + f.str() + " touches a missing node");
            g.edges[f.label].insert({f.a, f.b});
        }
    }
    return g;
}

std::string emit_facts(const FactDb& db) {
    // node lines, then label lines, then edge lines; each group sorted.
    std::ostringstream out;
    for (const Fact& f : db.facts())
        if (f.kind == FactKind::Node) out << "node " << f.a << "\n";
    for (const Fact& f : db.facts())
        if (f.kind == FactKind::NodeLabel) out << "label " << f.label << " " << f.a << "\n";
    for (const Fact& f : db.facts())
        if (f.kind == FactKind::Edge)
            out << "edge " << f.label << " " << f.a << " " << f.b << "\n";
    return out.str();
}

LabeledGraph add_edge_relation(const LabeledGraph& g, const Label& label,
                               const std::set<std::pair<NodeId, NodeId>>& pairs) {
    if (g.edges.count(label) != 0)
        throw ValidationError("edge label '" + label + "' already present");
    LabeledGraph out = g;
    for (const auto& [src, dst] : pairs) {
        if (!g.has_node(src) || !g.has_node(dst))
            throw ValidationError("edge " + label + " " + src + " " + dst +
                                  " touches a missing node");
        out.edges[label].insert({src, dst});
    }
    return out;
}

} // namespace pathlog
