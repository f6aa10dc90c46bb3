#pragma once

#include "pathlog/common.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pathlog {

// Finite edge- and node-labeled directed graph. Node labels and edge labels
// live in separate maps; a label may be used in both roles.
struct LabeledGraph {
    std::set<NodeId> nodes;
    std::map<Label, std::set<NodeId>> node_labels;
    std::map<Label, std::set<std::pair<NodeId, NodeId>>> edges;

    bool has_node(const NodeId& v) const { return nodes.count(v) != 0; }
    std::set<Label> edge_alphabet() const;
    const std::set<std::pair<NodeId, NodeId>>& edge_set(const Label& a) const;
    const std::set<NodeId>& labeled_nodes(const Label& a) const;

    bool operator==(const LabeledGraph&) const = default;
};

enum class FactKind { Node, NodeLabel, Edge };

// Ground relational fact: node(v), node_a(v) or edge_a(v,v').
struct Fact {
    FactKind kind = FactKind::Node;
    Label label;  // empty for FactKind::Node
    NodeId a;
    NodeId b;  // empty unless kind == Edge

    std::string predicate() const;
    int arity() const { return kind == FactKind::Edge ? 2 : 1; }
    std::string str() const;

    bool operator==(const Fact&) const = default;
    bool operator<(const Fact& o) const;
};

Fact node_fact(NodeId v);
Fact node_label_fact(Label l, NodeId v);
Fact edge_fact(Label l, NodeId src, NodeId dst);

class FactIndex;

// Immutable set of facts ordered by (predicate, args). Carries a lazily built
// per-predicate index shared across copies; initialization is once-only and
// thread-safe.
class FactDb {
public:
    FactDb();
    explicit FactDb(std::set<Fact> facts);

    const std::set<Fact>& facts() const { return facts_; }
    bool contains(const Fact& f) const { return facts_.count(f) != 0; }
    std::size_t size() const { return facts_.size(); }
    bool empty() const { return facts_.empty(); }

    const FactIndex& index() const;

    bool operator==(const FactDb& o) const { return facts_ == o.facts_; }

private:
    struct Lazy;
    std::set<Fact> facts_;
    std::shared_ptr<Lazy> lazy_;
};

// Hash indexes over a fact set: per predicate, all tuples plus one map per
// argument position. Probes never scan facts of unrelated predicates.
class FactIndex {
public:
    struct Relation {
        int arity = 1;
        std::vector<const Fact*> all;
        std::unordered_map<NodeId, std::vector<const Fact*>> by_first;
        std::unordered_map<NodeId, std::vector<const Fact*>> by_second;  // arity 2 only
    };

    explicit FactIndex(const std::set<Fact>& facts);
    // Null when no fact of this predicate exists.
    const Relation* relation(const std::string& predicate) const;

private:
    std::unordered_map<std::string, Relation> rels_;
};

LabeledGraph load_graph(const std::string& text);
std::string emit_graph(const LabeledGraph& g);

FactDb to_facts(const LabeledGraph& g);
// Rejects fact sets violating well-formedness (labeled or edge-connected
// nodes must carry a node fact); the error names the offending fact.
LabeledGraph from_facts(const FactDb& db);
// Facts in graph-file syntax, sorted: nodes, then labels, then edges.
std::string emit_facts(const FactDb& db);

// Copy of g extended with a fresh edge relation. Errors if the label is
// already an edge label or an endpoint is not a node of g.
LabeledGraph add_edge_relation(const LabeledGraph& g, const Label& label,
                               const std::set<std::pair<NodeId, NodeId>>& pairs);

} // namespace pathlog
