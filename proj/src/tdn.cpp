#include "pathlog/tdn.hpp"

namespace pathlog {

namespace {

// Both variants accumulate into one fact set. The start-set variant follows
// the evaluation frontier; the goto variant is start-set-free (evaluation can
// begin at any node, so label and edge relations are needed wholesale).

class TdnBuilder {
public:
    explicit TdnBuilder(const LabeledGraph& g) : g_(g) {}

    std::set<Fact> take() { return std::move(acc_); }

    void path(const Path& p, const NodeSet& start) {
        switch (p.kind) {
        case PathKind::Edge: {
            add_nodes(start);
            for (const auto& [s, d] : g_.edge_set(p.label))
                if (start.count(s)) {
                    acc_.insert(edge_fact(p.label, s, d));
                    acc_.insert(node_fact(d));
                }
            return;
        }
        case PathKind::EdgeInv: {
            add_nodes(start);
            for (const auto& [s, d] : g_.edge_set(p.label))
                if (start.count(d)) {
                    acc_.insert(edge_fact(p.label, s, d));
                    acc_.insert(node_fact(s));
                }
            return;
        }
        case PathKind::FilterStep: return filter(*p.filter, start);
        case PathKind::Goto: return goto_filter_(*p.filter);
        case PathKind::Concat: {
            path(*p.left, start);
            path(*p.right, eval_path_from(g_, *p.left, start));
            return;
        }
        case PathKind::Union:
            path(*p.left, start);
            path(*p.right, start);
            return;
        case PathKind::Plus: {
            // Iterating p can leave from anything p+ reaches, not just start.
            NodeSet from = eval_path_from(g_, p, start);
            from.insert(start.begin(), start.end());
            path(*p.left, from);
            return;
        }
        case PathKind::Star:
        case PathKind::AnyEdge:
            throw ValidationError("needed-subgraph requires a desugared path");
        }
    }

    void filter(const Filter& f, const NodeSet& start) {
        switch (f.kind) {
        case FilterKind::Truth: return add_nodes(start);
        case FilterKind::NodeLabel: {
            add_nodes(start);
            for (const NodeId& v : start)
                if (g_.labeled_nodes(f.label).count(v))
                    acc_.insert(node_label_fact(f.label, v));
            return;
        }
        case FilterKind::And: {
            filter(*f.left, start);
            // The right conjunct is only checked on nodes surviving the left.
            filter(*f.right, eval_filter_from(g_, *f.left, start));
            return;
        }
        case FilterKind::Or:
            filter(*f.left, start);
            filter(*f.right, start);
            return;
        case FilterKind::HasPath: return path(*f.path, start);
        case FilterKind::Not:
            throw UnsupportedError("needed-subgraph is defined for negation-free queries only");
        }
    }

    void goto_path_(const Path& p) {
        switch (p.kind) {
        case PathKind::Edge:
        case PathKind::EdgeInv: {
            for (const auto& [s, d] : g_.edge_set(p.label))
                acc_.insert(edge_fact(p.label, s, d));
            return;
        }
        case PathKind::FilterStep: return goto_filter_(*p.filter);
        case PathKind::Goto: return goto_filter_(*p.filter);
        case PathKind::Concat: {
            goto_path_(*p.left);
            path(*p.right, eval_path_from(g_, *p.left, g_.nodes));
            return;
        }
        case PathKind::Union:
            goto_path_(*p.left);
            goto_path_(*p.right);
            return;
        case PathKind::Plus:
            // Start-set-free: the union of all possible start sets is V.
            path(*p.left, g_.nodes);
            return;
        case PathKind::Star:
        case PathKind::AnyEdge:
            throw ValidationError("needed-subgraph requires a desugared path");
        }
    }

    void goto_filter_(const Filter& f) {
        switch (f.kind) {
        case FilterKind::Truth: return add_nodes(g_.nodes);
        case FilterKind::NodeLabel: {
            for (const NodeId& v : g_.labeled_nodes(f.label))
                acc_.insert(node_label_fact(f.label, v));
            return;
        }
        case FilterKind::And: {
            goto_filter_(*f.left);
            filter(*f.right, eval_filter(g_, *f.left));
            return;
        }
        case FilterKind::Or:
            goto_filter_(*f.left);
            goto_filter_(*f.right);
            return;
        case FilterKind::HasPath: return goto_path_(*f.path);
        case FilterKind::Not:
            throw UnsupportedError("needed-subgraph is defined for negation-free queries only");
        }
    }

private:
    const LabeledGraph& g_;
    std::set<Fact> acc_;

    void add_nodes(const NodeSet& vs) {
        for (const NodeId& v : vs) acc_.insert(node_fact(v));
    }
};

void check_start_nodes(const LabeledGraph& g, const NodeSet& start) {
    for (const NodeId& v : start)
        if (!g.has_node(v)) throw ValidationError("start node '" + v + "' is not in the graph");
}

} // namespace

FactDb tdn_path(const LabeledGraph& g, const NodeSet& start, const Path& p) {
    check_start_nodes(g, start);
    TdnBuilder b(g);
    b.path(p, start);
    return FactDb(b.take());
}

FactDb tdn_filter(const LabeledGraph& g, const NodeSet& start, const Filter& f) {
    check_start_nodes(g, start);
    TdnBuilder b(g);
    b.filter(f, start);
    return FactDb(b.take());
}

FactDb tdn_goto_path(const LabeledGraph& g, const Path& p) {
    TdnBuilder b(g);
    b.goto_path_(p);
    return FactDb(b.take());
}

FactDb tdn_goto_filter(const LabeledGraph& g, const Filter& f) {
    TdnBuilder b(g);
    b.goto_filter_(f);
    return FactDb(b.take());
}

LabeledGraph facts_to_subgraph(const FactDb& db) {
    std::set<Fact> closed = db.facts();
    for (const Fact& f : db.facts()) {
        closed.insert(node_fact(f.a));
        if (f.arity() == 2) closed.insert(node_fact(f.b));
    }
    return from_facts(FactDb(std::move(closed)));
}

} // namespace pathlog
