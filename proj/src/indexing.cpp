#include "pathlog/indexing.hpp"

#include "pathlog/reference_eval.hpp"

namespace pathlog {

LabeledGraph build_index(const LabeledGraph& g, const IndexDef& def) {
    PathPtr p = desugar(def.definition, g.edge_alphabet());
    return add_edge_relation(g, def.name, eval_path_rel(g, *p));
}

namespace {

FilterPtr substitute_filter(const FilterPtr& f, const Path& target, const Label& name);

PathPtr substitute_path(const PathPtr& p, const Path& target, const Label& name) {
    if (equal(*p, target)) return edge(name);
    switch (p->kind) {
    case PathKind::Edge:
    case PathKind::EdgeInv:
    case PathKind::AnyEdge: return p;
    case PathKind::FilterStep: return filter_step(substitute_filter(p->filter, target, name));
    case PathKind::Goto: return goto_filter(substitute_filter(p->filter, target, name));
    case PathKind::Concat:
        return concat(substitute_path(p->left, target, name),
                      substitute_path(p->right, target, name));
    case PathKind::Union:
        return alt(substitute_path(p->left, target, name),
                   substitute_path(p->right, target, name));
    case PathKind::Plus: return plus(substitute_path(p->left, target, name));
    case PathKind::Star: return star(substitute_path(p->left, target, name));
    }
    return p;
}

FilterPtr substitute_filter(const FilterPtr& f, const Path& target, const Label& name) {
    switch (f->kind) {
    case FilterKind::Truth:
    case FilterKind::NodeLabel: return f;
    case FilterKind::And:
        return f_and(substitute_filter(f->left, target, name),
                     substitute_filter(f->right, target, name));
    case FilterKind::Or:
        return f_or(substitute_filter(f->left, target, name),
                    substitute_filter(f->right, target, name));
    case FilterKind::Not: return f_not(substitute_filter(f->left, target, name));
    case FilterKind::HasPath: return has_path(substitute_path(f->path, target, name));
    }
    return f;
}

} // namespace

PathPtr rewrite_with_indexes(const PathPtr& p, const std::vector<IndexDef>& defs) {
    PathPtr out = p;
    for (const IndexDef& def : defs) out = substitute_path(out, *def.definition, def.name);
    return out;
}

IndexDef make_top_index(const Label& t, const std::set<Label>& structural,
                        const FilterPtr& labeled_test) {
    if (structural.empty())
        throw ValidationError("top index needs at least one structural edge label");
    PathPtr e;
    for (const Label& l : structural) e = e ? alt(e, edge(l)) : edge(l);

    PathPtr skip = star(concat(e, filter_step(f_not(labeled_test))));
    PathPtr def = concat(concat(skip, e), filter_step(labeled_test));
    IndexDef out;
    out.name = "top_" + t;
    out.definition = desugar(def, structural);
    return out;
}

} // namespace pathlog
