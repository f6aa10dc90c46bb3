#pragma once

#include "pathlog/graph.hpp"
#include "pathlog/nrpq.hpp"

#include <vector>

namespace pathlog {

// A named edge relation defined by a path query. Definitions may use
// negation (they are materialized by the reference evaluator, not compiled).
struct IndexDef {
    Label name;
    PathPtr definition;
};

// Graph extended with the materialized relation ⟦definition⟧. Wildcards in
// the definition are expanded against g's edge alphabet. Errors if the name
// is already an edge label of g.
LabeledGraph build_index(const LabeledGraph& g, const IndexDef& def);

// Replaces every subtree structurally equal to a definition with its index
// edge; definitions are applied in order and replacements are not re-scanned.
PathPtr rewrite_with_indexes(const PathPtr& p, const std::vector<IndexDef>& defs);

// "Topmost t below here" relation: (e/?(not test))*/e/?(test), with e the
// union of the structural labels. The result is desugared; name is "top_<t>".
IndexDef make_top_index(const Label& t, const std::set<Label>& structural,
                        const FilterPtr& labeled_test);

} // namespace pathlog
