#pragma once

#include "pathlog/graph.hpp"
#include "pathlog/nrpq.hpp"

#include <set>
#include <utility>

namespace pathlog {

using NodeSet = std::set<NodeId>;
using NodeRel = std::set<std::pair<NodeId, NodeId>>;

// Brute-force denotational evaluator. Paths must be desugared; negation is
// supported. Whole-relation evaluation and start-set evaluation are
// independent code paths (matrix-based vs set-based) on purpose.
NodeRel eval_path_rel(const LabeledGraph& g, const Path& p);
NodeSet eval_filter(const LabeledGraph& g, const Filter& f);

// Forward image of `start` under the path relation. Errors if a start node
// is not a node of g.
NodeSet eval_path_from(const LabeledGraph& g, const Path& p, const NodeSet& start);
// Nodes of `start` satisfying the filter.
NodeSet eval_filter_from(const LabeledGraph& g, const Filter& f, const NodeSet& start);

} // namespace pathlog
