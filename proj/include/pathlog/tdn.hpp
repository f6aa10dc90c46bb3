#pragma once

#include "pathlog/graph.hpp"
#include "pathlog/nrpq.hpp"
#include "pathlog/reference_eval.hpp"

namespace pathlog {

// Facts of g needed by a top-down evaluation of the query from `start`
// (plus the node facts of visited start/intermediate nodes). Requires a
// desugared, negation-free query; start must be a subset of g's nodes.
FactDb tdn_path(const LabeledGraph& g, const NodeSet& start, const Path& p);
FactDb tdn_filter(const LabeledGraph& g, const NodeSet& start, const Filter& f);

// Start-set-free variants used under goto, where evaluation may begin
// anywhere in the graph.
FactDb tdn_goto_path(const LabeledGraph& g, const Path& p);
FactDb tdn_goto_filter(const LabeledGraph& g, const Filter& f);

// Graph induced by a fact set; node facts are implied for every mentioned id.
LabeledGraph facts_to_subgraph(const FactDb& db);

} // namespace pathlog
