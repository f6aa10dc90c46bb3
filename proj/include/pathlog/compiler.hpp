#pragma once

#include "pathlog/datalog.hpp"
#include "pathlog/nrpq.hpp"
#include "pathlog/reference_eval.hpp"

#include <map>
#include <string>

namespace pathlog {

enum class PredRole { Initial, Final, Check, Continuation, Nullary };

// Deterministic fresh-name supply: role letter (i/f/c/r/j) + global counter.
class FreshNames {
public:
    std::string fresh(PredRole role);

private:
    int counter_ = 0;
};

struct CompilationUnit {
    Program program;
    std::vector<Literal> goal;
    std::map<std::string, PredRole> roles;
    std::string start_predicate;   // receives the start set
    std::string answer_predicate;  // the goal's defining predicate
};

// Start facts: one unit clause i(v) per start node.
Program start_program(const NodeSet& start, const std::string& i);

// Forward-accessibility scheme: f collects nodes reachable from i via p.
// p+ loops whose interface predicates are shared with a sibling subquery
// (union branches, adjacent loops across a concatenation) are compiled onto
// a private predicate pair, so values never leak between subqueries.
Program compile_acc(const Path& p, const std::string& i, const std::string& f, FreshNames& names);
// Filter scheme: c holds the nodes satisfying fl.
Program compile_filt(const Filter& fl, const std::string& c, FreshNames& names);
// Existential path scheme: c holds nodes with a p-path into continuation r.
Program compile_ex(const Path& p, const std::string& c, const std::string& r, FreshNames& names);

// Full path query: program compile_acc(p, i0, f1) + start facts, goal f1(X).
// Requires a desugared, negation-free query.
CompilationUnit compile_query(const Path& p, const NodeSet& start);
// Filter query: program compile_filt(f, c1) + start facts, goal i0(X), c1(X).
CompilationUnit compile_filter_query(const Filter& f, const NodeSet& start);

// Query text prefixed with "% goal:" and "% start:" comment headers.
std::string emit_text(const CompilationUnit& cu);

} // namespace pathlog
