#pragma once

#include "pathlog/datalog.hpp"
#include "pathlog/graph.hpp"

#include <map>
#include <set>

namespace pathlog {

struct EvalStats {
    long long calls = 0;        // call-pattern tables created
    long long resumptions = 0;  // body-prefix activations (incl. answer resumes)
    long long probes = 0;       // extensional index probes
};

struct EvalResult {
    std::set<Substitution> answers;  // over the goal's free variables
    FactDb visited;                  // extensional sub-database touched
    std::map<std::string, std::set<NodeId>> reached;  // per intensional predicate
    EvalStats stats;
};

// Tabled top-down evaluation with call-pattern variant tabling. Intensional
// predicates must be monadic (arity 0 or 1); clauses must be safe. Bodies are
// evaluated left to right; suspended readers are resumed per new answer.
EvalResult eval_topdown(const Query& q, const FactDb& db);

// Naive bottom-up least-fixpoint model of the intensional predicates. Serves
// as an independent oracle for the top-down engine.
std::set<Literal> eval_bottomup_naive(const Program& p, const FactDb& db);

// Conjunctive goal matching against a model plus the extensional facts.
std::set<Substitution> answers_from_model(const std::vector<Literal>& goal,
                                          const std::set<Literal>& model, const FactDb& db);

} // namespace pathlog
