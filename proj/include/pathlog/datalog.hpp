#pragma once

#include "pathlog/common.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pathlog {

enum class PredKind { Extensional, Intensional };

// Extensional predicates are exactly node, node_<label> and edge_<label>;
// every other name is intensional.
PredKind predicate_kind(const std::string& name);
// 1 for node/node_*, 2 for edge_*, -1 otherwise.
int extensional_arity(const std::string& name);

struct Term {
    enum class Kind { Var, Const };
    Kind kind = Kind::Const;
    std::string text;

    static Term var(std::string name) { return {Kind::Var, std::move(name)}; }
    static Term constant(std::string value) { return {Kind::Const, std::move(value)}; }
    bool is_var() const { return kind == Kind::Var; }

    bool operator==(const Term&) const = default;
    auto operator<=>(const Term&) const = default;
};

struct Literal {
    std::string pred;
    std::vector<Term> args;

    std::string str() const;
    bool operator==(const Literal&) const = default;
    auto operator<=>(const Literal&) const = default;
};

struct Clause {
    Literal head;
    std::vector<Literal> body;

    std::string str() const;
    bool operator==(const Clause&) const = default;
    auto operator<=>(const Clause&) const = default;
};

struct Program {
    std::vector<Clause> clauses;
    bool operator==(const Program&) const = default;
};

struct Query {
    std::vector<Literal> goal;
    Program program;
};

// Idempotent variable binding; applying a substitution resolves chains.
class Substitution {
public:
    Substitution() = default;

    bool bind(const std::string& var, Term value);  // false on conflicting rebind
    const Term* lookup(const std::string& var) const;
    Term apply(const Term& t) const;
    Literal apply(const Literal& l) const;
    std::vector<Literal> apply(const std::vector<Literal>& ls) const;
    const std::map<std::string, Term>& mapping() const { return map_; }

    // Merge; nullopt when the two disagree on a variable.
    static std::optional<Substitution> join(const Substitution& a, const Substitution& b);

    bool operator==(const Substitution&) const = default;
    auto operator<=>(const Substitution&) const = default;

private:
    std::map<std::string, Term> map_;
};

// Most general unifier of two flat literals, or nullopt.
std::optional<Substitution> unify(const Literal& a, const Literal& b);

std::set<std::string> free_vars(const Literal& l);
std::set<std::string> free_vars(const std::vector<Literal>& ls);

// Safety: head variables occur in the body.
bool is_safe(const Clause& c);
bool is_safe(const Program& p);

// A goal is simply combined linear when every prefix with two or more free
// variables has all of them covered by a single extensional literal of the
// full goal.
bool is_scl_goal(const std::vector<Literal>& goal);
// Query goal and every clause (head prepended to body) are SCL.
bool is_scl_query(const Query& q);

Clause rename_apart(const Clause& c, const std::set<std::string>& avoid);

std::string emit_text(const Program& p);
std::string emit_text(const Query& q);
Program parse_program(const std::string& text);

} // namespace pathlog
