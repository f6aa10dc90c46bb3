#include "testutil.hpp"

#include "pathlog/datalog.hpp"

#include <doctest.h>

using namespace pathlog;

namespace {

Term V(const char* n) { return Term::var(n); }
Term C(const char* v) { return Term::constant(v); }
Literal lit(std::string pred, std::vector<Term> args) { return {std::move(pred), std::move(args)}; }

} // namespace

TEST_CASE("predicate classification") {
    CHECK(predicate_kind("node") == PredKind::Extensional);
    CHECK(predicate_kind("node_p") == PredKind::Extensional);
    CHECK(predicate_kind("edge_a") == PredKind::Extensional);
    CHECK(predicate_kind("f1") == PredKind::Intensional);
    CHECK(predicate_kind("nodework") == PredKind::Intensional);
    CHECK(extensional_arity("node") == 1);
    CHECK(extensional_arity("node_document") == 1);
    CHECK(extensional_arity("edge_first") == 2);
    CHECK(extensional_arity("i0") == -1);
}

TEST_CASE("literal and clause text") {
    CHECK(lit("f1", {V("X")}).str() == "f1(X)");
    CHECK(lit("edge_a", {C("0"), V("Y")}).str() == "edge_a(0, Y)");
    CHECK(lit("j2", {}).str() == "j2()");
    // ids that are not bare words get quoted, with escapes
    CHECK(lit("node", {C("name:kw")}).str() == "node('name:kw')");
    CHECK(lit("node", {C("it's")}).str() == "node('it\\'s')");
    CHECK(lit("node", {C("Upper")}).str() == "node('Upper')");
    CHECK(lit("node", {C("")}).str() == "node('')");

    Clause c{lit("f1", {V("X")}), {lit("i0", {V("Y")}), lit("edge_a", {V("Y"), V("X")})}};
    CHECK(c.str() == "f1(X) :- i0(Y), edge_a(Y, X).");
    CHECK(Clause{lit("i0", {C("0")}), {}}.str() == "i0(0).");
}

TEST_CASE("program text round trip") {
    const char* text =
        "% reachability over a\n"
        "r(X) :- i(X).\n"
        "r(X) :- r(Y) , edge_a(Y, X).\n"
        "i('quoted id').\n";
    Program p = parse_program(text);
    REQUIRE(p.clauses.size() == 3);
    CHECK(p.clauses[2].head.args[0] == C("quoted id"));

    std::string emitted = emit_text(p);
    // emission is sorted by head predicate then text
    CHECK(emitted ==
          "i('quoted id').\n"
          "r(X) :- i(X).\n"
          "r(X) :- r(Y), edge_a(Y, X).\n");
    CHECK(emit_text(parse_program(emitted)) == emitted);
}

TEST_CASE("query text leads with the goal") {
    Query q;
    q.goal = {lit("i0", {V("X")}), lit("c1", {V("X")})};
    q.program.clauses = {Clause{lit("c1", {V("X")}), {lit("node", {V("X")})}}};
    CHECK(emit_text(q) == "% goal: i0(X), c1(X)\nc1(X) :- node(X).\n");
}

TEST_CASE("parser rejects malformed programs") {
    CHECK_THROWS_AS(parse_program("p(X)"), ParseError);            // missing period
    CHECK_THROWS_AS(parse_program("p(X) : q(X)."), ParseError);    // broken ':-'
    CHECK_THROWS_AS(parse_program("p('oops)."), ParseError);       // unterminated quote
    CHECK_THROWS_AS(parse_program("p(X,)."), ParseError);
    try {
        parse_program("p(a).\nq(b)\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("parser enforces arities") {
    CHECK_THROWS_AS(parse_program("node(X, Y)."), ValidationError);
    CHECK_THROWS_AS(parse_program("edge_a(X)."), ValidationError);
    try {
        parse_program("edge_a(X).");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("edge_a") != std::string::npos);
        CHECK(std::string(e.what()).find("expected 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_program("p(X) :- q(X).\np(X, Y) :- q(X), q(Y)."),
                    ValidationError);
    CHECK_NOTHROW(parse_program("p(X) :- edge_a(X, Y), node_p(Y)."));
}

TEST_CASE("unification examples") {
    auto s = unify(lit("p", {V("X"), C("a")}), lit("p", {C("b"), V("Y")}));
    REQUIRE(s);
    CHECK(s->apply(V("X")) == C("b"));
    CHECK(s->apply(V("Y")) == C("a"));

    // repeated variable forces both positions equal
    CHECK_FALSE(unify(lit("p", {V("X"), V("X")}), lit("p", {C("a"), C("b")})));
    auto r = unify(lit("p", {V("X"), V("X")}), lit("p", {C("a"), V("Z")}));
    REQUIRE(r);
    CHECK(r->apply(V("Z")) == C("a"));

    // variable chains resolve through apply
    auto t = unify(lit("p", {V("X"), V("Y")}), lit("p", {V("Y"), C("c")}));
    REQUIRE(t);
    CHECK(t->apply(V("X")) == C("c"));

    CHECK_FALSE(unify(lit("p", {C("a")}), lit("q", {C("a")})));
    CHECK_FALSE(unify(lit("p", {C("a")}), lit("p", {C("a"), C("a")})));
    CHECK_FALSE(unify(lit("p", {C("a")}), lit("p", {C("b")})));
}

TEST_CASE("unifiers really unify, and are idempotent") {
    std::vector<Term> pool{V("X"), V("Y"), V("Z"), C("a"), C("b")};
    testutil::Rng rng(1202);
    int unified = 0;
    for (int i = 0; i < 400; ++i) {
        Literal a{"p", {pool[testutil::pick(rng, 5)], pool[testutil::pick(rng, 5)],
                        pool[testutil::pick(rng, 5)]}};
        Literal b{"p", {pool[testutil::pick(rng, 5)], pool[testutil::pick(rng, 5)],
                        pool[testutil::pick(rng, 5)]}};
        auto s = unify(a, b);
        if (!s) continue;
        ++unified;
        CHECK(s->apply(a) == s->apply(b));
        CHECK(s->apply(s->apply(a)) == s->apply(a));
    }
    CHECK(unified > 100);
}

TEST_CASE("substitution binding and joining") {
    Substitution s;
    CHECK(s.bind("X", C("a")));
    CHECK(s.bind("X", C("a")));        // same again is fine
    CHECK_FALSE(s.bind("X", C("b")));  // conflict
    CHECK(s.apply(V("X")) == C("a"));
    CHECK(s.apply(V("Other")) == V("Other"));
    CHECK(s.apply(C("a")) == C("a"));

    Substitution chain;
    chain.bind("X", V("Y"));
    chain.bind("Y", C("v"));
    CHECK(chain.apply(V("X")) == C("v"));

    Substitution t;
    t.bind("Y", C("b"));
    auto joined = Substitution::join(s, t);
    REQUIRE(joined);
    CHECK(joined->apply(V("X")) == C("a"));
    CHECK(joined->apply(V("Y")) == C("b"));

    Substitution conflict;
    conflict.bind("X", C("b"));
    CHECK_FALSE(Substitution::join(s, conflict));
}

TEST_CASE("free variables and safety") {
    CHECK(free_vars(lit("p", {V("X"), C("a"), V("Y")})) == std::set<std::string>{"X", "Y"});
    CHECK(free_vars(lit("j", {})).empty());

    CHECK(is_safe(Clause{lit("p", {V("X")}), {lit("q", {V("X")})}}));
    CHECK(is_safe(Clause{lit("p", {C("a")}), {}}));
    CHECK_FALSE(is_safe(Clause{lit("p", {V("X")}), {}}));
    CHECK_FALSE(is_safe(Clause{lit("p", {V("X")}), {lit("q", {V("Y")})}}));

    Program prog;
    prog.clauses = {Clause{lit("p", {V("X")}), {lit("node", {V("X")})}},
                    Clause{lit("q", {V("X")}), {}}};
    CHECK_FALSE(is_safe(prog));
}

TEST_CASE("simply combined linear goals") {
    // two-variable prefix covered by an edge literal anywhere in the goal
    CHECK(is_scl_goal({lit("p", {V("X")}), lit("edge_a", {V("X"), V("Y")}), lit("q", {V("Y")})}));
    CHECK(is_scl_goal({lit("p", {V("X")}), lit("q", {V("Y")}), lit("edge_a", {V("X"), V("Y")})}));
    // no extensional literal covers {X, Y}
    CHECK_FALSE(is_scl_goal({lit("p", {V("X")}), lit("q", {V("Y")})}));
    CHECK_FALSE(is_scl_goal(
        {lit("p", {V("X")}), lit("edge_a", {V("X"), V("X")}), lit("q", {V("Y")})}));
    // intensional binary literals do not count as cover
    CHECK_FALSE(is_scl_goal({lit("r", {V("X"), V("Y")}), lit("q", {V("Y")})}));
    // at most one free variable never needs cover
    CHECK(is_scl_goal({lit("p", {V("X")}), lit("q", {V("X")}), lit("j", {})}));
    CHECK(is_scl_goal({}));
}

TEST_CASE("simply combined linear queries check clauses too") {
    Query q;
    q.goal = {lit("f1", {V("X")})};
    q.program.clauses = {
        Clause{lit("f1", {V("X")}), {lit("i0", {V("Y")}), lit("edge_a", {V("Y"), V("X")})}}};
    CHECK(is_scl_query(q));

    // head + first body literal form an uncovered two-variable prefix
    q.program.clauses.push_back(
        Clause{lit("f1", {V("X")}), {lit("i0", {V("Y")}), lit("g", {V("X")})}});
    CHECK_FALSE(is_scl_query(q));

    q.program.clauses.pop_back();
    q.goal = {lit("a", {V("X")}), lit("b", {V("Y")})};
    CHECK_FALSE(is_scl_query(q));
}

TEST_CASE("renaming apart avoids the given variables") {
    Clause c{lit("f", {V("X")}), {lit("i", {V("Y")}), lit("edge_a", {V("Y"), V("X")})}};
    Clause r = rename_apart(c, {"X", "X0"});
    std::set<std::string> vars = free_vars({r.head, r.body[0], r.body[1]});
    CHECK(vars.count("X") == 0);
    CHECK(vars.count("X0") == 0);
    CHECK(vars.count("Y") == 1);  // untouched, it was not in the avoid set
    // head/body sharing survives the renaming
    CHECK(r.head.args[0] == r.body[1].args[1]);
    CHECK(r.body[0].args[0] == r.body[1].args[0]);
    // nothing to avoid, nothing changes
    CHECK(rename_apart(c, {"Q"}) == c);
}
