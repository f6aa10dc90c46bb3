#include "testutil.hpp"

#include "pathlog/indexing.hpp"

#include <doctest.h>

using namespace pathlog;

TEST_CASE("materializing a definition adds exactly its relation") {
    LabeledGraph g = testutil::g0();
    LabeledGraph g2 = build_index(g, {"bc", parse_path("b/c")});

    CHECK(g2.nodes == g.nodes);
    CHECK(g2.node_labels == g.node_labels);
    CHECK(g2.edges.at("a") == g.edges.at("a"));
    CHECK(g2.edges.at("bc") == NodeRel{{"1", "3"}, {"4", "3"}, {"5", "3"}});
    CHECK(g2.edge_alphabet() == std::set<Label>{"a", "b", "bc", "c"});
    // the source graph is untouched
    CHECK(g.edges.count("bc") == 0);
}

TEST_CASE("definitions may use wildcards and negation") {
    LabeledGraph g = testutil::g0();

    // `any` expands against the base alphabet, not the enriched one
    LabeledGraph g2 = build_index(g, {"step", parse_path("any")});
    NodeRel all;
    for (const auto& [label, rel] : g.edges) all.insert(rel.begin(), rel.end());
    CHECK(g2.edges.at("step") == all);
    CHECK(g2.edges.at("step").size() == 7);

    // a-successors that have no outgoing b edge
    LabeledGraph g3 = build_index(g, {"nb", parse_path("a/?(not [b])")});
    CHECK(g3.edges.at("nb") == NodeRel{{"0", "6"}});
}

TEST_CASE("an index may not shadow an existing edge label") {
    LabeledGraph g = testutil::g0();
    CHECK_THROWS_WITH_AS(build_index(g, {"a", parse_path("b/c")}),
                         "edge label 'a' already present", ValidationError);
}

TEST_CASE("rewriting replaces equal subtrees, in definition order") {
    PathPtr p = parse_path("a/b/c");  // left associative: (a/b)/c

    CHECK(to_text(*rewrite_with_indexes(p, {{"A", parse_path("a/b")}})) == "(A/c)");

    // a later definition sees earlier replacements
    CHECK(to_text(*rewrite_with_indexes(
              p, {{"A", parse_path("a/b")}, {"B", parse_path("A/c")}})) == "B");
    // ... but not the other way around
    CHECK(to_text(*rewrite_with_indexes(
              p, {{"B", parse_path("A/c")}, {"A", parse_path("a/b")}})) == "(A/c)");

    // replacements are not re-scanned: a duplicate definition finds nothing
    CHECK(to_text(*rewrite_with_indexes(
              p, {{"A", parse_path("a/b")}, {"B", parse_path("a/b")}})) == "(A/c)");

    // no occurrence, no change
    CHECK(to_text(*rewrite_with_indexes(p, {{"A", parse_path("c/b")}})) ==
          to_text(*p));
}

TEST_CASE("rewriting reaches into filters, jumps and sugared forms") {
    CHECK(to_text(*rewrite_with_indexes(parse_path("?([a/b])/goto([a/b])"),
                                        {{"A", parse_path("a/b")}})) ==
          "(?([A])/goto([A]))");
    CHECK(to_text(*rewrite_with_indexes(parse_path("(a)*/b"),
                                        {{"A", parse_path("(a)*")}})) == "(A/b)");
    CHECK(to_text(*rewrite_with_indexes(parse_path("(a/b)+"),
                                        {{"A", parse_path("a/b")}})) == "A+");
}

TEST_CASE("topmost-label definition") {
    IndexDef d = make_top_index("p", {"a", "b"}, node_label("p"));
    CHECK(d.name == "top_p");
    // skip any run of non-p nodes, then land on a p node; star already expanded
    CHECK(to_text(*d.definition) ==
          "(((((a|b)/?((not .p)))+|?(true))/(a|b))/?(.p))");

    CHECK_THROWS_AS(make_top_index("p", {}, node_label("p")), ValidationError);
}

TEST_CASE("topmost-label relation, by hand") {
    // labels below a labeled node are shielded
    LabeledGraph chain = load_graph("node 0\nnode 1\nnode 2\n"
                                    "label p 1\nlabel p 2\n"
                                    "edge a 0 1\nedge a 1 2\n");
    IndexDef d = make_top_index("p", {"a"}, node_label("p"));
    CHECK(build_index(chain, d).edges.at("top_p") == NodeRel{{"0", "1"}, {"1", "2"}});

    // unlabeled nodes in between are skipped
    LabeledGraph deep = load_graph("node 0\nnode 1\nnode 2\nnode 3\n"
                                   "label p 2\n"
                                   "edge a 0 1\nedge a 1 2\nedge a 2 3\n");
    CHECK(build_index(deep, d).edges.at("top_p") == NodeRel{{"0", "2"}, {"1", "2"}});

    // one topmost node per branch
    LabeledGraph tree = load_graph("node r\nnode x\nnode y\nnode z\n"
                                   "label p x\nlabel p z\n"
                                   "edge a r x\nedge b r y\nedge a y z\n");
    IndexDef d2 = make_top_index("p", {"a", "b"}, node_label("p"));
    CHECK(build_index(tree, d2).edges.at("top_p") ==
          NodeRel{{"r", "x"}, {"r", "z"}, {"y", "z"}});
}

TEST_CASE("enrichment never changes answers, and rewrites preserve them") {
    testutil::Rng rng(511);
    testutil::QueryGen gen;
    int rewritten_differs = 0;
    for (int iter = 0; iter < 120; ++iter) {
        LabeledGraph g = testutil::random_graph(rng, 7);
        PathPtr def = testutil::random_path(rng, 2, gen);
        PathPtr ctx = testutil::random_path(rng, 3, gen);

        PathPtr spliced;
        switch (iter % 4) {
        case 0: spliced = concat(ctx, def); break;
        case 1: spliced = alt(def, ctx); break;
        case 2: spliced = concat(filter_step(has_path(def)), ctx); break;
        default: spliced = plus(concat(def, ctx)); break;
        }

        LabeledGraph enriched = build_index(g, {"idx", def});
        PathPtr rewritten = rewrite_with_indexes(spliced, {{"idx", def}});
        if (to_text(*rewritten) != to_text(*spliced)) ++rewritten_differs;

        NodeRel want = eval_path_rel(g, *spliced);
        CHECK(eval_path_rel(enriched, *spliced) == want);
        CHECK(eval_path_rel(enriched, *rewritten) == want);
    }
    CHECK(rewritten_differs == 120);
}
