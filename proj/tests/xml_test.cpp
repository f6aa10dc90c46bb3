#include "testutil.hpp"

#include "pathlog/xml.hpp"

#include <algorithm>

#include <doctest.h>

using namespace pathlog;

namespace {

XPathExpr random_xpath(testutil::Rng& rng) {
    static const char* names[] = {"site", "regions", "listitem", "keyword"};
    XPathExpr e;
    int n = 1 + testutil::pick(rng, 3);
    for (int i = 0; i < n; ++i) {
        XPathStep s;
        s.axis = testutil::pick(rng, 2) ? XPathStep::Axis::Descendant : XPathStep::Axis::Child;
        if (testutil::pick(rng, 5) == 0)
            s.wildcard = true;
        else
            s.name = names[testutil::pick(rng, 4)];
        e.steps.push_back(s);
    }
    return e;
}

} // namespace

TEST_CASE("encoding of a small document, by hand") {
    XmlGraphEncoding enc = xml_to_graph("<a><b x=\"v 1\"/>text<b/></a>");
    const LabeledGraph& g = enc.graph;

    CHECK(enc.document_node == "doc");
    CHECK(g.nodes ==
          NodeSet{"doc", "e0", "e1", "e2", "name:a", "name:b", "s0", "s1"});

    CHECK(g.labeled_nodes("document") == NodeSet{"doc"});
    CHECK(g.labeled_nodes("element") == NodeSet{"e0", "e1", "e2"});
    CHECK(g.labeled_nodes("string") == NodeSet{"s0", "s1"});
    CHECK(g.labeled_nodes("a") == NodeSet{"name:a"});
    CHECK(g.labeled_nodes("b") == NodeSet{"name:b"});
    CHECK(g.labeled_nodes("text") == NodeSet{"s1"});
    // attribute value with the blank escaped
    CHECK(g.labeled_nodes("v%201") == NodeSet{"s0"});

    CHECK(g.edge_set("first") == NodeRel{{"doc", "e0"}, {"e0", "e1"}});
    CHECK(g.edge_set("next") == NodeRel{{"e1", "s1"}, {"s1", "e2"}});
    // the two <b> elements share one tag node
    CHECK(g.edge_set("name") ==
          NodeRel{{"e0", "name:a"}, {"e1", "name:b"}, {"e2", "name:b"}});
    CHECK(g.edge_set("x") == NodeRel{{"e1", "s0"}});
}

TEST_CASE("prolog, comments, entities, whitespace") {
    // whitespace-only text between elements is not a node
    XmlGraphEncoding ws = xml_to_graph("<r>\n  <c/>\n</r>");
    CHECK(ws.graph.labeled_nodes("string").empty());
    CHECK(ws.graph.labeled_nodes("element") == NodeSet{"e0", "e1"});

    XmlGraphEncoding enc = xml_to_graph("<?xml version=\"1.0\"?>\n"
                                        "<!DOCTYPE r>\n"
                                        "<!-- before -->\n"
                                        "<r a=\"&quot;x&quot;\">&amp;&#65;<c y='1'/><!-- in --></r>\n"
                                        "<!-- after -->");
    const LabeledGraph& g = enc.graph;
    CHECK(g.labeled_nodes("\"x\"") == NodeSet{"s0"});   // decoded attribute
    CHECK(g.labeled_nodes("&A") == NodeSet{"s1"});      // decoded text
    CHECK(g.edge_set("y") == NodeRel{{"e1", "s2"}});    // single-quoted attribute

    // empty attribute values carry the string label only
    XmlGraphEncoding ea = xml_to_graph("<r a=\"\"/>");
    CHECK(ea.graph.labeled_nodes("string") == NodeSet{"s0"});
    CHECK(ea.graph.node_labels.count("") == 0);

    // percent signs themselves are escaped
    XmlGraphEncoding pc = xml_to_graph("<r>50%</r>");
    CHECK(pc.graph.labeled_nodes("50%25") == NodeSet{"s0"});
}

TEST_CASE("malformed documents are rejected") {
    CHECK_THROWS_WITH_AS(xml_to_graph("<a></b>"),
                         "xml offset 6: mismatched </b>, expected </a>", ParseError);
    CHECK_THROWS_AS(xml_to_graph(""), ParseError);
    CHECK_THROWS_AS(xml_to_graph("plain text"), ParseError);
    CHECK_THROWS_AS(xml_to_graph("<a>"), ParseError);            // missing </a>
    CHECK_THROWS_AS(xml_to_graph("<a/><b/>"), ParseError);       // two roots
    CHECK_THROWS_AS(xml_to_graph("<a b></a>"), ParseError);      // valueless attr
    CHECK_THROWS_AS(xml_to_graph("<a b=\"1></a>"), ParseError);  // unterminated value
    CHECK_THROWS_AS(xml_to_graph("<a>&nope;</a>"), ParseError);  // unknown entity
    CHECK_THROWS_AS(xml_to_graph("<a>&amp</a>"), ParseError);    // missing ';'
    CHECK_THROWS_AS(xml_to_graph("<!-- x <a/>"), ParseError);    // unterminated comment
}

TEST_CASE("xpath parsing") {
    XPathExpr e = xpath_parse("/a/b");
    REQUIRE(e.steps.size() == 2);
    CHECK(e.steps[0].axis == XPathStep::Axis::Child);
    CHECK(e.steps[0].name == "a");
    CHECK_FALSE(e.steps[0].wildcard);
    CHECK(e.steps[1].name == "b");

    XPathExpr d = xpath_parse("//k");
    REQUIRE(d.steps.size() == 1);
    CHECK(d.steps[0].axis == XPathStep::Axis::Descendant);
    CHECK(d.steps[0].name == "k");

    XPathExpr w = xpath_parse("/a//*");
    REQUIRE(w.steps.size() == 2);
    CHECK(w.steps[1].axis == XPathStep::Axis::Descendant);
    CHECK(w.steps[1].wildcard);

    CHECK_THROWS_AS(xpath_parse(""), ParseError);
    CHECK_THROWS_AS(xpath_parse("a"), ParseError);      // relative
    CHECK_THROWS_AS(xpath_parse("/a/"), ParseError);    // dangling separator
    CHECK_THROWS_AS(xpath_parse("//"), ParseError);
    CHECK_THROWS_AS(xpath_parse("/a[1]"), UnsupportedError);  // predicate
    CHECK_THROWS_AS(xpath_parse("/@x"), UnsupportedError);    // attribute axis
    CHECK_THROWS_AS(xpath_parse("/."), UnsupportedError);     // self axis
}

TEST_CASE("xpath translation, canonical text") {
    CHECK(to_text(*xpath_to_nrpq(xpath_parse("/a"))) ==
          "((?(.document)/((first/(next+|?(true)))/?(.element)))/?([(name/?(.a))]))");
    CHECK(to_text(*xpath_to_nrpq(xpath_parse("//k"))) ==
          "((?(.document)/((first/(next+|?(true)))+/?(.element)))/?([(name/?(.k))]))");
    // a wildcard step drops the name test
    CHECK(to_text(*xpath_to_nrpq(xpath_parse("/a/*"))) ==
          "(((?(.document)/((first/(next+|?(true)))/?(.element)))/?([(name/?(.a))]))"
          "/((first/(next+|?(true)))/?(.element)))");
}

TEST_CASE("xpath answers on a hand-built document") {
    XmlGraphEncoding enc = xml_to_graph("<a><b/><c><b/></c></a>");
    const LabeledGraph& g = enc.graph;
    auto ask = [&](const std::string& xp) {
        return eval_path_from(g, *xpath_to_nrpq(xpath_parse(xp)), {enc.document_node});
    };
    CHECK(ask("/a") == NodeSet{"e0"});
    CHECK(ask("/b") == NodeSet{});
    CHECK(ask("/a/b") == NodeSet{"e1"});
    CHECK(ask("//b") == NodeSet{"e1", "e3"});
    CHECK(ask("/a/*/b") == NodeSet{"e3"});
    CHECK(ask("//*") == NodeSet{"e0", "e1", "e2", "e3"});

    // the compiled engine agrees
    CompilationUnit cu = compile_query(*xpath_to_nrpq(xpath_parse("//b")), {enc.document_node});
    CHECK(testutil::topdown_nodes(cu, to_facts(g)) == NodeSet{"e1", "e3"});
}

TEST_CASE("synthetic documents are deterministic and well formed") {
    CHECK(gen_synthetic_doc(1, 2, 0.0, 7) ==
          "<!-- elements: 7 -->\n"
          "<site>\n"
          "  <regions>\n"
          "    <listitem/>\n"
          "    <listitem/>\n"
          "  </regions>\n"
          "  <regions>\n"
          "    <listitem/>\n"
          "    <listitem/>\n"
          "  </regions>\n"
          "</site>\n");

    CHECK(gen_synthetic_doc(2, 3, 0.5, 123) == gen_synthetic_doc(2, 3, 0.5, 123));
    CHECK(gen_synthetic_doc(2, 3, 0.5, 123) != gen_synthetic_doc(2, 3, 0.5, 124));
    // density 1: every leaf list item carries a keyword
    CHECK(gen_synthetic_doc(1, 2, 1.0, 7).substr(0, 20) == "<!-- elements: 11 --");

    CHECK_THROWS_AS(gen_synthetic_doc(0, 2, 0.5, 1), ValidationError);
    CHECK_THROWS_AS(gen_synthetic_doc(2, 0, 0.5, 1), ValidationError);
    CHECK_THROWS_AS(gen_synthetic_doc(2, 2, 1.5, 1), ValidationError);
    CHECK_THROWS_AS(gen_synthetic_doc(2, 2, -0.5, 1), ValidationError);
}

TEST_CASE("encoding invariants on generated documents") {
    testutil::Rng rng(2024);
    for (int iter = 0; iter < 12; ++iter) {
        int depth = 1 + testutil::pick(rng, 2);
        int fanout = 1 + testutil::pick(rng, 3);
        std::string doc = gen_synthetic_doc(depth, fanout, 0.5, 1000 + iter);
        XmlGraphEncoding enc = xml_to_graph(doc);
        const LabeledGraph& g = enc.graph;

        // the element-count comment matches the encoding
        std::size_t colon = doc.find(": ");
        int announced = std::stoi(doc.substr(colon + 2));
        CHECK(g.labeled_nodes("element").size() == static_cast<std::size_t>(announced));

        // every element names exactly one tag
        for (const NodeId& e : g.labeled_nodes("element")) {
            int names = 0;
            for (const auto& [src, dst] : g.edge_set("name")) names += src == e;
            CHECK(names == 1);
        }

        // tree shape: at most one incoming first-or-next edge per node
        std::map<NodeId, int> indeg;
        for (const auto& [src, dst] : g.edge_set("first")) ++indeg[dst];
        for (const auto& [src, dst] : g.edge_set("next")) ++indeg[dst];
        for (const auto& [node, d] : indeg) CHECK(d == 1);

        // strings are leaves
        for (const NodeId& s : g.labeled_nodes("string")) {
            for (const auto& [src, dst] : g.edge_set("first")) CHECK(src != s);
            for (const auto& [src, dst] : g.edge_set("name")) CHECK(src != s);
        }
    }
}

TEST_CASE("translated xpath agrees with a direct tree walk") {
    testutil::Rng rng(88);
    for (int iter = 0; iter < 40; ++iter) {
        int depth = 1 + testutil::pick(rng, 2);
        int fanout = 1 + testutil::pick(rng, 3);
        XmlGraphEncoding enc =
            xml_to_graph(gen_synthetic_doc(depth, fanout, 0.4, 500 + iter));
        for (int k = 0; k < 2; ++k) {
            XPathExpr expr = random_xpath(rng);
            NodeSet want = testutil::dom_eval(enc.graph, enc.document_node, expr);
            PathPtr q = xpath_to_nrpq(expr);
            CHECK(eval_path_from(enc.graph, *q, {enc.document_node}) == want);
            CompilationUnit cu = compile_query(*q, {enc.document_node});
            CHECK(testutil::topdown_nodes(cu, to_facts(enc.graph)) == want);
        }
    }
}

TEST_CASE("jump-indexed descendant query") {
    auto [defs, q] = indexed_descendant_query("site", "keyword");
    REQUIRE(defs.size() == 2);
    CHECK(defs[0].name == "top_site");
    CHECK(defs[1].name == "top_keyword");
    CHECK(to_text(*q) == "((?(.document)/top_site+)/top_keyword+)");

    // each definition is the topmost-label relation over first/next, testing
    // for an element with the right tag
    IndexDef expect = make_top_index(
        "site", {"first", "next"},
        f_and(node_label("element"),
              has_path(concat(edge("name"), filter_step(node_label("site"))))));
    CHECK(equal(*defs[0].definition, *expect.definition));

    XmlGraphEncoding enc = xml_to_graph(gen_synthetic_doc(2, 2, 1.0, 99));
    LabeledGraph indexed = build_index(build_index(enc.graph, defs[0]), defs[1]);
    NodeSet plain = eval_path_from(
        enc.graph, *xpath_to_nrpq(xpath_parse("//site//keyword")), {enc.document_node});
    CHECK(eval_path_from(indexed, *q, {enc.document_node}) == plain);
    CHECK(plain.size() == 8);  // depth 2, fanout 2, every leaf keyworded

    // and the same through the compiled engine on the indexed graph
    CompilationUnit cu = compile_query(*q, {enc.document_node});
    CHECK(testutil::topdown_nodes(cu, to_facts(indexed)) == plain);
}
