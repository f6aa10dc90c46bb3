#pragma once

#include "pathlog/graph.hpp"
#include "pathlog/indexing.hpp"
#include "pathlog/nrpq.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pathlog {

// First-child/next-sibling graph encoding of an XML document:
//   node labels: document, element, string, plus one per tag name / text value
//   edge labels: first (to first child), next (sibling chain), name
//                (element -> shared tag node), one per attribute name
//                (element -> value string node).
// Whitespace-only text is skipped; whitespace in label text is %-escaped.
struct XmlGraphEncoding {
    LabeledGraph graph;
    NodeId document_node;
};

XmlGraphEncoding xml_to_graph(const std::string& xml);

struct XPathStep {
    enum class Axis { Child, Descendant };
    Axis axis = Axis::Child;
    std::string name;  // empty when wildcard
    bool wildcard = false;
};

struct XPathExpr {
    std::vector<XPathStep> steps;
};

// Absolute expressions over / and // with name or * tests only; anything
// else (predicates, attributes, other axes) is rejected.
XPathExpr xpath_parse(const std::string& text);

// Desugared path query over the graph encoding; starts from the document
// node filter, one first/next* element-step per XPath step.
PathPtr xpath_to_nrpq(const XPathExpr& e);

// Jump-indexed form of //outer//inner: two top_<tag> indexes over
// first/next, and the query ?(.document)/top_outer+/top_inner+.
std::pair<std::vector<IndexDef>, PathPtr> indexed_descendant_query(const std::string& outer,
                                                                   const std::string& inner);

// Deterministic site/regions/listitem*/keyword document; keyword leaves are
// sampled with the given density. First line is an element-count comment.
std::string gen_synthetic_doc(int depth, int fanout, double keyword_density,
                              std::uint64_t seed);

} // namespace pathlog
