#pragma once

#include "pathlog/common.hpp"

#include <memory>
#include <set>
#include <string>

namespace pathlog {

struct Path;
struct Filter;
using PathPtr = std::shared_ptr<const Path>;
using FilterPtr = std::shared_ptr<const Filter>;

enum class FilterKind { Truth, NodeLabel, And, Or, Not, HasPath };

// Star and AnyEdge are surface-syntax markers only; desugar() eliminates both
// (p* into p+ | ?(true), any into the union of the edge alphabet).
enum class PathKind { FilterStep, Edge, EdgeInv, Concat, Union, Plus, Goto, Star, AnyEdge };

struct Filter {
    FilterKind kind = FilterKind::Truth;
    Label label;             // NodeLabel
    FilterPtr left, right;   // And/Or; left also holds Not's operand
    PathPtr path;            // HasPath
};

struct Path {
    PathKind kind = PathKind::Edge;
    Label label;             // Edge/EdgeInv
    PathPtr left, right;     // Concat/Union; left also holds Plus/Star's operand
    FilterPtr filter;        // FilterStep/Goto
};

FilterPtr truth();
FilterPtr node_label(Label l);
FilterPtr f_and(FilterPtr l, FilterPtr r);
FilterPtr f_or(FilterPtr l, FilterPtr r);
FilterPtr f_not(FilterPtr f);
FilterPtr has_path(PathPtr p);

PathPtr filter_step(FilterPtr f);
PathPtr edge(Label l);
PathPtr edge_inv(Label l);
PathPtr concat(PathPtr l, PathPtr r);
PathPtr alt(PathPtr l, PathPtr r);  // union
PathPtr plus(PathPtr p);
PathPtr goto_filter(FilterPtr f);
PathPtr star(PathPtr p);
PathPtr any_edge();

bool equal(const Path& a, const Path& b);
bool equal(const Filter& a, const Filter& b);

bool is_negation_free(const Path& p);
bool is_negation_free(const Filter& f);
bool is_desugared(const Path& p);
bool is_desugared(const Filter& f);

// Constructor count; [P] itself is transparent (counts as its inner path).
int query_size(const Path& p);

PathPtr parse_path(const std::string& text);
FilterPtr parse_filter(const std::string& text);

// Canonical concrete syntax; parse(to_text(p)) == p for marker-free trees.
std::string to_text(const Path& p);
std::string to_text(const Filter& f);

// Expands Star and AnyEdge (against the given edge alphabet), recursing into
// filters. Errors on a wildcard when the alphabet is empty. Idempotent.
PathPtr desugar(const PathPtr& p, const std::set<Label>& alphabet);
FilterPtr desugar(const FilterPtr& f, const std::set<Label>& alphabet);

// Semantic converse of a desugared path. goto is not invertible.
PathPtr invert(const PathPtr& p);

} // namespace pathlog
