#include "pathlog/nrpq.hpp"

#include <cctype>
#include <utility>
#include <vector>

namespace pathlog {

namespace {

PathPtr make_path(Path p) { return std::make_shared<const Path>(std::move(p)); }
FilterPtr make_filter(Filter f) { return std::make_shared<const Filter>(std::move(f)); }

} // namespace

FilterPtr truth() {
    Filter f;
    f.kind = FilterKind::Truth;
    return make_filter(std::move(f));
}

FilterPtr node_label(Label l) {
    Filter f;
    f.kind = FilterKind::NodeLabel;
    f.label = std::move(l);
    return make_filter(std::move(f));
}

FilterPtr f_and(FilterPtr l, FilterPtr r) {
    Filter f;
    f.kind = FilterKind::And;
    f.left = std::move(l);
    f.right = std::move(r);
    return make_filter(std::move(f));
}

FilterPtr f_or(FilterPtr l, FilterPtr r) {
    Filter f;
    f.kind = FilterKind::Or;
    f.left = std::move(l);
    f.right = std::move(r);
    return make_filter(std::move(f));
}

FilterPtr f_not(FilterPtr inner) {
    Filter f;
    f.kind = FilterKind::Not;
    f.left = std::move(inner);
    return make_filter(std::move(f));
}

FilterPtr has_path(PathPtr p) {
    Filter f;
    f.kind = FilterKind::HasPath;
    f.path = std::move(p);
    return make_filter(std::move(f));
}

PathPtr filter_step(FilterPtr f) {
    Path p;
    p.kind = PathKind::FilterStep;
    p.filter = std::move(f);
    return make_path(std::move(p));
}

PathPtr edge(Label l) {
    Path p;
    p.kind = PathKind::Edge;
    p.label = std::move(l);
    return make_path(std::move(p));
}

PathPtr edge_inv(Label l) {
    Path p;
    p.kind = PathKind::EdgeInv;
    p.label = std::move(l);
    return make_path(std::move(p));
}

PathPtr concat(PathPtr l, PathPtr r) {
    Path p;
    p.kind = PathKind::Concat;
    p.left = std::move(l);
    p.right = std::move(r);
    return make_path(std::move(p));
}

PathPtr alt(PathPtr l, PathPtr r) {
    Path p;
    p.kind = PathKind::Union;
    p.left = std::move(l);
    p.right = std::move(r);
    return make_path(std::move(p));
}

PathPtr plus(PathPtr inner) {
    Path p;
    p.kind = PathKind::Plus;
    p.left = std::move(inner);
    return make_path(std::move(p));
}

PathPtr goto_filter(FilterPtr f) {
    Path p;
    p.kind = PathKind::Goto;
    p.filter = std::move(f);
    return make_path(std::move(p));
}

PathPtr star(PathPtr inner) {
    Path p;
    p.kind = PathKind::Star;
    p.left = std::move(inner);
    return make_path(std::move(p));
}

PathPtr any_edge() {
    Path p;
    p.kind = PathKind::AnyEdge;
    return make_path(std::move(p));
}

bool equal(const Path& a, const Path& b) {
    if (a.kind != b.kind || a.label != b.label) return false;
    auto eq_p = [](const PathPtr& x, const PathPtr& y) {
        if (!x || !y) return !x && !y;
        return equal(*x, *y);
    };
    auto eq_f = [](const FilterPtr& x, const FilterPtr& y) {
        if (!x || !y) return !x && !y;
        return equal(*x, *y);
    };
    return eq_p(a.left, b.left) && eq_p(a.right, b.right) && eq_f(a.filter, b.filter);
}

bool equal(const Filter& a, const Filter& b) {
    if (a.kind != b.kind || a.label != b.label) return false;
    auto eq_p = [](const PathPtr& x, const PathPtr& y) {
        if (!x || !y) return !x && !y;
        return equal(*x, *y);
    };
    auto eq_f = [](const FilterPtr& x, const FilterPtr& y) {
        if (!x || !y) return !x && !y;
        return equal(*x, *y);
    };
    return eq_f(a.left, b.left) && eq_f(a.right, b.right) && eq_p(a.path, b.path);
}

bool is_negation_free(const Path& p) {
    switch (p.kind) {
    case PathKind::Edge:
    case PathKind::EdgeInv:
    case PathKind::AnyEdge: return true;
    case PathKind::FilterStep:
    case PathKind::Goto: return is_negation_free(*p.filter);
    case PathKind::Plus:
    case PathKind::Star: return is_negation_free(*p.left);
    case PathKind::Concat:
    case PathKind::Union: return is_negation_free(*p.left) && is_negation_free(*p.right);
    }
    return true;
}

bool is_negation_free(const Filter& f) {
    switch (f.kind) {
    case FilterKind::Truth:
    case FilterKind::NodeLabel: return true;
    case FilterKind::Not: return false;
    case FilterKind::And:
    case FilterKind::Or: return is_negation_free(*f.left) && is_negation_free(*f.right);
    case FilterKind::HasPath: return is_negation_free(*f.path);
    }
    return true;
}

bool is_desugared(const Path& p) {
    switch (p.kind) {
    case PathKind::Star:
    case PathKind::AnyEdge: return false;
    case PathKind::Edge:
    case PathKind::EdgeInv: return true;
    case PathKind::FilterStep:
    case PathKind::Goto: return is_desugared(*p.filter);
    case PathKind::Plus: return is_desugared(*p.left);
    case PathKind::Concat:
    case PathKind::Union: return is_desugared(*p.left) && is_desugared(*p.right);
    }
    return true;
}

bool is_desugared(const Filter& f) {
    switch (f.kind) {
    case FilterKind::Truth:
    case FilterKind::NodeLabel: return true;
    case FilterKind::Not: return is_desugared(*f.left);
    case FilterKind::And:
    case FilterKind::Or: return is_desugared(*f.left) && is_desugared(*f.right);
    case FilterKind::HasPath: return is_desugared(*f.path);
    }
    return true;
}

namespace {

int filter_size(const Filter& f);

int path_size(const Path& p) {
    switch (p.kind) {
    case PathKind::Edge:
    case PathKind::EdgeInv:
    case PathKind::AnyEdge: return 1;
    case PathKind::FilterStep:
    case PathKind::Goto: return 1 + filter_size(*p.filter);
    case PathKind::Plus:
    case PathKind::Star: return 1 + path_size(*p.left);
    case PathKind::Concat:
    case PathKind::Union: return 1 + path_size(*p.left) + path_size(*p.right);
    }
    return 1;
}

int filter_size(const Filter& f) {
    switch (f.kind) {
    case FilterKind::Truth:
    case FilterKind::NodeLabel: return 1;
    case FilterKind::Not: return 1 + filter_size(*f.left);
    case FilterKind::And:
    case FilterKind::Or: return 1 + filter_size(*f.left) + filter_size(*f.right);
    case FilterKind::HasPath: return path_size(*f.path);  // [P] is transparent
    }
    return 1;
}

} // namespace

int query_size(const Path& p) { return path_size(p); }

// ---------------------------------------------------------------------------
// Concrete syntax.
//
//   path   := alt
//   alt    := seq ('|' seq)*
//   seq    := post ('/' post)*
//   post   := atom ('+' | '*')*
//   atom   := IDENT | IDENT '^' | 'any' | '?(' filter ')' | 'goto(' filter ')'
//           | '(' path ')'
//   filter := fdisj
//   fdisj  := fconj ('or' fconj)*
//   fconj  := funit ('and' funit)*
//   funit  := 'not' funit | 'true' | '.' IDENT | '[' path ']' | '(' filter ')'
//
// 'any true or and not goto' are reserved words.

namespace {

bool ident_start(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return ident_start(c) || c == '-'; }

bool is_reserved(const std::string& w) {
    return w == "any" || w == "true" || w == "or" || w == "and" || w == "not" || w == "goto";
}

class QueryParser {
public:
    explicit QueryParser(const std::string& text) : text_(text) {}

    PathPtr parse_path_all() {
        skip_ws();
        if (eof()) throw ParseError("empty query");
        PathPtr p = parse_alt();
        expect_eof();
        return p;
    }

    FilterPtr parse_filter_all() {
        skip_ws();
        if (eof()) throw ParseError("empty filter");
        FilterPtr f = parse_fdisj();
        expect_eof();
        return f;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("query parse error at offset " + std::to_string(pos_) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    bool try_consume(char c) {
        skip_ws();
        if (!eof() && peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        skip_ws();
        if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void expect_eof() {
        skip_ws();
        if (!eof()) fail("trailing input");
    }

    // Empty result means no identifier at the cursor.
    std::string peek_ident() {
        skip_ws();
        std::size_t p = pos_;
        if (p >= text_.size() || !ident_start(text_[p])) return "";
        std::string out;
        while (p < text_.size() && ident_char(text_[p])) out += text_[p++];
        return out;
    }

    std::string take_ident(const char* what) {
        std::string id = peek_ident();
        if (id.empty()) fail(std::string("expected ") + what);
        pos_ += id.size();
        return id;
    }

    bool try_keyword(const std::string& kw) {
        if (peek_ident() == kw) {
            pos_ += kw.size();
            return true;
        }
        return false;
    }

    PathPtr parse_alt() {
        PathPtr p = parse_seq();
        while (try_consume('|')) p = alt(p, parse_seq());
        return p;
    }

    PathPtr parse_seq() {
        PathPtr p = parse_post();
        while (try_consume('/')) p = concat(p, parse_post());
        return p;
    }

    PathPtr parse_post() {
        PathPtr p = parse_atom();
        for (;;) {
            if (try_consume('+')) {
                p = plus(p);
            } else if (try_consume('*')) {
                // Eager expansion: p* == p+ | ?(true).
                p = alt(plus(p), filter_step(truth()));
            } else {
                break;
            }
        }
        return p;
    }

    PathPtr parse_atom() {
        skip_ws();
        if (eof()) fail("expected path atom");
        if (try_consume('?')) {
            expect('(');
            FilterPtr f = parse_fdisj();
            expect(')');
            return filter_step(f);
        }
        if (peek() == '(') {
            ++pos_;
            PathPtr p = parse_alt();
            expect(')');
            return p;
        }
        std::string id = peek_ident();
        if (id.empty()) fail("expected path atom");
        if (id == "goto") {
            pos_ += id.size();
            expect('(');
            FilterPtr f = parse_fdisj();
            expect(')');
            return goto_filter(f);
        }
        if (id == "any") {
            pos_ += id.size();
            return any_edge();
        }
        if (is_reserved(id)) fail("reserved word '" + id + "' in path position");
        pos_ += id.size();
        if (!eof() && peek() == '^') {
            ++pos_;
            return edge_inv(id);
        }
        return edge(id);
    }

    FilterPtr parse_fdisj() {
        FilterPtr f = parse_fconj();
        while (try_keyword("or")) f = f_or(f, parse_fconj());
        return f;
    }

    FilterPtr parse_fconj() {
        FilterPtr f = parse_funit();
        while (try_keyword("and")) f = f_and(f, parse_funit());
        return f;
    }

    FilterPtr parse_funit() {
        skip_ws();
        if (eof()) fail("expected filter");
        if (try_keyword("not")) return f_not(parse_funit());
        if (try_keyword("true")) return truth();
        if (peek() == '.') {
            ++pos_;
            return node_label(take_ident("node label"));
        }
        if (peek() == '[') {
            ++pos_;
            PathPtr p = parse_alt();
            expect(']');
            return has_path(p);
        }
        if (peek() == '(') {
            ++pos_;
            FilterPtr f = parse_fdisj();
            expect(')');
            return f;
        }
        fail("expected filter");
    }
};

} // namespace

PathPtr parse_path(const std::string& text) { return QueryParser(text).parse_path_all(); }
FilterPtr parse_filter(const std::string& text) { return QueryParser(text).parse_filter_all(); }

std::string to_text(const Path& p) {
    switch (p.kind) {
    case PathKind::Edge: return p.label;
    case PathKind::EdgeInv: return p.label + "^";
    case PathKind::AnyEdge: return "any";
    case PathKind::FilterStep: return "?(" + to_text(*p.filter) + ")";
    case PathKind::Goto: return "goto(" + to_text(*p.filter) + ")";
    case PathKind::Concat: return "(" + to_text(*p.left) + "/" + to_text(*p.right) + ")";
    case PathKind::Union: return "(" + to_text(*p.left) + "|" + to_text(*p.right) + ")";
    case PathKind::Plus: return to_text(*p.left) + "+";
    case PathKind::Star: return to_text(*p.left) + "*";
    }
    return "";
}

std::string to_text(const Filter& f) {
    switch (f.kind) {
    case FilterKind::Truth: return "true";
    case FilterKind::NodeLabel: return "." + f.label;
    case FilterKind::And: return "(" + to_text(*f.left) + " and " + to_text(*f.right) + ")";
    case FilterKind::Or: return "(" + to_text(*f.left) + " or " + to_text(*f.right) + ")";
    case FilterKind::Not: return "(not " + to_text(*f.left) + ")";
    case FilterKind::HasPath: return "[" + to_text(*f.path) + "]";
    }
    return "";
}

PathPtr desugar(const PathPtr& p, const std::set<Label>& alphabet) {
    switch (p->kind) {
    case PathKind::Edge:
    case PathKind::EdgeInv: return p;
    case PathKind::AnyEdge: {
        if (alphabet.empty())
            throw ValidationError("wildcard edge used with an empty edge alphabet");
        PathPtr out;
        for (const Label& l : alphabet) out = out ? alt(out, edge(l)) : edge(l);
        return out;
    }
    case PathKind::FilterStep: return filter_step(desugar(p->filter, alphabet));
    case PathKind::Goto: return goto_filter(desugar(p->filter, alphabet));
    case PathKind::Concat: return concat(desugar(p->left, alphabet), desugar(p->right, alphabet));
    case PathKind::Union: return alt(desugar(p->left, alphabet), desugar(p->right, alphabet));
    case PathKind::Plus: return plus(desugar(p->left, alphabet));
    case PathKind::Star:
        return alt(plus(desugar(p->left, alphabet)), filter_step(truth()));
    }
    return p;
}

FilterPtr desugar(const FilterPtr& f, const std::set<Label>& alphabet) {
    switch (f->kind) {
    case FilterKind::Truth:
    case FilterKind::NodeLabel: return f;
    case FilterKind::And: return f_and(desugar(f->left, alphabet), desugar(f->right, alphabet));
    case FilterKind::Or: return f_or(desugar(f->left, alphabet), desugar(f->right, alphabet));
    case FilterKind::Not: return f_not(desugar(f->left, alphabet));
    case FilterKind::HasPath: return has_path(desugar(f->path, alphabet));
    }
    return f;
}

PathPtr invert(const PathPtr& p) {
    switch (p->kind) {
    case PathKind::Edge: return edge_inv(p->label);
    case PathKind::EdgeInv: return edge(p->label);
    // A filter step denotes a partial identity; it is its own converse.
    case PathKind::FilterStep: return p;
    case PathKind::Concat: return concat(invert(p->right), invert(p->left));
    case PathKind::Union: return alt(invert(p->left), invert(p->right));
    case PathKind::Plus: return plus(invert(p->left));
    case PathKind::Goto: throw UnsupportedError("goto paths have no syntactic converse");
    case PathKind::Star:
    case PathKind::AnyEdge:
        throw ValidationError("invert requires a desugared path");
    }
    return p;
}

} // namespace pathlog
