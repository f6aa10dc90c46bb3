#include "pathlog/datalog.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace pathlog {

PredKind predicate_kind(const std::string& name) {
    if (name == "node" || name.rfind("node_", 0) == 0 || name.rfind("edge_", 0) == 0)
        return PredKind::Extensional;
    return PredKind::Intensional;
}

int extensional_arity(const std::string& name) {
    if (name == "node" || name.rfind("node_", 0) == 0) return 1;
    if (name.rfind("edge_", 0) == 0) return 2;
    return -1;
}

namespace {

bool bare_const_ok(const std::string& s) {
    if (s.empty()) return false;
    char c0 = s[0];
    if (!(std::islower(static_cast<unsigned char>(c0)) ||
          std::isdigit(static_cast<unsigned char>(c0)) || c0 == '_'))
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
            return false;
    return true;
}

std::string term_text(const Term& t) {
    if (t.is_var()) return t.text;
    if (bare_const_ok(t.text)) return t.text;
    std::string out = "'";
    for (char c : t.text) {
        if (c == '\\' || c == '\'') out += '\\';
        out += c;
    }
    out += "'";
    return out;
}

} // namespace

std::string Literal::str() const {
    std::string out = pred + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += term_text(args[i]);
    }
    return out + ")";
}

std::string Clause::str() const {
    std::string out = head.str();
    if (!body.empty()) {
        out += " :- ";
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (i) out += ", ";
            out += body[i].str();
        }
    }
    return out + ".";
}

bool Substitution::bind(const std::string& var, Term value) {
    if (value.is_var() && value.text == var) return true;
    auto it = map_.find(var);
    if (it != map_.end()) return apply(it->second) == apply(value);
    map_.emplace(var, std::move(value));
    return true;
}

const Term* Substitution::lookup(const std::string& var) const {
    auto it = map_.find(var);
    return it == map_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term& t) const {
    Term cur = t;
    // Flat terms: chains are plain var renamings, no occurs check needed.
    std::size_t guard = map_.size() + 1;
    while (cur.is_var() && guard-- > 0) {
        const Term* next = lookup(cur.text);
        if (!next || *next == cur) break;
        cur = *next;
    }
    return cur;
}

Literal Substitution::apply(const Literal& l) const {
    Literal out;
    out.pred = l.pred;
    out.args.reserve(l.args.size());
    for (const Term& t : l.args) out.args.push_back(apply(t));
    return out;
}

std::vector<Literal> Substitution::apply(const std::vector<Literal>& ls) const {
    std::vector<Literal> out;
    out.reserve(ls.size());
    for (const Literal& l : ls) out.push_back(apply(l));
    return out;
}

std::optional<Substitution> Substitution::join(const Substitution& a, const Substitution& b) {
    Substitution out = a;
    for (const auto& [var, value] : b.map_) {
        Term lhs = out.apply(Term::var(var));
        Term rhs = out.apply(value);
        if (lhs == rhs) continue;
        if (lhs.is_var()) {
            if (!out.bind(lhs.text, rhs)) return std::nullopt;
        } else if (rhs.is_var()) {
            if (!out.bind(rhs.text, lhs)) return std::nullopt;
        } else {
            return std::nullopt;
        }
    }
    return out;
}

std::optional<Substitution> unify(const Literal& a, const Literal& b) {
    if (a.pred != b.pred || a.args.size() != b.args.size()) return std::nullopt;
    Substitution s;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        Term x = s.apply(a.args[i]);
        Term y = s.apply(b.args[i]);
        if (x == y) continue;
        if (x.is_var()) {
            s.bind(x.text, y);
        } else if (y.is_var()) {
            s.bind(y.text, x);
        } else {
            return std::nullopt;
        }
    }
    return s;
}

std::set<std::string> free_vars(const Literal& l) {
    std::set<std::string> out;
    for (const Term& t : l.args)
        if (t.is_var()) out.insert(t.text);
    return out;
}

std::set<std::string> free_vars(const std::vector<Literal>& ls) {
    std::set<std::string> out;
    for (const Literal& l : ls)
        for (const Term& t : l.args)
            if (t.is_var()) out.insert(t.text);
    return out;
}

bool is_safe(const Clause& c) {
    std::set<std::string> body_vars = free_vars(c.body);
    for (const std::string& v : free_vars(c.head))
        if (!body_vars.count(v)) return false;
    return true;
}

bool is_safe(const Program& p) {
    return std::all_of(p.clauses.begin(), p.clauses.end(),
                       [](const Clause& c) { return is_safe(c); });
}

bool is_scl_goal(const std::vector<Literal>& goal) {
    std::set<std::string> prefix_vars;
    for (const Literal& l : goal) {
        for (const Term& t : l.args)
            if (t.is_var()) prefix_vars.insert(t.text);
        if (prefix_vars.size() <= 1) continue;
        bool covered = false;
        for (const Literal& cand : goal) {
            if (predicate_kind(cand.pred) != PredKind::Extensional) continue;
            std::set<std::string> cand_vars = free_vars(cand);
            covered = std::all_of(prefix_vars.begin(), prefix_vars.end(),
                                  [&](const std::string& v) { return cand_vars.count(v) != 0; });
            if (covered) break;
        }
        if (!covered) return false;
    }
    return true;
}

bool is_scl_query(const Query& q) {
    if (!is_scl_goal(q.goal)) return false;
    for (const Clause& c : q.program.clauses) {
        std::vector<Literal> seq;
        seq.reserve(c.body.size() + 1);
        seq.push_back(c.head);
        seq.insert(seq.end(), c.body.begin(), c.body.end());
        if (!is_scl_goal(seq)) return false;
    }
    return true;
}

Clause rename_apart(const Clause& c, const std::set<std::string>& avoid) {
    std::vector<Literal> all;
    all.push_back(c.head);
    all.insert(all.end(), c.body.begin(), c.body.end());
    std::set<std::string> used = free_vars(all);

    Substitution renaming;
    int counter = 0;
    for (const std::string& v : free_vars(all)) {
        if (!avoid.count(v)) continue;
        std::string fresh;
        do {
            fresh = "X" + std::to_string(counter++);
        } while (avoid.count(fresh) || used.count(fresh));
        used.insert(fresh);
        renaming.bind(v, Term::var(fresh));
    }
    Clause out;
    out.head = renaming.apply(c.head);
    out.body = renaming.apply(c.body);
    return out;
}

std::string emit_text(const Program& p) {
    std::vector<const Clause*> order;
    order.reserve(p.clauses.size());
    for (const Clause& c : p.clauses) order.push_back(&c);
    std::stable_sort(order.begin(), order.end(), [](const Clause* a, const Clause* b) {
        if (a->head.pred != b->head.pred) return a->head.pred < b->head.pred;
        return a->str() < b->str();
    });
    std::string out;
    for (const Clause* c : order) {
        out += c->str();
        out += "\n";
    }
    return out;
}

std::string emit_text(const Query& q) {
    std::string out = "% goal: ";
    for (std::size_t i = 0; i < q.goal.size(); ++i) {
        if (i) out += ", ";
        out += q.goal[i].str();
    }
    out += "\n";
    return out + emit_text(q.program);
}

namespace {

class ProgramParser {
public:
    explicit ProgramParser(const std::string& text) : text_(text) {}

    Program parse() {
        Program prog;
        skip_trivia();
        while (!eof()) {
            prog.clauses.push_back(parse_clause());
            skip_trivia();
        }
        validate_arities(prog);
        return prog;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("datalog line " + std::to_string(line_) + ": " + msg);
    }

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    void advance() {
        if (text_[pos_] == '\n') ++line_;
        ++pos_;
    }

    void skip_trivia() {
        while (!eof()) {
            if (std::isspace(static_cast<unsigned char>(peek()))) {
                advance();
            } else if (peek() == '%') {
                while (!eof() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    void expect(char c) {
        skip_trivia();
        if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
        advance();
    }

    bool try_consume(char c) {
        skip_trivia();
        if (!eof() && peek() == c) {
            advance();
            return true;
        }
        return false;
    }

    std::string parse_name() {
        skip_trivia();
        if (eof() || !(std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
            fail("expected predicate name");
        std::string out;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                          peek() == '-')) {
            out += peek();
            advance();
        }
        return out;
    }

    Term parse_term() {
        skip_trivia();
        if (eof()) fail("expected term");
        if (peek() == '\'') {
            advance();
            std::string out;
            while (!eof() && peek() != '\'') {
                if (peek() == '\\') {
                    advance();
                    if (eof()) fail("unterminated escape");
                }
                out += peek();
                advance();
            }
            if (eof()) fail("unterminated quoted constant");
            advance();
            return Term::constant(out);
        }
        std::string word = parse_name();
        if (std::isupper(static_cast<unsigned char>(word[0]))) return Term::var(word);
        return Term::constant(word);
    }

    Literal parse_literal() {
        Literal l;
        l.pred = parse_name();
        expect('(');
        skip_trivia();
        if (!try_consume(')')) {
            l.args.push_back(parse_term());
            while (try_consume(',')) l.args.push_back(parse_term());
            expect(')');
        }
        return l;
    }

    Clause parse_clause() {
        Clause c;
        c.head = parse_literal();
        skip_trivia();
        if (!eof() && peek() == ':') {
            advance();
            if (eof() || peek() != '-') fail("expected ':-'");
            advance();
            c.body.push_back(parse_literal());
            while (try_consume(',')) c.body.push_back(parse_literal());
        }
        expect('.');
        return c;
    }

    void validate_arities(const Program& prog) const {
        std::map<std::string, std::size_t> arity;
        auto check = [&](const Literal& l) {
            int ext = extensional_arity(l.pred);
            if (ext >= 0 && l.args.size() != static_cast<std::size_t>(ext))
                throw ValidationError("predicate '" + l.pred + "' used with arity " +
                                      std::to_string(l.args.size()) + ", expected " +
                                      std::to_string(ext));
            auto [it, fresh] = arity.emplace(l.pred, l.args.size());
            if (!fresh && it->second != l.args.size())
                throw ValidationError("predicate '" + l.pred + "' used with inconsistent arity");
        };
        for (const Clause& c : prog.clauses) {
            check(c.head);
            for (const Literal& l : c.body) check(l);
        }
    }
};

} // namespace

Program parse_program(const std::string& text) { return ProgramParser(text).parse(); }

} // namespace pathlog
