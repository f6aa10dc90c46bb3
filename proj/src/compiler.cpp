#include "pathlog/compiler.hpp"

namespace pathlog {

std::string FreshNames::fresh(PredRole role) {
    char letter = 'i';
    switch (role) {
    case PredRole::Initial: letter = 'i'; break;
    case PredRole::Final: letter = 'f'; break;
    case PredRole::Check: letter = 'c'; break;
    case PredRole::Continuation: letter = 'r'; break;
    case PredRole::Nullary: letter = 'j'; break;
    }
    return std::string(1, letter) + std::to_string(counter_++);
}

namespace {

const Term X = Term::var("X");
const Term Y = Term::var("Y");

Literal lit(const std::string& pred, std::initializer_list<Term> args) {
    return Literal{pred, std::vector<Term>(args)};
}

void append(Program& dst, Program src) {
    for (Clause& c : src.clauses) dst.clauses.push_back(std::move(c));
}

// The p+ loop clause recycles values between its interface predicates. That
// is only sound while nothing else reads the predicate it writes or writes
// the predicate it reads; a sibling union branch (which shares both) or an
// adjacent loop across a concatenation boundary would otherwise leak values
// between subqueries. These predicates detect, purely structurally, whether
// a subpath's compiled program touches its own interface that way.
bool acc_writes_initial(const Path& p) {
    switch (p.kind) {
    case PathKind::Plus: return true;
    case PathKind::Concat: return acc_writes_initial(*p.left);
    case PathKind::Union: return acc_writes_initial(*p.left) || acc_writes_initial(*p.right);
    default: return false;
    }
}

bool acc_reads_final(const Path& p) {
    switch (p.kind) {
    case PathKind::Plus: return true;
    case PathKind::Concat: return acc_reads_final(*p.right);
    case PathKind::Union: return acc_reads_final(*p.left) || acc_reads_final(*p.right);
    default: return false;
    }
}

bool ex_writes_continuation(const Path& p) {
    switch (p.kind) {
    case PathKind::Plus: return true;
    case PathKind::Concat: return ex_writes_continuation(*p.right);
    case PathKind::Union: return ex_writes_continuation(*p.left) || ex_writes_continuation(*p.right);
    default: return false;
    }
}

bool ex_reads_check(const Path& p) {
    switch (p.kind) {
    case PathKind::Plus: return true;
    case PathKind::Concat: return ex_reads_check(*p.left);
    case PathKind::Union: return ex_reads_check(*p.left) || ex_reads_check(*p.right);
    default: return false;
    }
}

// Tracks role assignments made while compiling (only compile_query /
// compile_filter_query expose them; the scheme functions share the logic).
struct Emitter {
    FreshNames& names;
    std::map<std::string, PredRole>* roles = nullptr;

    std::string fresh(PredRole role) {
        std::string name = names.fresh(role);
        if (roles) roles->emplace(name, role);
        return name;
    }

    // i_shared: some clause outside this subquery reads i; f_shared: some
    // clause outside it writes f. Only the p+ loop cares.
    Program acc(const Path& p, const std::string& i, const std::string& f,
                bool i_shared, bool f_shared) {
        Program out;
        switch (p.kind) {
        case PathKind::Edge:
            out.clauses.push_back({lit(f, {X}), {lit(i, {Y}), lit("edge_" + p.label, {Y, X})}});
            return out;
        case PathKind::EdgeInv:
            out.clauses.push_back({lit(f, {X}), {lit(i, {Y}), lit("edge_" + p.label, {X, Y})}});
            return out;
        case PathKind::Concat: {
            std::string mid = fresh(PredRole::Final);
            out = acc(*p.left, i, mid, i_shared, acc_writes_initial(*p.right));
            append(out, acc(*p.right, mid, f, acc_reads_final(*p.left), f_shared));
            return out;
        }
        case PathKind::Union:
            out = acc(*p.left, i, f, true, true);
            append(out, acc(*p.right, i, f, true, true));
            return out;
        case PathKind::Plus:
            // Answers feed the initial predicate back in: i ⊇ f closes p+.
            // With a shared interface the loop runs over a private pair
            // instead, so foreign values are never recycled.
            if (i_shared || f_shared) {
                std::string i2 = fresh(PredRole::Initial);
                std::string f2 = fresh(PredRole::Final);
                out.clauses.push_back({lit(i2, {X}), {lit(i, {X})}});
                append(out, acc(*p.left, i2, f2, false, false));
                out.clauses.push_back({lit(i2, {X}), {lit(f2, {X})}});
                out.clauses.push_back({lit(f, {X}), {lit(f2, {X})}});
                return out;
            }
            out = acc(*p.left, i, f, false, false);
            out.clauses.push_back({lit(i, {X}), {lit(f, {X})}});
            return out;
        case PathKind::FilterStep: {
            std::string c = fresh(PredRole::Check);
            out = filt(*p.filter, c);
            out.clauses.push_back({lit(f, {X}), {lit(i, {X}), lit(c, {X})}});
            return out;
        }
        case PathKind::Goto: {
            std::string c = fresh(PredRole::Check);
            std::string j = fresh(PredRole::Nullary);
            out = filt(*p.filter, c);
            out.clauses.push_back({lit(f, {X}), {lit(j, {}), lit(c, {X})}});
            out.clauses.push_back({lit(j, {}), {lit(i, {X})}});
            return out;
        }
        case PathKind::Star:
        case PathKind::AnyEdge:
            throw ValidationError("compilation requires a desugared query");
        }
        return out;
    }

    Program filt(const Filter& fl, const std::string& c) {
        Program out;
        switch (fl.kind) {
        case FilterKind::Truth:
            out.clauses.push_back({lit(c, {X}), {lit("node", {X})}});
            return out;
        case FilterKind::NodeLabel:
            out.clauses.push_back({lit(c, {X}), {lit("node_" + fl.label, {X})}});
            return out;
        case FilterKind::And: {
            std::string cl = fresh(PredRole::Check);
            std::string cr = fresh(PredRole::Check);
            out = filt(*fl.left, cl);
            append(out, filt(*fl.right, cr));
            out.clauses.push_back({lit(c, {X}), {lit(cl, {X}), lit(cr, {X})}});
            return out;
        }
        case FilterKind::Or: {
            std::string cl = fresh(PredRole::Check);
            std::string cr = fresh(PredRole::Check);
            out = filt(*fl.left, cl);
            append(out, filt(*fl.right, cr));
            out.clauses.push_back({lit(c, {X}), {lit(cl, {X})}});
            out.clauses.push_back({lit(c, {X}), {lit(cr, {X})}});
            return out;
        }
        case FilterKind::HasPath: {
            std::string r = fresh(PredRole::Continuation);
            out = ex(*fl.path, c, r, false, false);
            out.clauses.push_back({lit(r, {X}), {lit("node", {X})}});
            return out;
        }
        case FilterKind::Not:
            throw UnsupportedError("compilation is defined for negation-free queries only");
        }
        return out;
    }

    // c_shared: some clause outside this subquery writes c; r_shared: some
    // clause outside it reads r. The ex scheme mirrors acc, so the p+ loop
    // needs the mirrored guards.
    Program ex(const Path& p, const std::string& c, const std::string& r,
               bool c_shared, bool r_shared) {
        Program out;
        switch (p.kind) {
        case PathKind::Edge:
            out.clauses.push_back({lit(c, {X}), {lit("edge_" + p.label, {X, Y}), lit(r, {Y})}});
            return out;
        case PathKind::EdgeInv:
            out.clauses.push_back({lit(c, {X}), {lit("edge_" + p.label, {Y, X}), lit(r, {Y})}});
            return out;
        case PathKind::Concat: {
            std::string mid = fresh(PredRole::Continuation);
            out = ex(*p.left, c, mid, c_shared, ex_reads_check(*p.right));
            append(out, ex(*p.right, mid, r, ex_writes_continuation(*p.left), r_shared));
            return out;
        }
        case PathKind::Union:
            out = ex(*p.left, c, r, true, true);
            append(out, ex(*p.right, c, r, true, true));
            return out;
        case PathKind::Plus:
            if (c_shared || r_shared) {
                std::string c2 = fresh(PredRole::Check);
                std::string r2 = fresh(PredRole::Continuation);
                out.clauses.push_back({lit(r2, {X}), {lit(r, {X})}});
                append(out, ex(*p.left, c2, r2, false, false));
                out.clauses.push_back({lit(r2, {X}), {lit(c2, {X})}});
                out.clauses.push_back({lit(c, {X}), {lit(c2, {X})}});
                return out;
            }
            out = ex(*p.left, c, r, false, false);
            out.clauses.push_back({lit(r, {X}), {lit(c, {X})}});
            return out;
        case PathKind::FilterStep: {
            std::string cf = fresh(PredRole::Check);
            out = filt(*p.filter, cf);
            out.clauses.push_back({lit(c, {X}), {lit(cf, {X}), lit(r, {X})}});
            return out;
        }
        case PathKind::Goto: {
            std::string cf = fresh(PredRole::Check);
            std::string j = fresh(PredRole::Nullary);
            out = filt(*p.filter, cf);
            // node(X) keeps the jump clause safe; j() fires iff the filter
            // holds somewhere the continuation accepts.
            out.clauses.push_back({lit(c, {X}), {lit("node", {X}), lit(j, {})}});
            out.clauses.push_back({lit(j, {}), {lit(cf, {Y}), lit(r, {Y})}});
            return out;
        }
        case PathKind::Star:
        case PathKind::AnyEdge:
            throw ValidationError("compilation requires a desugared query");
        }
        return out;
    }
};

} // namespace

Program start_program(const NodeSet& start, const std::string& i) {
    Program out;
    for (const NodeId& v : start)
        out.clauses.push_back({Literal{i, {Term::constant(v)}}, {}});
    return out;
}

Program compile_acc(const Path& p, const std::string& i, const std::string& f,
                    FreshNames& names) {
    Emitter em{names};
    return em.acc(p, i, f, false, false);
}

Program compile_filt(const Filter& fl, const std::string& c, FreshNames& names) {
    Emitter em{names};
    return em.filt(fl, c);
}

Program compile_ex(const Path& p, const std::string& c, const std::string& r,
                   FreshNames& names) {
    Emitter em{names};
    return em.ex(p, c, r, false, false);
}

CompilationUnit compile_query(const Path& p, const NodeSet& start) {
    if (!is_negation_free(p))
        throw UnsupportedError("compilation is defined for negation-free queries only");
    CompilationUnit cu;
    FreshNames names;
    Emitter em{names, &cu.roles};
    cu.start_predicate = em.fresh(PredRole::Initial);
    cu.answer_predicate = em.fresh(PredRole::Final);
    cu.program = em.acc(p, cu.start_predicate, cu.answer_predicate, false, false);
    append(cu.program, start_program(start, cu.start_predicate));
    cu.goal = {Literal{cu.answer_predicate, {X}}};
    return cu;
}

CompilationUnit compile_filter_query(const Filter& f, const NodeSet& start) {
    if (!is_negation_free(f))
        throw UnsupportedError("compilation is defined for negation-free queries only");
    CompilationUnit cu;
    FreshNames names;
    Emitter em{names, &cu.roles};
    cu.start_predicate = em.fresh(PredRole::Initial);
    cu.answer_predicate = em.fresh(PredRole::Check);
    cu.program = em.filt(f, cu.answer_predicate);
    append(cu.program, start_program(start, cu.start_predicate));
    cu.goal = {Literal{cu.start_predicate, {X}}, Literal{cu.answer_predicate, {X}}};
    return cu;
}

std::string emit_text(const CompilationUnit& cu) {
    Query q{cu.goal, cu.program};
    std::string text = emit_text(q);
    std::string out;
    auto nl = text.find('\n');
    out = text.substr(0, nl + 1);
    out += "% start: " + cu.start_predicate + "\n";
    out += text.substr(nl + 1);
    return out;
}

} // namespace pathlog
