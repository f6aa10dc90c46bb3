#include "pathlog/engine.hpp"

#include <deque>
#include <functional>
#include <unordered_map>
#include <vector>

namespace pathlog {

namespace {

void validate_program(const Program& prog, const std::vector<Literal>& goal,
                      bool monadic_intensional) {
    std::map<std::string, std::size_t> arity;
    auto check = [&](const Literal& l, bool is_head) {
        int ext = extensional_arity(l.pred);
        if (ext >= 0) {
            if (is_head)
                throw ValidationError("extensional predicate '" + l.pred +
                                      "' cannot be defined by a clause");
            if (l.args.size() != static_cast<std::size_t>(ext))
                throw ValidationError("predicate '" + l.pred + "' used with arity " +
                                      std::to_string(l.args.size()) + ", expected " +
                                      std::to_string(ext));
        } else if (monadic_intensional && l.args.size() > 1) {
            throw ValidationError("intensional predicate '" + l.pred +
                                  "' must be monadic for tabled evaluation");
        }
        auto [it, fresh] = arity.emplace(l.pred, l.args.size());
        if (!fresh && it->second != l.args.size())
            throw ValidationError("predicate '" + l.pred + "' used with inconsistent arity");
    };
    for (const Clause& c : prog.clauses) {
        if (!is_safe(c)) throw ValidationError("unsafe clause: " + c.str());
        check(c.head, true);
        for (const Literal& l : c.body) check(l, false);
    }
    for (const Literal& l : goal) check(l, false);
}

// Enumerates facts matching a partially bound literal, extending `binds` per
// match. Uses the narrowest per-argument index available; never scans facts
// of other predicates.
template <typename OnMatch>
void probe_facts(const FactIndex& ix, const Literal& bound, const Substitution& binds,
                 OnMatch&& on_match) {
    const FactIndex::Relation* rel = ix.relation(bound.pred);
    if (!rel) return;

    const std::vector<const Fact*>* candidates = &rel->all;
    if (!bound.args.empty() && !bound.args[0].is_var()) {
        auto it = rel->by_first.find(bound.args[0].text);
        static const std::vector<const Fact*> none;
        candidates = it == rel->by_first.end() ? &none : &it->second;
    } else if (bound.args.size() == 2 && !bound.args[1].is_var()) {
        auto it = rel->by_second.find(bound.args[1].text);
        static const std::vector<const Fact*> none;
        candidates = it == rel->by_second.end() ? &none : &it->second;
    }

    for (const Fact* f : *candidates) {
        if (static_cast<std::size_t>(f->arity()) != bound.args.size()) continue;
        Substitution extended = binds;
        bool ok = true;
        for (std::size_t i = 0; i < bound.args.size() && ok; ++i) {
            const NodeId& fact_arg = i == 0 ? f->a : f->b;
            Term t = extended.apply(bound.args[i]);
            if (t.is_var())
                ok = extended.bind(t.text, Term::constant(fact_arg));
            else
                ok = t.text == fact_arg;
        }
        if (ok) on_match(*f, std::move(extended));
    }
}

enum class CallKind { Nullary, Free, Bound };

struct Table {
    CallKind kind = CallKind::Free;
    std::string pred;
    std::vector<NodeId> answers;          // append-only; "" for nullary success
    std::set<NodeId> answer_set;
    // Suspended body states waiting on this table's answers.
    struct Consumer {
        int owner;  // -1 = goal
        const std::vector<Literal>* body;
        std::size_t pos;
        Substitution binds;
        Literal head_instance;
        std::string recv_var;  // variable to receive the answer, or empty
    };
    std::vector<Consumer> consumers;
};

class TopDownEngine {
public:
    TopDownEngine(const Query& q, const FactDb& db)
        : q_(q), db_(db), ix_(db.index()) {
        validate_program(q.program, q.goal, true);
        for (const Clause& c : q.program.clauses) {
            clauses_by_pred_[c.head.pred].push_back(&c);
            touch_pred(c.head.pred);
            for (const Literal& l : c.body) touch_pred(l.pred);
        }
        for (const Literal& l : q.goal) touch_pred(l.pred);
        goal_vars_ = free_vars(q.goal);
    }

    EvalResult run() {
        queue_.push_back(State{-1, &q_.goal, 0, {}, Literal{}});
        while (!queue_.empty()) {
            State s = std::move(queue_.front());
            queue_.pop_front();
            ++result_.stats.resumptions;
            step(std::move(s));
        }
        result_.visited = FactDb(std::move(visited_));
        return result_;
    }

private:
    struct State {
        int owner;  // table index, or -1 for the goal conjunction
        const std::vector<Literal>* body;
        std::size_t pos;
        Substitution binds;
        Literal head_instance;
    };

    const Query& q_;
    const FactDb& db_;
    const FactIndex& ix_;
    std::unordered_map<std::string, std::vector<const Clause*>> clauses_by_pred_;
    std::unordered_map<std::string, int> table_ids_;
    std::deque<Table> tables_;
    std::deque<State> queue_;
    std::set<Fact> visited_;
    std::set<std::string> goal_vars_;
    EvalResult result_;

    void touch_pred(const std::string& pred) {
        if (predicate_kind(pred) == PredKind::Intensional) result_.reached[pred];
    }

    void record_visited_const(const NodeId& c) { visited_.insert(node_fact(c)); }

    void step(State s) {
        if (s.pos == s.body->size()) return complete(s);
        const Literal lit = s.binds.apply((*s.body)[s.pos]);
        if (predicate_kind(lit.pred) == PredKind::Extensional)
            probe(std::move(s), lit);
        else
            call(std::move(s), lit);
    }

    void complete(const State& s) {
        if (s.owner < 0) {
            Substitution answer;
            for (const std::string& v : goal_vars_) {
                Term t = s.binds.apply(Term::var(v));
                answer.bind(v, t);
            }
            result_.answers.insert(std::move(answer));
            return;
        }
        Table& t = tables_[s.owner];
        Literal done = s.binds.apply(s.head_instance);
        NodeId value = done.args.empty() ? NodeId{} : done.args[0].text;
        if (!t.answer_set.insert(value).second) return;
        t.answers.push_back(value);
        for (const Table::Consumer& c : t.consumers) resume(c, value);
    }

    void resume(const Table::Consumer& c, const NodeId& value) {
        State s{c.owner, c.body, c.pos, c.binds, c.head_instance};
        if (!c.recv_var.empty()) s.binds.bind(c.recv_var, Term::constant(value));
        queue_.push_back(std::move(s));
    }

    void probe(State s, const Literal& lit) {
        ++result_.stats.probes;
        for (const Term& t : lit.args)
            if (!t.is_var()) record_visited_const(t.text);
        probe_facts(ix_, lit, s.binds, [&](const Fact& f, Substitution extended) {
            visited_.insert(f);
            record_visited_const(f.a);  // matched endpoints are visited nodes
            if (f.arity() == 2) record_visited_const(f.b);
            queue_.push_back(State{s.owner, s.body, s.pos + 1, std::move(extended),
                                   s.head_instance});
        });
    }

    void call(State s, const Literal& lit) {
        CallKind kind = CallKind::Nullary;
        std::string recv_var;
        NodeId bound_value;
        if (!lit.args.empty()) {
            if (lit.args[0].is_var()) {
                kind = CallKind::Free;
                recv_var = lit.args[0].text;
            } else {
                kind = CallKind::Bound;
                bound_value = lit.args[0].text;
                record_visited_const(bound_value);
                result_.reached[lit.pred].insert(bound_value);
            }
        }

        std::string key = lit.pred + '\x1f';
        switch (kind) {
        case CallKind::Nullary: key += '0'; break;
        case CallKind::Free: key += '?'; break;
        case CallKind::Bound: key += '=' + bound_value; break;
        }

        auto [it, fresh] = table_ids_.emplace(key, static_cast<int>(tables_.size()));
        if (fresh) {
            tables_.emplace_back();
            Table& t = tables_.back();
            t.kind = kind;
            t.pred = lit.pred;
            ++result_.stats.calls;
            activate_clauses(static_cast<int>(it->second), lit, kind, bound_value);
        }
        Table& t = tables_[it->second];
        Table::Consumer consumer{s.owner, s.body, s.pos + 1, std::move(s.binds),
                                 s.head_instance, recv_var};
        for (const NodeId& a : t.answers) resume(consumer, a);
        t.consumers.push_back(std::move(consumer));
    }

    void activate_clauses(int table, const Literal& lit, CallKind kind,
                          const NodeId& bound_value) {
        auto it = clauses_by_pred_.find(lit.pred);
        if (it == clauses_by_pred_.end()) return;  // no clauses: empty relation
        for (const Clause* c : it->second) {
            Substitution binds;
            if (kind == CallKind::Bound) {
                const Term& h = c->head.args[0];
                if (h.is_var())
                    binds.bind(h.text, Term::constant(bound_value));
                else if (h.text != bound_value)
                    continue;
            }
            queue_.push_back(State{table, &c->body, 0, std::move(binds), c->head});
        }
    }
};

// Conjunctive matching shared by the bottom-up evaluator and goal extraction.
void match_sequence(const std::vector<Literal>& seq, std::size_t pos, const Substitution& binds,
                    const FactIndex& ix,
                    const std::map<std::string, std::vector<const Literal*>>& model_by_pred,
                    const std::function<void(const Substitution&)>& on_solution) {
    if (pos == seq.size()) {
        on_solution(binds);
        return;
    }
    const Literal lit = binds.apply(seq[pos]);
    if (predicate_kind(lit.pred) == PredKind::Extensional) {
        probe_facts(ix, lit, binds, [&](const Fact&, Substitution extended) {
            match_sequence(seq, pos + 1, extended, ix, model_by_pred, on_solution);
        });
        return;
    }
    auto it = model_by_pred.find(lit.pred);
    if (it == model_by_pred.end()) return;
    for (const Literal* atom : it->second) {
        if (atom->args.size() != lit.args.size()) continue;
        Substitution extended = binds;
        bool ok = true;
        for (std::size_t i = 0; i < lit.args.size() && ok; ++i) {
            Term t = extended.apply(lit.args[i]);
            if (t.is_var())
                ok = extended.bind(t.text, atom->args[i]);
            else
                ok = t == atom->args[i];
        }
        if (ok) match_sequence(seq, pos + 1, extended, ix, model_by_pred, on_solution);
    }
}

} // namespace

EvalResult eval_topdown(const Query& q, const FactDb& db) {
    return TopDownEngine(q, db).run();
}

std::set<Literal> eval_bottomup_naive(const Program& p, const FactDb& db) {
    validate_program(p, {}, false);
    const FactIndex& ix = db.index();
    std::set<Literal> model;
    std::map<std::string, std::vector<const Literal*>> by_pred;

    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Literal> fresh;
        for (const Clause& c : p.clauses) {
            match_sequence(c.body, 0, {}, ix, by_pred, [&](const Substitution& binds) {
                Literal derived = binds.apply(c.head);
                if (!model.count(derived)) fresh.push_back(derived);
            });
        }
        for (Literal& l : fresh) {
            auto [it, inserted] = model.insert(std::move(l));
            if (inserted) {
                by_pred[it->pred].push_back(&*it);
                changed = true;
            }
        }
    }
    return model;
}

std::set<Substitution> answers_from_model(const std::vector<Literal>& goal,
                                          const std::set<Literal>& model, const FactDb& db) {
    std::map<std::string, std::vector<const Literal*>> by_pred;
    for (const Literal& l : model) by_pred[l.pred].push_back(&l);
    std::set<std::string> goal_vars = free_vars(goal);
    std::set<Substitution> out;
    match_sequence(goal, 0, {}, db.index(), by_pred, [&](const Substitution& binds) {
        Substitution answer;
        for (const std::string& v : goal_vars) answer.bind(v, binds.apply(Term::var(v)));
        out.insert(std::move(answer));
    });
    return out;
}

} // namespace pathlog
