#include "pathlog/reference_eval.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace pathlog {

namespace {

// Nodes are interned to dense indices; relations are boolean adjacency
// matrices (one cache line per 512 nodes), so transitive closures of
// document-sized graphs stay cheap.

struct Interner {
    std::vector<NodeId> ids;
    std::unordered_map<NodeId, int> index;

    explicit Interner(const LabeledGraph& g) {
        ids.assign(g.nodes.begin(), g.nodes.end());
        for (int i = 0; i < static_cast<int>(ids.size()); ++i) index.emplace(ids[i], i);
    }
    int n() const { return static_cast<int>(ids.size()); }
    int at(const NodeId& v) const { return index.at(v); }
};

struct Bits {
    int n = 0;
    std::vector<std::uint64_t> w;

    explicit Bits(int n_) : n(n_), w((n_ + 63) / 64, 0) {}
    bool get(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void set(int i) { w[i >> 6] |= std::uint64_t(1) << (i & 63); }
    void or_with(const Bits& o) {
        for (std::size_t k = 0; k < w.size(); ++k) w[k] |= o.w[k];
    }
    void and_with(const Bits& o) {
        for (std::size_t k = 0; k < w.size(); ++k) w[k] &= o.w[k];
    }
    void complement() {
        for (auto& word : w) word = ~word;
        int spare = static_cast<int>(w.size()) * 64 - n;
        if (spare > 0 && !w.empty()) w.back() &= ~std::uint64_t(0) >> spare;
    }
    bool any() const {
        for (auto word : w)
            if (word) return true;
        return false;
    }
};

struct Mat {
    int n = 0;
    int words = 0;
    std::vector<std::uint64_t> w;

    explicit Mat(int n_) : n(n_), words((n_ + 63) / 64), w(std::size_t(n_) * words, 0) {}
    std::uint64_t* row(int i) { return w.data() + std::size_t(i) * words; }
    const std::uint64_t* row(int i) const { return w.data() + std::size_t(i) * words; }
    bool get(int i, int j) const { return (row(i)[j >> 6] >> (j & 63)) & 1; }
    void set(int i, int j) { row(i)[j >> 6] |= std::uint64_t(1) << (j & 63); }
    void or_row(int i, const std::uint64_t* other) {
        auto* r = row(i);
        for (int k = 0; k < words; ++k) r[k] |= other[k];
    }
};

Mat unite(const Mat& a, const Mat& b) {
    Mat out = a;
    for (std::size_t k = 0; k < out.w.size(); ++k) out.w[k] |= b.w[k];
    return out;
}

Mat compose(const Mat& a, const Mat& b) {
    Mat out(a.n);
    for (int i = 0; i < a.n; ++i) {
        const auto* r = a.row(i);
        for (int k = 0; k < a.words; ++k) {
            std::uint64_t word = r[k];
            while (word) {
                int j = k * 64 + __builtin_ctzll(word);
                word &= word - 1;
                out.or_row(i, b.row(j));
            }
        }
    }
    return out;
}

Mat transitive_closure(Mat m) {
    for (int k = 0; k < m.n; ++k)
        for (int i = 0; i < m.n; ++i)
            if (m.get(i, k)) m.or_row(i, m.row(k));
    return m;
}

class RelEval {
public:
    RelEval(const LabeledGraph& g, const Interner& in) : g_(g), in_(in) {}

    Bits filter_bits(const Filter& f) {
        switch (f.kind) {
        case FilterKind::Truth: {
            Bits b(in_.n());
            for (int i = 0; i < in_.n(); ++i) b.set(i);
            return b;
        }
        case FilterKind::NodeLabel: {
            Bits b(in_.n());
            for (const NodeId& v : g_.labeled_nodes(f.label)) b.set(in_.at(v));
            return b;
        }
        case FilterKind::And: {
            Bits b = filter_bits(*f.left);
            b.and_with(filter_bits(*f.right));
            return b;
        }
        case FilterKind::Or: {
            Bits b = filter_bits(*f.left);
            b.or_with(filter_bits(*f.right));
            return b;
        }
        case FilterKind::Not: {
            Bits b = filter_bits(*f.left);
            b.complement();
            return b;
        }
        case FilterKind::HasPath: {
            Mat m = path_mat(*f.path);
            Bits b(in_.n());
            for (int i = 0; i < in_.n(); ++i) {
                const auto* r = m.row(i);
                for (int k = 0; k < m.words; ++k)
                    if (r[k]) {
                        b.set(i);
                        break;
                    }
            }
            return b;
        }
        }
        return Bits(in_.n());
    }

    Mat path_mat(const Path& p) {
        switch (p.kind) {
        case PathKind::Edge: {
            Mat m(in_.n());
            for (const auto& [s, d] : g_.edge_set(p.label)) m.set(in_.at(s), in_.at(d));
            return m;
        }
        case PathKind::EdgeInv: {
            Mat m(in_.n());
            for (const auto& [s, d] : g_.edge_set(p.label)) m.set(in_.at(d), in_.at(s));
            return m;
        }
        case PathKind::FilterStep: {
            Bits b = filter_bits(*p.filter);
            Mat m(in_.n());
            for (int i = 0; i < in_.n(); ++i)
                if (b.get(i)) m.set(i, i);
            return m;
        }
        case PathKind::Goto: {
            Bits b = filter_bits(*p.filter);
            Mat m(in_.n());
            for (int i = 0; i < in_.n(); ++i)
                for (int k = 0; k < m.words; ++k) m.row(i)[k] = b.w[k];
            return m;
        }
        case PathKind::Concat: return compose(path_mat(*p.left), path_mat(*p.right));
        case PathKind::Union: return unite(path_mat(*p.left), path_mat(*p.right));
        case PathKind::Plus: return transitive_closure(path_mat(*p.left));
        case PathKind::Star:
        case PathKind::AnyEdge:
            throw ValidationError("evaluation requires a desugared path");
        }
        return Mat(in_.n());
    }

private:
    const LabeledGraph& g_;
    const Interner& in_;
};

// Set-based forward evaluation, independent of the matrix machinery above.
class FromEval {
public:
    explicit FromEval(const LabeledGraph& g) : g_(g) {}

    NodeSet path_from(const Path& p, const NodeSet& start) {
        switch (p.kind) {
        case PathKind::Edge: {
            NodeSet out;
            for (const auto& [s, d] : g_.edge_set(p.label))
                if (start.count(s)) out.insert(d);
            return out;
        }
        case PathKind::EdgeInv: {
            NodeSet out;
            for (const auto& [s, d] : g_.edge_set(p.label))
                if (start.count(d)) out.insert(s);
            return out;
        }
        case PathKind::FilterStep: {
            NodeSet sat = eval_filter(g_, *p.filter);
            NodeSet out;
            for (const NodeId& v : start)
                if (sat.count(v)) out.insert(v);
            return out;
        }
        case PathKind::Goto:
            return start.empty() ? NodeSet{} : eval_filter(g_, *p.filter);
        case PathKind::Concat: return path_from(*p.right, path_from(*p.left, start));
        case PathKind::Union: {
            NodeSet out = path_from(*p.left, start);
            NodeSet r = path_from(*p.right, start);
            out.insert(r.begin(), r.end());
            return out;
        }
        case PathKind::Plus: {
            // Semi-naive iteration: only the frontier is re-expanded.
            NodeSet all = path_from(*p.left, start);
            NodeSet frontier = all;
            while (!frontier.empty()) {
                NodeSet next;
                for (const NodeId& v : path_from(*p.left, frontier))
                    if (!all.count(v)) next.insert(v);
                all.insert(next.begin(), next.end());
                frontier = std::move(next);
            }
            return all;
        }
        case PathKind::Star:
        case PathKind::AnyEdge:
            throw ValidationError("evaluation requires a desugared path");
        }
        return {};
    }

private:
    const LabeledGraph& g_;
};

void check_start(const LabeledGraph& g, const NodeSet& start) {
    for (const NodeId& v : start)
        if (!g.has_node(v)) throw ValidationError("start node '" + v + "' is not in the graph");
}

} // namespace

NodeRel eval_path_rel(const LabeledGraph& g, const Path& p) {
    Interner in(g);
    RelEval ev(g, in);
    Mat m = ev.path_mat(p);
    NodeRel out;
    for (int i = 0; i < in.n(); ++i)
        for (int j = 0; j < in.n(); ++j)
            if (m.get(i, j)) out.insert({in.ids[i], in.ids[j]});
    return out;
}

NodeSet eval_filter(const LabeledGraph& g, const Filter& f) {
    Interner in(g);
    RelEval ev(g, in);
    Bits b = ev.filter_bits(f);
    NodeSet out;
    for (int i = 0; i < in.n(); ++i)
        if (b.get(i)) out.insert(in.ids[i]);
    return out;
}

NodeSet eval_path_from(const LabeledGraph& g, const Path& p, const NodeSet& start) {
    check_start(g, start);
    return FromEval(g).path_from(p, start);
}

NodeSet eval_filter_from(const LabeledGraph& g, const Filter& f, const NodeSet& start) {
    check_start(g, start);
    NodeSet sat = eval_filter(g, f);
    NodeSet out;
    for (const NodeId& v : start)
        if (sat.count(v)) out.insert(v);
    return out;
}

} // namespace pathlog
