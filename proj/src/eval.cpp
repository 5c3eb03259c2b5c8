#include "navrw/eval.hpp"

#include <algorithm>
#include <functional>
#include <optional>

namespace navrw {

namespace {

void normalize(Relation& r) {
    for (auto& succ : r) {
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    }
}

Relation compose(const Relation& a, const Relation& b) {
    Relation out(a.size());
    std::vector<char> mark(a.size(), 0);
    for (std::size_t u = 0; u < a.size(); ++u) {
        std::fill(mark.begin(), mark.end(), 0);
        for (auto v : a[u])
            for (auto w : b[v]) mark[w] = 1;
        for (std::size_t w = 0; w < mark.size(); ++w)
            if (mark[w]) out[u].push_back(w);
    }
    return out;
}

Relation reflexive_transitive(const Relation& r) {
    Relation out(r.size());
    std::vector<char> seen(r.size(), 0);
    for (std::size_t u = 0; u < r.size(); ++u) {
        std::fill(seen.begin(), seen.end(), 0);
        std::vector<std::size_t> stack{u};
        seen[u] = 1;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            for (auto w : r[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        for (std::size_t w = 0; w < seen.size(); ++w)
            if (seen[w]) out[u].push_back(w);
    }
    return out;
}

Relation transpose(const Relation& r) {
    Relation out(r.size());
    for (std::size_t u = 0; u < r.size(); ++u)
        for (auto v : r[u]) out[v].push_back(u);
    return out;
}

bool data_holds(const DataTest& t, const Properties* props) {
    if (!props) return false;
    auto it = props->find(t.key);
    return it != props->end() && compare(it->second, t.op, t.value);
}

}  // namespace

bool holds(const TestExpr& t, const PropertyGraph& g, std::size_t v) {
    switch (t.kind) {
    case TestExpr::Kind::Data:
        return data_holds(t.data, &g.node(v).props);
    case TestExpr::Kind::Label:
        return t.label == kTop || g.node(v).labels.count(t.label) > 0;
    case TestExpr::Kind::And:
        return holds(t.args[0], g, v) && holds(t.args[1], g, v);
    case TestExpr::Kind::Or:
        return holds(t.args[0], g, v) || holds(t.args[1], g, v);
    case TestExpr::Kind::Not:
        return !holds(t.args[0], g, v);
    }
    return false;
}

bool holds(const TestExpr& t, const PropertyGraph& g, std::size_t u, std::size_t v) {
    switch (t.kind) {
    case TestExpr::Kind::Data:
        return data_holds(t.data, g.edge_props(u, v));
    case TestExpr::Kind::Label:
        return g.has_edge(u, t.label, v);
    case TestExpr::Kind::And:
        return holds(t.args[0], g, u, v) && holds(t.args[1], g, u, v);
    case TestExpr::Kind::Or:
        return holds(t.args[0], g, u, v) || holds(t.args[1], g, u, v);
    case TestExpr::Kind::Not:
        return !holds(t.args[0], g, u, v);
    }
    return false;
}

Relation eval_relation(const PathExpression& e, const PropertyGraph& g) {
    const std::size_t n = g.size();
    Relation r(n);
    switch (e.kind) {
    case PathExpression::Kind::NodeTest:
        for (std::size_t v = 0; v < n; ++v) {
            const auto& labels = g.node(v).labels;
            bool ok = std::any_of(e.labels.begin(), e.labels.end(),
                                  [&](const std::string& l) { return l == kTop || labels.count(l) > 0; });
            if (ok) r[v].push_back(v);
        }
        return r;
    case PathExpression::Kind::Test:
        for (std::size_t v = 0; v < n; ++v)
            if (holds(e.test, g, v)) r[v].push_back(v);
        return r;
    case PathExpression::Kind::Edge:
        for (const auto& edge : g.edges()) {
            if (edge.label != e.role.name) continue;
            if (e.role.inverted)
                r[edge.dst].push_back(edge.src);
            else
                r[edge.src].push_back(edge.dst);
        }
        normalize(r);
        return r;
    case PathExpression::Kind::Concat: {
        r = eval_relation(e.args.front(), g);
        for (std::size_t i = 1; i < e.args.size(); ++i) r = compose(r, eval_relation(e.args[i], g));
        return r;
    }
    case PathExpression::Kind::Union:
        for (const auto& b : e.args) {
            Relation part = eval_relation(b, g);
            for (std::size_t v = 0; v < n; ++v) r[v].insert(r[v].end(), part[v].begin(), part[v].end());
        }
        normalize(r);
        return r;
    case PathExpression::Kind::Star:
        return reflexive_transitive(eval_relation(e.args.front(), g));
    }
    return r;
}

std::vector<Mapping> eval_path(const PathExpression& e, const std::string& x, const std::string& y,
                               const PropertyGraph& g) {
    Relation r = eval_relation(e, g);
    std::vector<Mapping> out;
    for (std::size_t u = 0; u < r.size(); ++u) {
        for (auto v : r[u]) {
            if (x == y) {
                if (u == v) out.push_back({{x, g.node(u).id}});
            } else {
                out.push_back({{x, g.node(u).id}, {y, g.node(v).id}});
            }
        }
    }
    return out;
}

namespace {

struct CompiledAtom {
    std::vector<std::size_t> vars;  // indices into the variable table
    std::vector<char> unary;        // one-variable atoms
    Relation fwd, bwd;              // two-variable atoms
};

class Join {
public:
    Join(const C2RPQ& q, const PropertyGraph& g) : g_(g) {
        auto var = [&](const std::string& v) {
            auto it = std::find(names_.begin(), names_.end(), v);
            if (it != names_.end()) return static_cast<std::size_t>(it - names_.begin());
            names_.push_back(v);
            return names_.size() - 1;
        };
        for (const auto& v : q.answer_vars) answer_.push_back(var(v));
        const std::size_t n = g.size();
        for (const auto& a : q.atoms) {
            CompiledAtom c;
            for (const auto& v : a.vars) c.vars.push_back(var(v));
            switch (a.kind) {
            case Atom::Kind::Concept:
                c.unary.assign(n, 0);
                for (std::size_t v = 0; v < n; ++v)
                    for (const auto& l : a.labels)
                        if (l == kTop || g.node(v).labels.count(l)) c.unary[v] = 1;
                break;
            case Atom::Kind::Path:
                c.fwd = eval_relation(a.path, g);
                break;
            case Atom::Kind::Test:
                if (a.vars.size() == 1) {
                    c.unary.assign(n, 0);
                    for (std::size_t v = 0; v < n; ++v) c.unary[v] = holds(a.test, g, v);
                } else {
                    c.fwd.assign(n, {});
                    for (std::size_t u = 0; u < n; ++u)
                        for (std::size_t v = 0; v < n; ++v)
                            if (holds(a.test, g, u, v)) c.fwd[u].push_back(v);
                }
                break;
            }
            if (c.vars.size() == 2) c.bwd = transpose(c.fwd);
            atoms_.push_back(std::move(c));
        }
        binding_.assign(names_.size(), std::nullopt);
        done_.assign(atoms_.size(), false);
    }

    AnswerSet run() {
        solve(0);
        return std::move(answers_);
    }

private:
    bool bound(std::size_t v) const { return binding_[v].has_value(); }

    void solve(std::size_t depth) {
        if (depth == atoms_.size()) {
            emit(0);
            return;
        }
        // Most constrained atom first.
        std::size_t best = atoms_.size();
        int best_score = -1;
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (done_[i]) continue;
            int score = 0;
            for (auto v : atoms_[i].vars) score += bound(v) ? 2 : 0;
            if (atoms_[i].vars.size() == 1) score += 1;
            if (score > best_score) {
                best_score = score;
                best = i;
            }
        }
        const CompiledAtom& a = atoms_[best];
        done_[best] = true;
        const std::size_t n = g_.size();
        if (a.vars.size() == 1) {
            std::size_t x = a.vars[0];
            if (bound(x)) {
                if (a.unary[*binding_[x]]) solve(depth + 1);
            } else {
                for (std::size_t v = 0; v < n; ++v)
                    if (a.unary[v]) with(x, v, [&] { solve(depth + 1); });
            }
        } else {
            std::size_t x = a.vars[0], y = a.vars[1];
            if (x == y) {
                auto loop = [&](std::size_t v) {
                    return std::binary_search(a.fwd[v].begin(), a.fwd[v].end(), v);
                };
                if (bound(x)) {
                    if (loop(*binding_[x])) solve(depth + 1);
                } else {
                    for (std::size_t v = 0; v < n; ++v)
                        if (loop(v)) with(x, v, [&] { solve(depth + 1); });
                }
            } else if (bound(x) && bound(y)) {
                const auto& s = a.fwd[*binding_[x]];
                if (std::binary_search(s.begin(), s.end(), *binding_[y])) solve(depth + 1);
            } else if (bound(x)) {
                for (auto v : a.fwd[*binding_[x]]) with(y, v, [&] { solve(depth + 1); });
            } else if (bound(y)) {
                for (auto u : a.bwd[*binding_[y]]) with(x, u, [&] { solve(depth + 1); });
            } else {
                for (std::size_t u = 0; u < n; ++u)
                    for (auto v : a.fwd[u])
                        with(x, u, [&] { with(y, v, [&] { solve(depth + 1); }); });
            }
        }
        done_[best] = false;
    }

    // Answer variables that occur in no atom range over all nodes.
    void emit(std::size_t i) {
        if (i == answer_.size()) {
            std::vector<std::string> tuple;
            for (auto v : answer_) tuple.push_back(g_.node(*binding_[v]).id);
            answers_.insert(std::move(tuple));
            return;
        }
        std::size_t v = answer_[i];
        if (bound(v)) {
            emit(i + 1);
            return;
        }
        for (std::size_t u = 0; u < g_.size(); ++u) with(v, u, [&] { emit(i + 1); });
    }

    template <typename F>
    void with(std::size_t var, std::size_t value, F&& f) {
        binding_[var] = value;
        f();
        binding_[var].reset();
    }

    const PropertyGraph& g_;
    std::vector<std::string> names_;
    std::vector<std::size_t> answer_;
    std::vector<CompiledAtom> atoms_;
    std::vector<std::optional<std::size_t>> binding_;
    std::vector<bool> done_;
    AnswerSet answers_;
};

}  // namespace

AnswerSet eval_query(const C2RPQ& q, const PropertyGraph& g) { return Join(q, g).run(); }

AnswerSet eval_query(const UC2RPQ& q, const PropertyGraph& g) {
    AnswerSet out;
    for (const auto& member : q.members) {
        AnswerSet part = eval_query(member, g);
        out.insert(part.begin(), part.end());
    }
    return out;
}

}  // namespace navrw
