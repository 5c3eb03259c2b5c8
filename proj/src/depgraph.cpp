#include "navrw/depgraph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

namespace navrw {

bool DependencyGraph::has_node(const std::string& name) const {
    return std::find(nodes.begin(), nodes.end(), name) != nodes.end();
}

std::string DependencyGraph::dump() const {
    std::string out;
    for (const auto& e : eps_edges) out += "eps " + e.target + " <- " + e.source + "\n";
    for (const auto& e : role_edges) out += "role " + e.target + " <-[" + e.role.str() + "] " + e.source + "\n";
    for (const auto& e : conj_edges) {
        out += "conj " + e.target + " <- {";
        for (std::size_t i = 0; i < e.sources.size(); ++i) out += (i ? "," : "") + e.sources[i];
        out += "}\n";
    }
    return out;
}

DependencyGraph build_dependency_graph(const TBox& normalized) {
    DependencyGraph g;
    g.nodes.push_back(std::string(kTop));
    for (const auto& n : normalized.concept_names()) g.nodes.push_back(n);
    for (const auto& ax : normalized.normalized) {
        switch (ax.kind) {
        case NfKind::Atomic:
            g.eps_edges.push_back({ax.rhs, ax.lhs.front()});
            break;
        case NfKind::Conj:
            g.conj_edges.push_back({ax.rhs, ax.lhs});
            break;
        case NfKind::ExLeft:
            g.role_edges.push_back({ax.rhs, ax.role, ax.lhs.front()});
            break;
        case NfKind::Role:
            g.role_inclusions.push_back(ax);
            break;
        case NfKind::ExRight:
            break;
        }
    }
    return g;
}

DependencyGraph saturate(const TBox& normalized, const Reasoner& reasoner, std::size_t max_subsets,
                         std::vector<std::string>* diagnostics) {
    DependencyGraph base = build_dependency_graph(normalized);
    DependencyGraph g;
    g.nodes = base.nodes;
    g.role_edges = base.role_edges;
    g.role_inclusions = base.role_inclusions;

    const NameSet universal = reasoner.closure({});
    for (const auto& b : g.nodes) {
        NameSet c = b == kTop ? universal : reasoner.closure({b});
        for (const auto& a : g.nodes) {
            if (a == b || a == kTop || !c.count(a)) continue;
            if (b != kTop && universal.count(a)) continue;
            g.eps_edges.push_back({a, b});
        }
    }

    // Names that can take part in a conjunctive entailment.
    std::set<std::string> capable_set;
    for (const auto& ax : normalized.normalized) {
        if (ax.kind == NfKind::Conj || ax.kind == NfKind::ExRight || ax.kind == NfKind::ExLeft)
            for (const auto& n : ax.lhs)
                if (n != kTop) capable_set.insert(n);
    }
    std::vector<std::string> capable(capable_set.begin(), capable_set.end());

    std::size_t checked = 0;
    bool truncated = false;
    std::vector<std::size_t> pick;
    for (std::size_t k = 2; k <= capable.size() && !truncated; ++k) {
        pick.resize(k);
        for (std::size_t i = 0; i < k; ++i) pick[i] = i;
        while (true) {
            if (++checked > max_subsets) {
                truncated = true;
                break;
            }
            NameSet s;
            for (auto i : pick) s.insert(capable[i]);
            NameSet c = reasoner.closure(s);
            std::vector<std::string> fresh;
            for (const auto& a : c)
                if (a != kTop && !s.count(a) && !universal.count(a)) fresh.push_back(a);
            if (!fresh.empty()) {
                std::vector<NameSet> smaller;
                for (const auto& drop : s) {
                    NameSet t = s;
                    t.erase(drop);
                    smaller.push_back(reasoner.closure(t));
                }
                for (const auto& a : fresh) {
                    bool minimal = std::none_of(smaller.begin(), smaller.end(),
                                                [&](const NameSet& t) { return t.count(a) > 0; });
                    if (minimal) g.conj_edges.push_back({a, std::vector<std::string>(s.begin(), s.end())});
                }
            }
            // next k-combination in lexicographic order
            std::size_t i = k;
            while (i > 0 && pick[i - 1] == capable.size() - k + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    if (truncated && diagnostics)
        diagnostics->push_back("conjunction saturation stopped after " + std::to_string(max_subsets) +
                               " name sets; rewriting may be incomplete");
    std::sort(g.conj_edges.begin(), g.conj_edges.end(), [](const ConjEdge& a, const ConjEdge& b) {
        return std::tie(a.target, a.sources) < std::tie(b.target, b.sources);
    });
    return g;
}

std::vector<WitnessSet> witness(const std::string& a, const DependencyGraph& g, std::size_t cap,
                                std::vector<std::string>* diagnostics) {
    if (!g.has_node(a)) return {{a}};
    auto normal = [](std::set<std::string> s) {
        if (s.size() > 1) s.erase(std::string(kTop));
        if (s.empty()) s.insert(std::string(kTop));
        return WitnessSet(s.begin(), s.end());
    };
    std::set<WitnessSet> seen{{a}};
    std::deque<WitnessSet> queue{{a}};
    bool truncated = false;
    while (!queue.empty()) {
        WitnessSet s = queue.front();
        queue.pop_front();
        auto push = [&](std::set<std::string> next) {
            WitnessSet w = normal(std::move(next));
            if (seen.count(w)) return;
            if (seen.size() >= cap) {
                truncated = true;
                return;
            }
            seen.insert(w);
            queue.push_back(std::move(w));
        };
        for (const auto& m : s) {
            std::set<std::string> rest(s.begin(), s.end());
            rest.erase(m);
            for (const auto& e : g.eps_edges) {
                if (e.target != m) continue;
                auto next = rest;
                next.insert(e.source);
                push(std::move(next));
            }
            for (const auto& e : g.conj_edges) {
                if (e.target != m) continue;
                auto next = rest;
                next.insert(e.sources.begin(), e.sources.end());
                push(std::move(next));
            }
        }
    }
    if (truncated && diagnostics)
        diagnostics->push_back("witness search for " + a + " stopped after " + std::to_string(cap) + " sets");

    std::vector<WitnessSet> out;
    for (const auto& s : seen) {
        bool has_subset = std::any_of(seen.begin(), seen.end(), [&](const WitnessSet& t) {
            return t != s && std::includes(s.begin(), s.end(), t.begin(), t.end());
        });
        if (!has_subset || s == WitnessSet{a}) out.push_back(s);
    }
    std::sort(out.begin(), out.end(), [](const WitnessSet& x, const WitnessSet& y) {
        return x.size() != y.size() ? x.size() < y.size() : x < y;
    });
    return out;
}

std::optional<PathExpression> eliminate_states(std::size_t n_states, const std::vector<Transition>& transitions,
                                               std::size_t start,
                                               const std::vector<std::optional<PathExpression>>& accept) {
    // Keep only states on some accepting run.
    std::vector<std::vector<std::size_t>> fwd(n_states), bwd(n_states);
    for (const auto& t : transitions) {
        fwd[t.from].push_back(t.to);
        bwd[t.to].push_back(t.from);
    }
    auto sweep = [&](std::vector<std::size_t> roots, const std::vector<std::vector<std::size_t>>& adj) {
        std::vector<bool> mark(n_states, false);
        for (auto r : roots) mark[r] = true;
        while (!roots.empty()) {
            std::size_t v = roots.back();
            roots.pop_back();
            for (auto w : adj[v])
                if (!mark[w]) {
                    mark[w] = true;
                    roots.push_back(w);
                }
        }
        return mark;
    };
    std::vector<std::size_t> finals;
    for (std::size_t i = 0; i < n_states; ++i)
        if (accept[i]) finals.push_back(i);
    auto reach = sweep({start}, fwd);
    auto coreach = sweep(finals, bwd);
    if (!coreach[start]) return std::nullopt;
    std::vector<bool> live(n_states);
    for (std::size_t i = 0; i < n_states; ++i) live[i] = reach[i] && coreach[i];

    const std::size_t S = n_states, F = n_states + 1, n = n_states + 2;
    std::vector<std::vector<std::optional<PathExpression>>> R(n, std::vector<std::optional<PathExpression>>(n));
    auto add = [&](std::size_t i, std::size_t j, PathExpression e) {
        R[i][j] = canonical(R[i][j] ? PathExpression::alt(std::move(*R[i][j]), std::move(e)) : std::move(e));
    };
    for (const auto& t : transitions)
        if (live[t.from] && live[t.to]) add(t.from, t.to, t.label);
    add(S, start, PathExpression::epsilon());
    for (std::size_t i = 0; i < n_states; ++i)
        if (live[i] && accept[i]) add(i, F, *accept[i]);

    for (std::size_t k = 0; k < n_states; ++k) {
        if (!live[k]) continue;
        std::optional<PathExpression> loop = R[k][k];
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || !R[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == k || !R[k][j]) continue;
                std::vector<PathExpression> parts{*R[i][k]};
                if (loop) parts.push_back(PathExpression::star(*loop));
                parts.push_back(*R[k][j]);
                add(i, j, PathExpression::concat(std::move(parts)));
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            R[i][k].reset();
            R[k][i].reset();
        }
    }
    return R[S][F];
}

namespace {

// Names that reach `c` through eps edges, including c.
std::set<std::string> eps_closure(const std::string& c, const DependencyGraph& g) {
    std::set<std::string> out{c};
    std::vector<std::string> stack{c};
    while (!stack.empty()) {
        std::string m = stack.back();
        stack.pop_back();
        for (const auto& e : g.eps_edges)
            if (e.target == m && out.insert(e.source).second) stack.push_back(e.source);
    }
    return out;
}

}  // namespace

PathExpression rewr_concept(const std::string& b, const DependencyGraph& g) {
    if (!g.has_node(b)) return PathExpression::node_test({b});
    std::vector<std::string> names = g.nodes;
    std::sort(names.begin(), names.end());
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = i;

    std::vector<std::optional<PathExpression>> accept(names.size());
    std::vector<Transition> transitions;
    for (std::size_t i = 0; i < names.size(); ++i) {
        auto closure = eps_closure(names[i], g);
        accept[i] = closure.count(std::string(kTop))
                        ? PathExpression::epsilon()
                        : PathExpression::node_test(std::vector<std::string>(closure.begin(), closure.end()));
        for (const auto& e : g.role_edges)
            if (closure.count(e.target))
                transitions.push_back(
                    {i, index.at(e.source), rewrite_role(e.role, g)});
    }
    auto path = eliminate_states(names.size(), transitions, index.at(b), accept);
    return path ? canonical(*path) : PathExpression::node_test({b});
}

PathExpression rewrite_role(const Role& r, const TBox& normalized) {
    TBox roles;
    for (const auto& ax : normalized.normalized)
        if (ax.kind == NfKind::Role) roles.normalized.push_back(ax);
    roles.is_normalized = true;
    Reasoner reasoner(roles);
    std::vector<PathExpression> branches;
    for (const auto& p : reasoner.subroles(r)) branches.push_back(PathExpression::edge(p));
    return canonical(PathExpression::alt(std::move(branches)));
}

PathExpression rewrite_role(const Role& r, const DependencyGraph& g) {
    if (g.role_inclusions.empty()) return PathExpression::edge(r);
    return rewrite_role(r, from_normalized(g.role_inclusions));
}

}  // namespace navrw
