#include "navrw/rewriter.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "navrw/errors.hpp"

namespace navrw {

namespace {

// Calls f on every k-subset (as sorted index vector) of {0..n-1}, for k = lo..hi,
// smaller sets first. Stops early when f returns false.
void for_each_subset(std::size_t n, std::size_t lo, std::size_t hi,
                     const std::function<bool(const std::vector<std::size_t>&)>& f) {
    for (std::size_t k = lo; k <= hi && k <= n; ++k) {
        std::vector<std::size_t> pick(k);
        for (std::size_t i = 0; i < k; ++i) pick[i] = i;
        while (true) {
            if (!f(pick)) return;
            std::size_t i = k;
            while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
}

std::string pattern_var(std::size_t i) { return "#" + std::to_string(i); }

bool is_top_atom(const Atom& a) {
    return a.kind == Atom::Kind::Concept && a.labels.size() == 1 && a.labels.front() == kTop;
}

}  // namespace

Rewriter::Rewriter(const TBox& normalized, RewriteOptions options) : tbox_(normalized), options_(options) {
    if (!tbox_.is_normalized) tbox_ = normalize(tbox_);
    if (options_.max_queries == 0 || options_.max_clip_attempts == 0 || options_.witness_cap == 0)
        throw Error("rewriting budgets must be positive");
    reasoner_ = std::make_unique<Reasoner>(tbox_);
    graph_ = saturate(tbox_, *reasoner_, 65536, &diagnostics_);
}

std::vector<C2RPQ> Rewriter::clipping(const C2RPQ& q, const NormalizedAxiom& ex_right,
                                      const std::vector<std::string>& y) const {
    if (ex_right.kind != NfKind::ExRight) throw Error("clipping needs an existential axiom, got '" + ex_right.str() + "'");
    std::set<std::string> ys(y.begin(), y.end());
    if (ys.empty()) return {};
    for (const auto& v : q.answer_vars)
        if (ys.count(v)) return {};

    const Role& p = ex_right.role;
    std::vector<std::string> attach;
    std::vector<std::vector<std::string>> constraints;
    for (const auto& a : q.atoms) {
        bool touches = std::any_of(a.vars.begin(), a.vars.end(), [&](const std::string& v) { return ys.count(v) > 0; });
        if (!touches) continue;
        switch (a.kind) {
        case Atom::Kind::Test:
            return {};
        case Atom::Kind::Concept:
            constraints.push_back(a.labels);
            break;
        case Atom::Kind::Path: {
            if (a.path.kind != PathExpression::Kind::Edge) return {};
            bool src_in = ys.count(a.vars[0]) > 0, dst_in = ys.count(a.vars[1]) > 0;
            if (src_in && dst_in) return {};
            // Role of the atom read from the outside variable towards Y.
            Role towards = src_in ? a.path.role.inverse() : a.path.role;
            if (!reasoner_->role_subsumed(p, towards)) return {};
            const std::string& z = src_in ? a.vars[1] : a.vars[0];
            if (std::find(attach.begin(), attach.end(), z) == attach.end()) attach.push_back(z);
            break;
        }
        }
    }

    // All attachment points stand for the single parent of the new element.
    std::string parent;
    for (const auto& v : q.answer_vars)
        if (parent.empty() && std::find(attach.begin(), attach.end(), v) != attach.end()) parent = v;
    if (parent.empty() && !attach.empty()) parent = *std::min_element(attach.begin(), attach.end());
    if (parent.empty()) {
        auto used = q.variables();
        for (std::size_t i = 0; parent.empty(); ++i) {
            std::string candidate = "__z" + std::to_string(i);
            if (std::find(used.begin(), used.end(), candidate) == used.end()) parent = candidate;
        }
    }

    const std::vector<std::string> fillers = reasoner_->inherited_fillers(p);
    std::vector<std::vector<std::string>> choices;
    for_each_subset(fillers.size(), 0, fillers.size(), [&](const std::vector<std::size_t>& pick) {
        std::vector<std::string> extra;
        for (auto i : pick) extra.push_back(fillers[i]);
        for (const auto& c : choices)
            if (std::includes(extra.begin(), extra.end(), c.begin(), c.end())) return true;
        NameSet parent_labels(extra.begin(), extra.end());
        parent_labels.insert(ex_right.lhs.front());
        NameSet child = reasoner_->child_type(parent_labels, ex_right);
        bool ok = std::all_of(constraints.begin(), constraints.end(), [&](const std::vector<std::string>& u) {
            return std::any_of(u.begin(), u.end(), [&](const std::string& l) { return child.count(l) > 0; });
        });
        if (ok) choices.push_back(std::move(extra));
        return true;
    });

    std::vector<C2RPQ> out;
    for (const auto& extra : choices) {
        C2RPQ r;
        r.head = q.head;
        auto rename = [&](const std::string& v) {
            return std::find(attach.begin(), attach.end(), v) != attach.end() ? parent : v;
        };
        for (const auto& v : q.answer_vars) r.answer_vars.push_back(rename(v));
        for (const auto& a : q.atoms) {
            if (std::any_of(a.vars.begin(), a.vars.end(), [&](const std::string& v) { return ys.count(v) > 0; }))
                continue;
            Atom b = a;
            for (auto& v : b.vars) v = rename(v);
            r.atoms.push_back(std::move(b));
        }
        r.atoms.push_back(Atom::concept_atom({ex_right.lhs.front()}, parent));
        for (const auto& e : extra) r.atoms.push_back(Atom::concept_atom({e}, parent));
        out.push_back(std::move(r));
    }
    return out;
}

bool Rewriter::is_local(const std::string& name) const {
    std::set<std::string> seen{name};
    std::vector<std::string> stack{name};
    while (!stack.empty()) {
        std::string m = stack.back();
        stack.pop_back();
        for (const auto& e : graph_.role_edges)
            if (e.target == m) return false;
        for (const auto& e : graph_.eps_edges)
            if (e.target == m && seen.insert(e.source).second) stack.push_back(e.source);
        for (const auto& e : graph_.conj_edges)
            if (e.target == m)
                for (const auto& s : e.sources)
                    if (seen.insert(s).second) stack.push_back(s);
    }
    return true;
}

PathExpression Rewriter::local_expression(const std::string& name) {
    std::vector<PathExpression> branches;
    for (const auto& w : witness(name, graph_, options_.witness_cap, &diagnostics_)) {
        std::vector<PathExpression> tests;
        for (const auto& n : w) tests.push_back(PathExpression::node_test({n}));
        branches.push_back(PathExpression::concat(std::move(tests)));
    }
    return canonical(PathExpression::alt(std::move(branches)));
}

const std::vector<TreePattern>& Rewriter::concept_patterns(const std::string& a) {
    auto it = patterns_.find(a);
    if (it != patterns_.end()) return it->second;
    if (std::find(in_progress_.begin(), in_progress_.end(), a) != in_progress_.end())
        throw FragmentViolation("derivations of '" + a +
                                "' recurse through a conjunction of navigational conditions; no finite "
                                "union of regular path queries expresses them");
    in_progress_.push_back(a);
    try {
        compute_patterns(a);
    } catch (...) {
        in_progress_.clear();
        throw;
    }
    in_progress_.pop_back();
    return patterns_.at(a);
}

void Rewriter::compute_patterns(const std::string& a) {
    std::vector<TreePattern> out;
    if (a == kTop) {
        out.push_back(TreePattern{});
        patterns_[a] = std::move(out);
        return;
    }
    if (!graph_.has_node(a)) {
        out.push_back(TreePattern{{Atom::concept_atom({a}, pattern_var(0))}, 1});
        patterns_[a] = std::move(out);
        return;
    }

    std::vector<std::string> names = graph_.nodes;
    std::sort(names.begin(), names.end());
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = i;
    auto local = [&](const std::string& n) {
        auto it = local_.find(n);
        if (it == local_.end()) it = local_.emplace(n, is_local(n)).first;
        return it->second;
    };

    std::vector<std::optional<PathExpression>> accept(names.size());
    std::vector<Transition> transitions;
    std::vector<std::pair<std::size_t, const ConjEdge*>> branching;
    for (std::size_t i = 0; i < names.size(); ++i)
        accept[i] = names[i] == kTop ? PathExpression::epsilon() : PathExpression::node_test({names[i]});
    for (const auto& e : graph_.eps_edges)
        transitions.push_back({index.at(e.target), index.at(e.source), PathExpression::epsilon()});
    for (const auto& e : graph_.role_edges)
        transitions.push_back({index.at(e.target), index.at(e.source), PathExpression::edge(e.role)});
    for (const auto& e : graph_.conj_edges) {
        std::size_t c = index.at(e.target);
        std::vector<std::string> open;
        std::vector<PathExpression> checks;
        for (const auto& s : e.sources) {
            if (local(s))
                checks.push_back(local_expression(s));
            else
                open.push_back(s);
        }
        if (open.empty()) {
            accept[c] = canonical(PathExpression::alt(*accept[c], PathExpression::concat(std::move(checks))));
        } else if (open.size() == 1) {
            transitions.push_back({c, index.at(open.front()), canonical(PathExpression::concat(std::move(checks)))});
        } else {
            branching.push_back({c, &e});
        }
    }

    auto add_path = [](TreePattern& t, const PathExpression& path) -> std::string {
        // Returns the variable where the path ends.
        if (path.is_epsilon()) return pattern_var(0);
        if (path.kind == PathExpression::Kind::NodeTest) {
            t.atoms.push_back(Atom::concept_atom(path.labels, pattern_var(0)));
            return pattern_var(0);
        }
        std::string end = pattern_var(t.n_vars++);
        t.atoms.push_back(Atom::path_atom(path, pattern_var(0), end));
        return end;
    };

    if (auto main = eliminate_states(names.size(), transitions, index.at(a), accept)) {
        TreePattern t;
        add_path(t, *main);
        out.push_back(std::move(t));
    }

    for (const auto& [c, edge] : branching) {
        std::vector<std::optional<PathExpression>> only(names.size());
        only[c] = PathExpression::epsilon();
        auto path = eliminate_states(names.size(), transitions, index.at(a), only);
        if (!path) continue;
        std::vector<const std::vector<TreePattern>*> parts;
        for (const auto& s : edge->sources) parts.push_back(&concept_patterns(s));

        std::vector<std::size_t> pick(parts.size(), 0);
        while (true) {
            TreePattern t;
            std::string at = add_path(t, *path);
            for (std::size_t k = 0; k < parts.size(); ++k) {
                const TreePattern& sub = (*parts[k])[pick[k]];
                std::size_t offset = t.n_vars - 1;
                for (Atom atom : sub.atoms) {
                    for (auto& v : atom.vars) {
                        std::size_t i = std::stoul(v.substr(1));
                        v = i == 0 ? at : pattern_var(i + offset);
                    }
                    t.atoms.push_back(std::move(atom));
                }
                t.n_vars += sub.n_vars - 1;
            }
            out.push_back(std::move(t));
            if (out.size() > options_.max_queries)
                throw BudgetExceeded("more than " + std::to_string(options_.max_queries) + " derivation patterns for '" +
                                     a + "'");
            std::size_t k = 0;
            while (k < parts.size() && ++pick[k] == parts[k]->size()) pick[k++] = 0;
            if (k == parts.size()) break;
        }
    }
    patterns_[a] = std::move(out);
}

C2RPQ Rewriter::finish(C2RPQ q) const {
    std::map<std::string, std::optional<PathExpression>> roles;
    q = substitute_roles(q, [&](const Role& r) -> std::optional<PathExpression> {
        auto it = roles.find(r.name);
        if (it == roles.end()) {
            std::optional<PathExpression> e;
            auto subs = reasoner_->subroles(r);
            if (subs.size() > 1) {
                std::vector<PathExpression> branches;
                for (const auto& s : subs) branches.push_back(PathExpression::edge(s));
                e = canonical(PathExpression::alt(std::move(branches)));
            }
            it = roles.emplace(r.name, std::move(e)).first;
        }
        return it->second;
    });
    q = canonicalize(q);
    // Number invented variables by first occurrence.
    std::map<std::string, std::string> names;
    auto visit = [&](std::string& v) {
        if (v.rfind("__", 0) != 0) return;
        auto it = names.find(v);
        if (it == names.end()) it = names.emplace(v, "__w" + std::to_string(names.size())).first;
        v = it->second;
    };
    for (auto& a : q.atoms)
        for (auto& v : a.vars) visit(v);
    for (auto& v : q.answer_vars) visit(v);
    return canonicalize(q);
}

RewriteResult Rewriter::rewrite(const C2RPQ& input) {
    RewriteResult result;
    result.queries = RewritingSet(input.answer_vars.size());

    // Clipping saturation.
    std::map<std::string, C2RPQ> saturated;
    std::deque<C2RPQ> work;
    C2RPQ start = canonicalize(input);
    saturated.emplace(canonical_key(start), start);
    work.push_back(start);
    const auto& ex_rights = reasoner_->ex_right_axioms();
    while (!work.empty()) {
        C2RPQ cur = std::move(work.front());
        work.pop_front();
        std::vector<std::string> vars;
        for (const auto& v : cur.variables())
            if (std::find(cur.answer_vars.begin(), cur.answer_vars.end(), v) == cur.answer_vars.end())
                vars.push_back(v);
        for (const auto& ax : ex_rights) {
            for_each_subset(vars.size(), 1, vars.size(), [&](const std::vector<std::size_t>& pick) {
                if (++result.clip_attempts > options_.max_clip_attempts)
                    throw BudgetExceeded("more than " + std::to_string(options_.max_clip_attempts) +
                                         " clipping attempts");
                std::vector<std::string> y;
                for (auto i : pick) y.push_back(vars[i]);
                for (auto& r : clipping(cur, ax, y)) {
                    C2RPQ c = canonicalize(r);
                    std::string key = canonical_key(c);
                    if (saturated.count(key)) continue;
                    if (saturated.size() >= options_.max_queries)
                        throw BudgetExceeded("more than " + std::to_string(options_.max_queries) +
                                             " queries during clipping");
                    saturated.emplace(key, c);
                    work.push_back(std::move(c));
                }
                return true;
            });
        }
    }
    result.saturated_queries = saturated.size();

    // Concept rewriting and role substitution.
    std::size_t emitted = 0;
    for (const auto& [_, q] : saturated) {
        std::vector<Atom> fixed;
        std::vector<const Atom*> concepts;
        for (const auto& a : q.atoms) {
            if (a.kind == Atom::Kind::Concept) {
                if (!is_top_atom(a)) concepts.push_back(&a);
            } else {
                fixed.push_back(a);
            }
        }
        std::vector<std::vector<const TreePattern*>> options;
        for (const Atom* c : concepts) {
            std::vector<const TreePattern*> alts;
            for (const auto& l : c->labels)
                for (const auto& t : concept_patterns(l)) alts.push_back(&t);
            options.push_back(std::move(alts));
        }
        if (std::any_of(options.begin(), options.end(), [](const auto& o) { return o.empty(); })) continue;

        std::vector<std::size_t> pick(options.size(), 0);
        while (true) {
            C2RPQ r;
            r.head = q.head;
            r.answer_vars = q.answer_vars;
            r.atoms = fixed;
            std::size_t fresh = 0;
            for (std::size_t k = 0; k < options.size(); ++k) {
                const TreePattern& t = *options[k][pick[k]];
                const std::string& root = concepts[k]->vars.front();
                std::vector<std::string> names(t.n_vars);
                names[0] = root;
                for (std::size_t i = 1; i < t.n_vars; ++i) names[i] = "__t" + std::to_string(fresh++);
                for (Atom atom : t.atoms) {
                    for (auto& v : atom.vars) v = names[std::stoul(v.substr(1))];
                    r.atoms.push_back(std::move(atom));
                }
                // Keep the root variable visible if its pattern is trivially true.
                if (t.atoms.empty()) r.atoms.push_back(Atom::concept_atom({std::string(kTop)}, root));
            }
            C2RPQ done = finish(std::move(r));
            result.queries = options_.prune ? add_subseteq(result.queries, done) : add_unpruned(result.queries, done);
            if (result.queries.size() > options_.max_queries)
                throw BudgetExceeded("more than " + std::to_string(options_.max_queries) + " queries in the rewriting");
            if (++emitted > 100 * options_.max_queries)
                throw BudgetExceeded("too many candidate queries while rewriting concept atoms");

            std::size_t k = 0;
            while (k < options.size() && ++pick[k] == options[k].size()) pick[k++] = 0;
            if (k == options.size()) break;
        }
    }
    result.diagnostics = diagnostics_;
    return result;
}

RewriteResult rewrite_ncq(const C2RPQ& q, const TBox& normalized, const RewriteOptions& options) {
    Rewriter rewriter(normalized, options);
    return rewriter.rewrite(q);
}

RewriteResult rewrite_atomic(const std::string& a, const TBox& normalized, const RewriteOptions& options) {
    C2RPQ q;
    q.answer_vars = {"x"};
    q.atoms.push_back(Atom::concept_atom({a}, "x"));
    return rewrite_ncq(q, normalized, options);
}

std::vector<C2RPQ> clipping(const C2RPQ& q, const NormalizedAxiom& ex_right, const std::vector<std::string>& y,
                            const TBox& normalized) {
    Rewriter rewriter(normalized);
    return rewriter.clipping(q, ex_right, y);
}

}  // namespace navrw
