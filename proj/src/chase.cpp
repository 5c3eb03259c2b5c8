#include "navrw/chase.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace navrw {

namespace {

// Every role implied by r, computed from the inclusions alone.
std::map<Role, std::vector<Role>> super_roles(const TBox& t) {
    std::vector<std::pair<Role, Role>> inclusions;
    std::set<std::string> names;
    for (const auto& ax : t.normalized) {
        if (ax.kind == NfKind::Role) {
            inclusions.push_back({ax.role, ax.sup_role});
            names.insert(ax.role.name);
            names.insert(ax.sup_role.name);
        }
    }
    std::map<Role, std::vector<Role>> out;
    for (const auto& n : names) {
        for (bool inv : {false, true}) {
            Role start{n, inv};
            std::set<Role> seen{start};
            std::vector<Role> stack{start};
            while (!stack.empty()) {
                Role r = stack.back();
                stack.pop_back();
                for (const auto& [sub, sup] : inclusions) {
                    Role next;
                    if (sub == r)
                        next = sup;
                    else if (sub.inverse() == r)
                        next = sup.inverse();
                    else
                        continue;
                    if (seen.insert(next).second) stack.push_back(next);
                }
            }
            out[start] = std::vector<Role>(seen.begin(), seen.end());
        }
    }
    return out;
}

class Chase {
public:
    Chase(const PropertyGraph& g, const TBox& t, std::size_t depth)
        : t_(t.is_normalized ? t : normalize(t)), depth_(depth), supers_(super_roles(t_)) {
        result_.graph = g;
        result_.depth = depth;
        result_.generation.assign(g.size(), 0);
    }

    ChasedGraph run() {
        close_edges();
        do {
            close_labels();
        } while (generate());
        return std::move(result_);
    }

private:
    PropertyGraph& g() { return result_.graph; }

    void add_role_edge(std::size_t from, const Role& r, std::size_t to) {
        std::size_t s = r.inverted ? to : from, d = r.inverted ? from : to;
        if (!g().has_edge(s, r.name, d)) g().add_edge(s, r.name, d);
    }

    void close_edges() {
        for (; edges_done_ < g().edges().size(); ++edges_done_) {
            Edge e = g().edges()[edges_done_];
            auto it = supers_.find(Role{e.label, false});
            if (it == supers_.end()) continue;
            for (const auto& s : it->second) add_role_edge(e.src, s, e.dst);
        }
    }

    bool has(std::size_t v, const std::string& label) {
        return label == kTop || g().node(v).labels.count(label) > 0;
    }

    bool add(std::size_t v, const std::string& label) {
        if (label == kTop) return false;
        return g().add_label(v, label);
    }

    // Nodes reachable from v over one r-step.
    std::vector<std::size_t> successors(std::size_t v, const Role& r) {
        std::vector<std::size_t> out;
        if (r.inverted) {
            for (auto i : g().in_edges(v))
                if (g().edges()[i].label == r.name) out.push_back(g().edges()[i].src);
        } else {
            for (auto i : g().out_edges(v))
                if (g().edges()[i].label == r.name) out.push_back(g().edges()[i].dst);
        }
        return out;
    }

    void close_labels() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t v = 0; v < g().size(); ++v) {
                for (const auto& ax : t_.normalized) {
                    switch (ax.kind) {
                    case NfKind::Atomic:
                    case NfKind::Conj:
                        if (std::all_of(ax.lhs.begin(), ax.lhs.end(), [&](const std::string& b) { return has(v, b); }))
                            changed |= add(v, ax.rhs);
                        break;
                    case NfKind::ExLeft:
                        if (has(v, ax.rhs)) break;
                        for (auto w : successors(v, ax.role))
                            if (has(w, ax.lhs.front())) {
                                changed |= add(v, ax.rhs);
                                break;
                            }
                        break;
                    default:
                        break;
                    }
                }
            }
        }
    }

    bool generate() {
        bool created = false;
        const std::size_t n = g().size();
        for (std::size_t v = 0; v < n; ++v) {
            if (result_.generation[v] >= depth_) continue;
            for (std::size_t k = 0; k < t_.normalized.size(); ++k) {
                const auto& ax = t_.normalized[k];
                if (ax.kind != NfKind::ExRight || !has(v, ax.lhs.front())) continue;
                auto succ = successors(v, ax.role);
                if (std::any_of(succ.begin(), succ.end(), [&](std::size_t w) { return has(w, ax.rhs); })) continue;
                std::string parent = g().node(v).id;
                if (parent.rfind(kAnonymousPrefix, 0) == 0) parent = parent.substr(kAnonymousPrefix.size());
                std::string id = std::string(kAnonymousPrefix) + parent + "/" + std::to_string(k);
                if (g().find(id)) continue;
                std::set<std::string> labels;
                if (ax.rhs != kTop) labels.insert(ax.rhs);
                std::size_t child = g().add_node(id, std::move(labels));
                result_.generation.push_back(result_.generation[v] + 1);
                add_role_edge(v, ax.role, child);
                close_edges();
                created = true;
            }
        }
        return created;
    }

    TBox t_;
    std::size_t depth_;
    std::map<Role, std::vector<Role>> supers_;
    ChasedGraph result_;
    std::size_t edges_done_ = 0;
};

}  // namespace

ChasedGraph chase(const PropertyGraph& g, const TBox& t, std::size_t depth) { return Chase(g, t, depth).run(); }

AnswerSet certain_answers(const C2RPQ& q, const PropertyGraph& g, const TBox& t, std::size_t depth) {
    ChasedGraph c = chase(g, t, depth);
    AnswerSet out;
    for (auto& tuple : eval_query(q, c.graph)) {
        bool named = std::none_of(tuple.begin(), tuple.end(), [](const std::string& id) {
            return id.rfind(kAnonymousPrefix, 0) == 0;
        });
        if (named) out.insert(tuple);
    }
    return out;
}

}  // namespace navrw
