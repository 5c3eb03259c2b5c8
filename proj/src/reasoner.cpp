#include "navrw/reasoner.hpp"

#include <algorithm>

#include "navrw/errors.hpp"

namespace navrw {

Reasoner::Reasoner(const TBox& normalized) {
    if (!normalized.is_normalized) throw Error("Reasoner requires a normalized TBox");

    names_.push_back(std::string(kTop));
    name_ids_[std::string(kTop)] = 0;
    for (const auto& n : normalized.concept_names()) {
        name_ids_[n] = names_.size();
        names_.push_back(n);
        public_names_.push_back(n);
    }
    words_ = (names_.size() + 63) / 64;

    for (const auto& r : normalized.role_names()) {
        role_ids_[r] = role_names_.size();
        role_names_.push_back(r);
    }
    const std::size_t n_roles = 2 * role_names_.size();
    role_leq_.assign(n_roles, std::vector<bool>(n_roles, false));
    for (std::size_t i = 0; i < n_roles; ++i) role_leq_[i][i] = true;
    for (const auto& ax : normalized.normalized) {
        if (ax.kind != NfKind::Role) continue;
        role_leq_[role_index(ax.role)][role_index(ax.sup_role)] = true;
        role_leq_[role_index(ax.role.inverse())][role_index(ax.sup_role.inverse())] = true;
    }
    for (std::size_t k = 0; k < n_roles; ++k)
        for (std::size_t i = 0; i < n_roles; ++i)
            if (role_leq_[i][k])
                for (std::size_t j = 0; j < n_roles; ++j)
                    if (role_leq_[k][j]) role_leq_[i][j] = true;

    for (const auto& ax : normalized.normalized) {
        switch (ax.kind) {
        case NfKind::Atomic:
            atomic_.push_back({id(ax.lhs.front()), id(ax.rhs)});
            break;
        case NfKind::Conj: {
            ConjRule r;
            for (const auto& b : ax.lhs) r.body.push_back(id(b));
            r.head = id(ax.rhs);
            conj_.push_back(std::move(r));
            break;
        }
        case NfKind::ExLeft:
            ex_left_rules_.push_back({role_index(ax.role), id(ax.lhs.front()), id(ax.rhs)});
            ex_left_.push_back(ax);
            break;
        case NfKind::ExRight:
            ex_right_rules_.push_back({role_index(ax.role), id(ax.rhs), id(ax.lhs.front())});
            ex_right_.push_back(ax);
            break;
        case NfKind::Role:
            break;
        }
    }
}

std::size_t Reasoner::id(const std::string& name) const {
    auto it = name_ids_.find(name);
    if (it == name_ids_.end()) throw Error("unknown concept name '" + name + "'");
    return it->second;
}

std::size_t Reasoner::role_index(const Role& r) const {
    auto it = role_ids_.find(r.name);
    if (it == role_ids_.end()) return static_cast<std::size_t>(-1);
    return 2 * it->second + (r.inverted ? 1 : 0);
}

bool Reasoner::role_subsumed(const Role& p, const Role& q) const {
    if (p == q) return true;
    std::size_t i = role_index(p), j = role_index(q);
    if (i == static_cast<std::size_t>(-1) || j == static_cast<std::size_t>(-1)) return false;
    return role_leq_[i][j];
}

std::vector<Role> Reasoner::subroles(const Role& q) const {
    std::vector<Role> out{q};
    std::size_t j = role_index(q);
    if (j != static_cast<std::size_t>(-1)) {
        for (std::size_t i = 0; i < role_leq_.size(); ++i) {
            if (i == j || !role_leq_[i][j]) continue;
            out.push_back(Role{role_names_[i / 2], i % 2 == 1});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Reasoner::Bits Reasoner::to_bits(const NameSet& s) const {
    Bits b(words_, 0);
    set(b, 0);
    for (const auto& n : s) {
        auto it = name_ids_.find(n);
        if (it != name_ids_.end()) set(b, it->second);
    }
    return b;
}

NameSet Reasoner::to_names(const Bits& b) const {
    NameSet out;
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (test(b, i)) out.insert(names_[i]);
    return out;
}

Reasoner::Bits Reasoner::local(Bits labels) const {
    set(labels, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& r : atomic_) {
            if (test(labels, r.sub) && !test(labels, r.sup)) {
                set(labels, r.sup);
                changed = true;
            }
        }
        for (const auto& r : conj_) {
            if (test(labels, r.head)) continue;
            if (std::all_of(r.body.begin(), r.body.end(), [&](std::size_t b) { return test(labels, b); })) {
                set(labels, r.head);
                changed = true;
            }
        }
    }
    return labels;
}

Reasoner::Bits Reasoner::child_key(const Bits& parent, std::size_t ex_right_index) const {
    const ExRule& ex = ex_right_rules_[ex_right_index];
    Bits key(words_, 0);
    set(key, 0);
    set(key, ex.filler);
    // The child reaches its parent through the inverse of the creating role.
    std::size_t back = ex.role ^ 1U;
    for (const auto& l : ex_left_rules_)
        if (test(parent, l.filler) && role_leq_[back][l.role]) set(key, l.other);
    return key;
}

void Reasoner::saturate_table() const {
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = table_.begin(); it != table_.end(); ++it) {
            Bits labels = local(it->second);
            for (std::size_t i = 0; i < ex_right_rules_.size(); ++i) {
                const ExRule& ex = ex_right_rules_[i];
                if (!test(labels, ex.other)) continue;
                Bits key = child_key(labels, i);
                auto child = table_.find(key);
                if (child == table_.end()) {
                    child = table_.emplace(key, local(key)).first;
                    changed = true;
                }
                const Bits& child_labels = child->second;
                for (const auto& l : ex_left_rules_)
                    if (test(child_labels, l.filler) && role_leq_[ex.role][l.role]) set(labels, l.other);
                labels = local(std::move(labels));
            }
            if (labels != it->second) {
                it->second = std::move(labels);
                changed = true;
            }
        }
    }
}

const Reasoner::Bits& Reasoner::lookup(const Bits& key) const {
    auto it = table_.find(key);
    if (it == table_.end()) {
        table_.emplace(key, local(key));
        saturate_table();
        it = table_.find(key);
    }
    return it->second;
}

NameSet Reasoner::closure(const NameSet& labels) const {
    Bits key = to_bits(labels);
    std::lock_guard lock(mutex_);
    NameSet out = to_names(lookup(key));
    // Names unknown to the TBox are kept as they are.
    for (const auto& n : labels)
        if (!name_ids_.count(n)) out.insert(n);
    return out;
}

NameSet Reasoner::child_type(const NameSet& parent, const NormalizedAxiom& ex_right) const {
    auto pos = std::find(ex_right_.begin(), ex_right_.end(), ex_right);
    if (pos == ex_right_.end()) throw Error("axiom '" + ex_right.str() + "' is not an existential of this TBox");
    std::size_t index = static_cast<std::size_t>(pos - ex_right_.begin());
    NameSet parent_closure = closure(parent);
    Bits key = child_key(to_bits(parent_closure), index);
    std::lock_guard lock(mutex_);
    return to_names(lookup(key));
}

std::vector<std::string> Reasoner::inherited_fillers(const Role& p) const {
    std::vector<std::string> out;
    std::size_t back = role_index(p.inverse());
    if (back == static_cast<std::size_t>(-1)) return out;
    for (const auto& l : ex_left_rules_) {
        if (l.filler == 0 || !role_leq_[back][l.role]) continue;
        const std::string& n = names_[l.filler];
        if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace navrw
