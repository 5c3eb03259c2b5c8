#pragma once

// Entailment over a normalized TBox: the role hierarchy and the set of concept
// names an element is forced to carry given some initial labels, including
// everything derived through the anonymous elements the TBox requires.

#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "navrw/dl.hpp"

namespace navrw {

using NameSet = std::set<std::string>;

class Reasoner {
public:
    explicit Reasoner(const TBox& normalized);

    Reasoner(const Reasoner&) = delete;
    Reasoner& operator=(const Reasoner&) = delete;

    /// p ⊑* q under the reflexive-transitive closure of the role inclusions,
    /// closed under inversion.
    bool role_subsumed(const Role& p, const Role& q) const;

    /// All roles p with p ⊑* q, sorted; q itself is always included.
    std::vector<Role> subroles(const Role& q) const;

    /// Concept names entailed for an element labeled with all of `labels`.
    /// The result always contains `top`.
    NameSet closure(const NameSet& labels) const;

    /// Labels of the anonymous p-successor created by `ex_right` (A ⊑ ∃p.B)
    /// for a parent whose entailed labels are `parent`.
    NameSet child_type(const NameSet& parent, const NormalizedAxiom& ex_right) const;

    /// Concept names of the TBox (excluding top), in first-occurrence order.
    const std::vector<std::string>& names() const { return public_names_; }

    const std::vector<NormalizedAxiom>& ex_right_axioms() const { return ex_right_; }
    const std::vector<NormalizedAxiom>& ex_left_axioms() const { return ex_left_; }

    /// Names E such that some ∃q.E ⊑ C makes a parent's E visible to the
    /// anonymous child created through role p (p⁻ ⊑* q). Excludes top.
    std::vector<std::string> inherited_fillers(const Role& p) const;

private:
    using Bits = std::vector<std::uint64_t>;

    std::size_t id(const std::string& name) const;
    bool test(const Bits& b, std::size_t i) const { return (b[i / 64] >> (i % 64)) & 1U; }
    void set(Bits& b, std::size_t i) const { b[i / 64] |= std::uint64_t{1} << (i % 64); }
    Bits to_bits(const NameSet& s) const;
    NameSet to_names(const Bits& b) const;

    Bits local(Bits labels) const;
    Bits child_key(const Bits& parent, std::size_t ex_right_index) const;
    void saturate_table() const;
    const Bits& lookup(const Bits& key) const;

    std::size_t role_index(const Role& r) const;

    std::vector<std::string> names_;  // index 0 is top
    std::unordered_map<std::string, std::size_t> name_ids_;
    std::size_t words_ = 1;

    std::vector<std::string> role_names_;
    std::unordered_map<std::string, std::size_t> role_ids_;
    std::vector<std::vector<bool>> role_leq_;  // over 2 * |roles| oriented roles

    struct AtomicRule {
        std::size_t sub, sup;
    };
    struct ConjRule {
        std::vector<std::size_t> body;
        std::size_t head;
    };
    struct ExRule {
        std::size_t role;  // oriented role index
        std::size_t filler;
        std::size_t other;  // ExLeft: head; ExRight: lhs
    };
    std::vector<AtomicRule> atomic_;
    std::vector<ConjRule> conj_;
    std::vector<ExRule> ex_left_rules_, ex_right_rules_;
    std::vector<NormalizedAxiom> ex_right_, ex_left_;
    std::vector<std::string> public_names_;

    mutable std::mutex mutex_;
    mutable std::map<Bits, Bits> table_;
};

}  // namespace navrw
