#pragma once

// Dependency graph over concept names: which names (or name sets, or role
// neighbours) let an element be classified under a given name.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "navrw/dl.hpp"
#include "navrw/query.hpp"
#include "navrw/reasoner.hpp"

namespace navrw {

/// target <- source, from source ⊑ target.
struct EpsEdge {
    std::string target, source;
    bool operator==(const EpsEdge&) const = default;
};

/// target <-[role] source, from ∃role.source ⊑ target.
struct RoleEdge {
    std::string target;
    Role role;
    std::string source;
    bool operator==(const RoleEdge&) const = default;
};

/// target <- {sources}, from ⊓ sources ⊑ target.
struct ConjEdge {
    std::string target;
    std::vector<std::string> sources;  // sorted
    bool operator==(const ConjEdge&) const = default;
};

struct DependencyGraph {
    std::vector<std::string> nodes;  // top first, then concept names in source order
    std::vector<EpsEdge> eps_edges;
    std::vector<RoleEdge> role_edges;
    std::vector<ConjEdge> conj_edges;
    std::vector<NormalizedAxiom> role_inclusions;

    bool has_node(const std::string& name) const;
    /// One edge per line: `eps A <- B`, `role A <-[r] B`, `conj A <- {B1,B2}`.
    std::string dump() const;
};

/// Syntactic graph: one edge per normalized axiom.
DependencyGraph build_dependency_graph(const TBox& normalized);

/// Graph whose eps and conj edges are all entailed subsumptions between names
/// (atomic ones, and minimal conjunctions over names that can interact through
/// conjunctions or existentials), so that reasoning through anonymous elements
/// is already folded in. Role edges stay syntactic. `max_subsets` bounds the
/// conjunction search; truncation is reported through `diagnostics`.
DependencyGraph saturate(const TBox& normalized, const Reasoner& reasoner, std::size_t max_subsets = 65536,
                         std::vector<std::string>* diagnostics = nullptr);

using WitnessSet = std::vector<std::string>;  // sorted

/// ⊆-minimal name sets that entail `a` by backward chaining over eps and conj
/// edges. Always contains {a}. At most `cap` sets are explored.
std::vector<WitnessSet> witness(const std::string& a, const DependencyGraph& g, std::size_t cap = 1024,
                                std::vector<std::string>* diagnostics = nullptr);

/// Path expression from an element to a witness of `b` through eps and role
/// edges. Stars appear for cycles in the graph.
PathExpression rewr_concept(const std::string& b, const DependencyGraph& g);

/// Union of all p with p ⊑* r; r itself is always included.
PathExpression rewrite_role(const Role& r, const DependencyGraph& g);
PathExpression rewrite_role(const Role& r, const TBox& normalized);

/// Labelled transition between automaton states.
struct Transition {
    std::size_t from, to;
    PathExpression label;
};

/// Regular expression for the words leading from `start` to acceptance, where
/// state i accepts with the expression accept[i] (if set). States are
/// eliminated in index order. Returns nullopt when nothing is accepted.
std::optional<PathExpression> eliminate_states(std::size_t n_states, const std::vector<Transition>& transitions,
                                               std::size_t start,
                                               const std::vector<std::optional<PathExpression>>& accept);

}  // namespace navrw
