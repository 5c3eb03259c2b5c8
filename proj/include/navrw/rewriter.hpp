#pragma once

// NCQ rewriting: clipping saturation, concept rewriting through the dependency
// graph, and role-hierarchy substitution.

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "navrw/depgraph.hpp"
#include "navrw/dl.hpp"
#include "navrw/query.hpp"
#include "navrw/reasoner.hpp"

namespace navrw {

struct RewriteOptions {
    std::size_t max_queries = 10000;
    std::size_t max_clip_attempts = 100000;
    std::size_t witness_cap = 1024;
    bool prune = true;  // add_subseteq; otherwise add_unpruned
};

struct RewriteResult {
    RewritingSet queries;
    std::vector<std::string> diagnostics;
    std::size_t clip_attempts = 0;
    std::size_t saturated_queries = 0;  // size of the clipping fixpoint
};

/// A conjunction of atoms rooted at variable "#0"; other variables are "#1", "#2", ...
struct TreePattern {
    std::vector<Atom> atoms;
    std::size_t n_vars = 1;
};

/// Precomputed per-TBox state shared by all rewriting calls. Not thread-safe.
class Rewriter {
public:
    explicit Rewriter(const TBox& normalized, RewriteOptions options = {});

    const Reasoner& reasoner() const { return *reasoner_; }
    const DependencyGraph& graph() const { return graph_; }
    const RewriteOptions& options() const { return options_; }

    /// Queries obtained by folding the variables `y` into the anonymous
    /// successor created by `ex_right`; empty if that is impossible.
    std::vector<C2RPQ> clipping(const C2RPQ& q, const NormalizedAxiom& ex_right,
                                const std::vector<std::string>& y) const;

    /// Every way to derive `a` at the root from the data (before role
    /// substitution). Throws FragmentViolation when the derivations do not
    /// form a regular language of trees.
    const std::vector<TreePattern>& concept_patterns(const std::string& a);

    RewriteResult rewrite(const C2RPQ& q);

private:
    bool is_local(const std::string& name) const;
    PathExpression local_expression(const std::string& name);
    void compute_patterns(const std::string& a);
    C2RPQ finish(C2RPQ q) const;

    std::unique_ptr<Reasoner> reasoner_;
    TBox tbox_;
    RewriteOptions options_;
    DependencyGraph graph_;
    std::vector<std::string> diagnostics_;
    std::map<std::string, std::vector<TreePattern>> patterns_;
    std::vector<std::string> in_progress_;
    std::map<std::string, bool> local_;
};

RewriteResult rewrite_ncq(const C2RPQ& q, const TBox& normalized, const RewriteOptions& options = {});
RewriteResult rewrite_atomic(const std::string& a, const TBox& normalized, const RewriteOptions& options = {});

/// Stand-alone form of Rewriter::clipping.
std::vector<C2RPQ> clipping(const C2RPQ& q, const NormalizedAxiom& ex_right, const std::vector<std::string>& y,
                            const TBox& normalized);

}  // namespace navrw
