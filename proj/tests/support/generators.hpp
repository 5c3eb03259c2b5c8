#pragma once

// Random instances for the property sweeps.

#include <cstddef>
#include <random>
#include <vector>

#include "navrw/dl.hpp"
#include "navrw/graph.hpp"
#include "navrw/query.hpp"

namespace navrw::testing {

struct SweepLimits {
    std::size_t max_axioms = 12;
    std::size_t max_concepts = 8;
    std::size_t max_roles = 4;
    std::size_t max_nodes = 6;
    std::size_t max_atoms = 4;
    std::size_t max_answer_vars = 1;
};

struct Instance {
    TBox tbox;
    PropertyGraph graph;
    C2RPQ query;
    unsigned seed = 0;
};

TBox random_tbox(std::mt19937& rng, const SweepLimits& lim = {});
PropertyGraph random_abox(std::mt19937& rng, const TBox& t, const SweepLimits& lim = {});
/// Connected NCQ over the TBox signature.
C2RPQ random_ncq(std::mt19937& rng, const TBox& t, const SweepLimits& lim = {});

/// `count` instances whose TBoxes the rewriter accepts. Deterministic in `seed`.
std::vector<Instance> sweep_corpus(std::size_t count, unsigned seed, const SweepLimits& lim = {});

/// Random graph over roles r0..r{roles-1} and labels L0..L{labels-1}.
PropertyGraph random_graph(std::mt19937& rng, std::size_t nodes, std::size_t roles, std::size_t labels,
                           double edge_p = 0.3, double label_p = 0.4);

/// Every path expression with at most `max_size` constructors and star depth
/// at most `max_star_depth`, over the given edges and labels.
std::vector<PathExpression> all_paths(std::size_t max_size, std::size_t max_star_depth,
                                      const std::vector<std::string>& roles, const std::vector<std::string>& labels);

}  // namespace navrw::testing
