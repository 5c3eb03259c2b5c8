#pragma once

// Bounded restricted chase: a property graph completed with everything a TBox
// forces, up to a fixed depth of invented elements.

#include <cstddef>
#include <vector>

#include "navrw/dl.hpp"
#include "navrw/eval.hpp"
#include "navrw/graph.hpp"
#include "navrw/query.hpp"

namespace navrw {

/// Id prefix of invented nodes.
inline constexpr std::string_view kAnonymousPrefix = "_:";

struct ChasedGraph {
    PropertyGraph graph;
    std::vector<std::size_t> generation;  // 0 for data nodes
    std::size_t depth = 0;

    bool is_anonymous(std::size_t node) const { return generation[node] > 0; }
};

/// Invented nodes are named `_:<parent>/<k>` where k is the position of the
/// existential axiom in the normalized sequence and <parent> drops the prefix.
ChasedGraph chase(const PropertyGraph& g, const TBox& t, std::size_t depth);

/// Answers of q over the chased graph that only mention data nodes.
AnswerSet certain_answers(const C2RPQ& q, const PropertyGraph& g, const TBox& t, std::size_t depth);

}  // namespace navrw
