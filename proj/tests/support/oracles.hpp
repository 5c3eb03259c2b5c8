#pragma once

// Reference evaluators that share no code with the engine.

#include <set>
#include <string>
#include <utility>

#include "navrw/graph.hpp"
#include "navrw/query.hpp"

namespace navrw::testing {

using PairSet = std::set<std::pair<std::string, std::string>>;

/// (u, v) such that some walk from u to v matches e. Walks are grown one
/// subexpression at a time from each start node; stars iterate to a fixpoint.
PairSet walk_pairs(const PathExpression& e, const PropertyGraph& g);

}  // namespace navrw::testing
