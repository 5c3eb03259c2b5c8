#pragma once

// Walk-based evaluation of path expressions and (unions of) C2RPQs.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "navrw/graph.hpp"
#include "navrw/query.hpp"

namespace navrw {

/// Binary relation over node indices as sorted successor lists.
using Relation = std::vector<std::vector<std::size_t>>;

/// Variable -> node id.
using Mapping = std::map<std::string, std::string>;

using AnswerSet = std::set<std::vector<std::string>>;

/// Unary test at a node; an absent property makes a data test false.
bool holds(const TestExpr& t, const PropertyGraph& g, std::size_t v);
/// Binary test on the (u, v) pair, reading edge properties.
bool holds(const TestExpr& t, const PropertyGraph& g, std::size_t u, std::size_t v);

Relation eval_relation(const PathExpression& e, const PropertyGraph& g);

/// All mappings of {x, y} (one variable if x == y) matched by e.
std::vector<Mapping> eval_path(const PathExpression& e, const std::string& x, const std::string& y,
                               const PropertyGraph& g);

AnswerSet eval_query(const C2RPQ& q, const PropertyGraph& g);
AnswerSet eval_query(const UC2RPQ& q, const PropertyGraph& g);

}  // namespace navrw
