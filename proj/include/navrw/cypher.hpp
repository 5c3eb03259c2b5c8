#pragma once

// Translation of UC2RPQs into openCypher text.

#include <string>
#include <vector>

#include "navrw/query.hpp"

namespace navrw {

struct CypherQuery {
    std::string text;
    std::vector<std::string> diagnostics;
};

/// One `MATCH ... RETURN DISTINCT` block per branch, joined by `UNION`.
/// Unions inside paths are distributed into branches unless they are
/// same-direction edge unions. Throws UnsupportedPath for stars over anything
/// but such edge unions.
CypherQuery emit_cypher(const UC2RPQ& q);
CypherQuery emit_cypher(const C2RPQ& q);

/// Backtick-quotes names that are not plain identifiers.
std::string cypher_name(const std::string& name);

}  // namespace navrw
