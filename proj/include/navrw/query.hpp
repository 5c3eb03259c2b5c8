#pragma once

// Navigational conjunctive queries (input) and unions of conjunctive two-way
// regular path queries (output).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "navrw/dl.hpp"

namespace navrw {

/// Property value: integer, decimal or string.
struct Literal {
    std::variant<std::int64_t, double, std::string> value;

    bool is_numeric() const { return !std::holds_alternative<std::string>(value); }
    double as_double() const;
    /// Query-syntax rendering; strings are double-quoted.
    std::string str() const;

    bool operator==(const Literal&) const = default;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(CmpOp op);

/// `lhs op rhs`. Numbers compare numerically; values of different types are
/// unequal and never ordered.
bool compare(const Literal& lhs, CmpOp op, const Literal& rhs);

struct DataTest {
    std::string key;
    CmpOp op = CmpOp::Eq;
    Literal value;
};

/// Boolean combination of data tests and label tests.
struct TestExpr {
    enum class Kind { Data, Label, And, Or, Not };

    Kind kind = Kind::Data;
    DataTest data;
    std::string label;
    std::vector<TestExpr> args;

    static TestExpr data_test(DataTest t);
    static TestExpr label_test(std::string label);
    static TestExpr conj(TestExpr a, TestExpr b);
    static TestExpr disj(TestExpr a, TestExpr b);
    static TestExpr negate(TestExpr a);
};

std::string to_string(const TestExpr& t);

struct PathExpression {
    enum class Kind { NodeTest, Edge, Concat, Union, Star, Test };

    Kind kind = Kind::NodeTest;
    std::vector<std::string> labels;    // NodeTest; {top} is the empty walk
    Role role;                          // Edge
    std::vector<PathExpression> args;   // Concat, Union (n-ary), Star (one)
    TestExpr test;                      // Test (node test on data)

    static PathExpression node_test(std::vector<std::string> labels);
    static PathExpression epsilon();
    static PathExpression edge(Role role);
    static PathExpression concat(std::vector<PathExpression> parts);
    static PathExpression concat(PathExpression a, PathExpression b);
    static PathExpression alt(std::vector<PathExpression> branches);
    static PathExpression alt(PathExpression a, PathExpression b);
    static PathExpression star(PathExpression inner);
    static PathExpression filter(TestExpr test);

    bool is_epsilon() const;

    /// Equality of canonical forms.
    friend bool operator==(const PathExpression& a, const PathExpression& b);
};

/// Flattens, simplifies and sorts union branches; deterministic.
PathExpression canonical(const PathExpression& e);
/// The reversed expression: edges inverted, concatenations reversed.
PathExpression inverse(const PathExpression& e);
std::string to_string(const PathExpression& e);

struct Atom {
    enum class Kind { Concept, Path, Test };

    Kind kind = Kind::Concept;
    std::vector<std::string> labels;  // Concept: union of concept names
    PathExpression path;              // Path
    TestExpr test;                    // Test
    std::vector<std::string> vars;    // Concept: {x}; Path: {src, dst}; Test: {x} or {x, y}

    static Atom concept_atom(std::vector<std::string> labels, std::string var);
    static Atom path_atom(PathExpression path, std::string src, std::string dst);
    static Atom test_atom(TestExpr test, std::vector<std::string> vars);
};

std::string to_string(const Atom& a);

/// C2RPQ; an NCQ is a C2RPQ whose path atoms are single edges.
struct C2RPQ {
    std::string head = "q";
    std::vector<std::string> answer_vars;
    std::vector<Atom> atoms;

    /// Variables in order of first occurrence (answer variables first).
    std::vector<std::string> variables() const;
    bool is_ncq() const;
};

using NCQ = C2RPQ;

struct UC2RPQ {
    std::size_t arity = 0;
    std::vector<C2RPQ> members;
};

enum class QuerySyntax {
    Input,     // NCQ: plain role atoms only, connected body
    Extended,  // full path grammar
};

C2RPQ parse_query(std::string_view text, QuerySyntax syntax = QuerySyntax::Input);
/// One query per non-empty line; `#` starts a comment.
UC2RPQ parse_union(std::string_view text, QuerySyntax syntax = QuerySyntax::Extended);

std::string print_query(const C2RPQ& q);
std::string print_union(const UC2RPQ& u);

/// Canonical paths, atom order and simplifications; variable names are kept.
C2RPQ canonicalize(const C2RPQ& q);
/// String identifying q up to renaming of non-answer variables (exact for
/// small queries, a deterministic approximation otherwise).
std::string canonical_key(const C2RPQ& q);

/// Sound structural containment test: true only if there is a homomorphism
/// from q2 into q that fixes answer positions. Implies ⟦q⟧ ⊆ ⟦q2⟧.
bool contains_structurally(const C2RPQ& q, const C2RPQ& q2);

/// Antichain of queries under contains_structurally.
class RewritingSet {
public:
    RewritingSet() = default;
    explicit RewritingSet(std::size_t arity) : arity_(arity) {}

    std::size_t arity() const { return arity_; }
    const std::vector<C2RPQ>& queries() const { return queries_; }
    std::size_t size() const { return queries_.size(); }
    bool empty() const { return queries_.empty(); }

    /// Members sorted by printed form.
    UC2RPQ to_union() const;

    friend RewritingSet add_subseteq(const RewritingSet& set, const C2RPQ& q);
    friend RewritingSet add_unpruned(const RewritingSet& set, const C2RPQ& q);

private:
    std::size_t arity_ = 0;
    std::vector<C2RPQ> queries_;
};

/// Unchanged if q is contained in a member; otherwise members contained in q
/// are dropped and q is added.
RewritingSet add_subseteq(const RewritingSet& set, const C2RPQ& q);
/// Adds q unless an identical (up to canonical_key) query is present.
RewritingSet add_unpruned(const RewritingSet& set, const C2RPQ& q);

/// Replaces Edge(r) by e and Edge(r⁻) by inverse(e) in every path atom.
C2RPQ substitute_role(const C2RPQ& q, const Role& r, const PathExpression& e);
/// Simultaneous substitution for every role the callback maps (called with
/// non-inverted roles).
C2RPQ substitute_roles(const C2RPQ& q,
                       const std::function<std::optional<PathExpression>(const Role&)>& replacement);

}  // namespace navrw
