#pragma once

// TBoxes of the supported ELHI fragment: representation, parsing,
// validation and structural normalization.

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace navrw {

/// Reserved concept name for the top concept.
inline constexpr std::string_view kTop = "top";

/// Prefix of concept names invented by normalization. Rejected in parser input.
inline constexpr std::string_view kFreshPrefix = "__nf";

/// A role name, possibly inverted. Double inversion is folded into the flag.
struct Role {
    std::string name;
    bool inverted = false;

    Role inverse() const { return Role{name, !inverted}; }
    std::string str() const { return inverted ? "inv(" + name + ")" : name; }

    auto operator<=>(const Role&) const = default;
    bool operator==(const Role&) const = default;
};

struct ConceptExpr {
    enum class Kind { Top, Atom, Exists, And, Not };

    Kind kind = Kind::Top;
    std::string name;               // Atom
    Role role;                      // Exists
    std::vector<ConceptExpr> args;  // Exists: {filler}; And: conjuncts; Not: {operand}

    static ConceptExpr top();
    static ConceptExpr atom(std::string name);
    static ConceptExpr exists(Role role, ConceptExpr filler);
    static ConceptExpr conj(ConceptExpr lhs, ConceptExpr rhs);
    static ConceptExpr negate(ConceptExpr operand);

    bool is_name() const { return kind == Kind::Atom || kind == Kind::Top; }
    /// The concept name, with `top` standing for the top concept.
    std::string name_or_top() const { return kind == Kind::Top ? std::string(kTop) : name; }

    /// Flattened, sorted and deduplicated conjunctions; used for equality.
    ConceptExpr canonical() const;

    friend bool operator==(const ConceptExpr& a, const ConceptExpr& b);
};

struct Axiom {
    enum class Kind { ConceptInclusion, RoleInclusion };

    Kind kind = Kind::ConceptInclusion;
    ConceptExpr lhs, rhs;  // concept inclusion
    Role sub, sup;         // role inclusion
    int line = 0;          // source line, 0 when synthesized

    static Axiom concept_inclusion(ConceptExpr lhs, ConceptExpr rhs);
    static Axiom role_inclusion(Role sub, Role sup);

    /// Structural equality; the source line is ignored.
    friend bool operator==(const Axiom& a, const Axiom& b);
};

enum class NfKind { Atomic, Conj, ExLeft, ExRight, Role };

/// Axiom in one of the normal forms
///   Atomic   A ⊑ B            lhs={A}, rhs=B
///   Conj     B1 ⊓ … ⊓ Bk ⊑ A  lhs={B1..Bk} (sorted), rhs=A
///   ExLeft   ∃p.B ⊑ A         lhs={B}, role=p, rhs=A
///   ExRight  A ⊑ ∃p.B         lhs={A}, role=p, rhs=B
///   Role     p ⊑ q            role=p, sup_role=q
/// Concept positions may hold `top`.
struct NormalizedAxiom {
    NfKind kind = NfKind::Atomic;
    std::vector<std::string> lhs;
    Role role;
    std::string rhs;
    Role sup_role;

    static NormalizedAxiom atomic(std::string sub, std::string sup);
    static NormalizedAxiom conj(std::vector<std::string> conjuncts, std::string sup);
    static NormalizedAxiom ex_left(Role role, std::string filler, std::string sup);
    static NormalizedAxiom ex_right(std::string sub, Role role, std::string filler);
    static NormalizedAxiom role_inclusion(Role sub, Role sup);

    Axiom to_axiom() const;
    std::string str() const;

    auto operator<=>(const NormalizedAxiom&) const = default;
    bool operator==(const NormalizedAxiom&) const = default;
};

struct TBox {
    std::vector<Axiom> axioms;
    std::vector<NormalizedAxiom> normalized;
    bool is_normalized = false;

    /// Concept names (excluding top) in order of first occurrence in the normalized axioms.
    std::vector<std::string> concept_names() const;
    /// Role names in order of first occurrence in the normalized axioms.
    std::vector<std::string> role_names() const;
    std::vector<NormalizedAxiom> of_kind(NfKind kind) const;
};

/// Parse the line-oriented TBox syntax. Throws ParseError.
TBox parse_tbox(std::string_view text);

std::string to_string(const ConceptExpr& c);
std::string to_string(const Axiom& a);
/// Prints the source axioms in the syntax accepted by parse_tbox.
std::string print_tbox(const TBox& t);
/// Prints the normalized axioms, one per line.
std::string print_normalized(const TBox& t);

/// Throws FragmentViolation naming the first offending axiom.
void validate_fragment(const TBox& t);

/// Validate and normalize. Fresh names `__nf0, __nf1, …` are allocated in source
/// order. Re-normalizing a normalized TBox is a no-op on the normalized sequence.
TBox normalize(const TBox& t);

/// A TBox whose source axioms are exactly the given normalized axioms.
TBox from_normalized(std::vector<NormalizedAxiom> axioms);

}  // namespace navrw
