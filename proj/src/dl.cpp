#include "navrw/dl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "navrw/errors.hpp"

namespace navrw {

// ---------------------------------------------------------------------------
// ConceptExpr / Axiom

ConceptExpr ConceptExpr::top() { return ConceptExpr{}; }

ConceptExpr ConceptExpr::atom(std::string name) {
    if (name == kTop) return top();
    ConceptExpr c;
    c.kind = Kind::Atom;
    c.name = std::move(name);
    return c;
}

ConceptExpr ConceptExpr::exists(Role role, ConceptExpr filler) {
    ConceptExpr c;
    c.kind = Kind::Exists;
    c.role = std::move(role);
    c.args.push_back(std::move(filler));
    return c;
}

ConceptExpr ConceptExpr::conj(ConceptExpr lhs, ConceptExpr rhs) {
    ConceptExpr c;
    c.kind = Kind::And;
    c.args.push_back(std::move(lhs));
    c.args.push_back(std::move(rhs));
    return c;
}

ConceptExpr ConceptExpr::negate(ConceptExpr operand) {
    ConceptExpr c;
    c.kind = Kind::Not;
    c.args.push_back(std::move(operand));
    return c;
}

namespace {

void flatten_and(const ConceptExpr& c, std::vector<ConceptExpr>& out) {
    if (c.kind == ConceptExpr::Kind::And) {
        for (const auto& a : c.args) flatten_and(a, out);
    } else {
        out.push_back(c.canonical());
    }
}

}  // namespace

ConceptExpr ConceptExpr::canonical() const {
    switch (kind) {
    case Kind::Top:
    case Kind::Atom:
        return *this;
    case Kind::Exists:
        return exists(role, args.front().canonical());
    case Kind::Not:
        return negate(args.front().canonical());
    case Kind::And: {
        std::vector<ConceptExpr> parts;
        flatten_and(*this, parts);
        std::sort(parts.begin(), parts.end(), [](const ConceptExpr& a, const ConceptExpr& b) {
            return to_string(a) < to_string(b);
        });
        parts.erase(std::unique(parts.begin(), parts.end(),
                                [](const ConceptExpr& a, const ConceptExpr& b) {
                                    return to_string(a) == to_string(b);
                                }),
                    parts.end());
        if (parts.size() == 1) return parts.front();
        ConceptExpr c;
        c.kind = Kind::And;
        c.args = std::move(parts);
        return c;
    }
    }
    return *this;
}

bool operator==(const ConceptExpr& a, const ConceptExpr& b) {
    return to_string(a.canonical()) == to_string(b.canonical());
}

Axiom Axiom::concept_inclusion(ConceptExpr lhs, ConceptExpr rhs) {
    Axiom a;
    a.kind = Kind::ConceptInclusion;
    a.lhs = std::move(lhs);
    a.rhs = std::move(rhs);
    return a;
}

Axiom Axiom::role_inclusion(Role sub, Role sup) {
    Axiom a;
    a.kind = Kind::RoleInclusion;
    a.sub = std::move(sub);
    a.sup = std::move(sup);
    return a;
}

bool operator==(const Axiom& a, const Axiom& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Axiom::Kind::RoleInclusion) return a.sub == b.sub && a.sup == b.sup;
    return a.lhs == b.lhs && a.rhs == b.rhs;
}

// ---------------------------------------------------------------------------
// NormalizedAxiom

NormalizedAxiom NormalizedAxiom::atomic(std::string sub, std::string sup) {
    NormalizedAxiom n;
    n.kind = NfKind::Atomic;
    n.lhs = {std::move(sub)};
    n.rhs = std::move(sup);
    return n;
}

NormalizedAxiom NormalizedAxiom::conj(std::vector<std::string> conjuncts, std::string sup) {
    std::sort(conjuncts.begin(), conjuncts.end());
    conjuncts.erase(std::unique(conjuncts.begin(), conjuncts.end()), conjuncts.end());
    NormalizedAxiom n;
    n.kind = conjuncts.size() == 1 ? NfKind::Atomic : NfKind::Conj;
    n.lhs = std::move(conjuncts);
    n.rhs = std::move(sup);
    return n;
}

NormalizedAxiom NormalizedAxiom::ex_left(Role role, std::string filler, std::string sup) {
    NormalizedAxiom n;
    n.kind = NfKind::ExLeft;
    n.lhs = {std::move(filler)};
    n.role = std::move(role);
    n.rhs = std::move(sup);
    return n;
}

NormalizedAxiom NormalizedAxiom::ex_right(std::string sub, Role role, std::string filler) {
    NormalizedAxiom n;
    n.kind = NfKind::ExRight;
    n.lhs = {std::move(sub)};
    n.role = std::move(role);
    n.rhs = std::move(filler);
    return n;
}

NormalizedAxiom NormalizedAxiom::role_inclusion(Role sub, Role sup) {
    NormalizedAxiom n;
    n.kind = NfKind::Role;
    n.role = std::move(sub);
    n.sup_role = std::move(sup);
    return n;
}

Axiom NormalizedAxiom::to_axiom() const {
    switch (kind) {
    case NfKind::Atomic:
        return Axiom::concept_inclusion(ConceptExpr::atom(lhs.front()), ConceptExpr::atom(rhs));
    case NfKind::Conj: {
        ConceptExpr c = ConceptExpr::atom(lhs.front());
        for (std::size_t i = 1; i < lhs.size(); ++i) c = ConceptExpr::conj(c, ConceptExpr::atom(lhs[i]));
        return Axiom::concept_inclusion(c, ConceptExpr::atom(rhs));
    }
    case NfKind::ExLeft:
        return Axiom::concept_inclusion(ConceptExpr::exists(role, ConceptExpr::atom(lhs.front())),
                                        ConceptExpr::atom(rhs));
    case NfKind::ExRight:
        return Axiom::concept_inclusion(ConceptExpr::atom(lhs.front()),
                                        ConceptExpr::exists(role, ConceptExpr::atom(rhs)));
    case NfKind::Role:
        return Axiom::role_inclusion(role, sup_role);
    }
    return {};
}

std::string NormalizedAxiom::str() const { return to_string(to_axiom()); }

// ---------------------------------------------------------------------------
// TBox accessors

namespace {

void collect_names(const ConceptExpr& c, std::vector<std::string>& concepts,
                   std::vector<std::string>& roles) {
    auto push = [](std::vector<std::string>& v, const std::string& s) {
        if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
    };
    switch (c.kind) {
    case ConceptExpr::Kind::Top:
        break;
    case ConceptExpr::Kind::Atom:
        push(concepts, c.name);
        break;
    case ConceptExpr::Kind::Exists:
        push(roles, c.role.name);
        [[fallthrough]];
    default:
        for (const auto& a : c.args) collect_names(a, concepts, roles);
    }
}

void collect_names(const std::vector<NormalizedAxiom>& axioms, std::vector<std::string>& concepts,
                   std::vector<std::string>& roles) {
    for (const auto& ax : axioms) {
        Axiom a = ax.to_axiom();
        if (a.kind == Axiom::Kind::RoleInclusion) {
            for (const auto* r : {&a.sub, &a.sup})
                if (std::find(roles.begin(), roles.end(), r->name) == roles.end()) roles.push_back(r->name);
        } else {
            collect_names(a.lhs, concepts, roles);
            collect_names(a.rhs, concepts, roles);
        }
    }
}

}  // namespace

std::vector<std::string> TBox::concept_names() const {
    std::vector<std::string> concepts, roles;
    if (is_normalized) {
        collect_names(normalized, concepts, roles);
    } else {
        for (const auto& a : axioms) {
            if (a.kind == Axiom::Kind::RoleInclusion) continue;
            collect_names(a.lhs, concepts, roles);
            collect_names(a.rhs, concepts, roles);
        }
    }
    return concepts;
}

std::vector<std::string> TBox::role_names() const {
    std::vector<std::string> concepts, roles;
    collect_names(normalized, concepts, roles);
    return roles;
}

std::vector<NormalizedAxiom> TBox::of_kind(NfKind kind) const {
    std::vector<NormalizedAxiom> out;
    for (const auto& ax : normalized)
        if (ax.kind == kind) out.push_back(ax);
    return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string print_operand(const ConceptExpr& c) {
    std::string s = to_string(c);
    return c.kind == ConceptExpr::Kind::And ? "(" + s + ")" : s;
}

bool lower_initial(const std::string& s) { return !s.empty() && std::islower(static_cast<unsigned char>(s[0])); }

// Decides how a line `X <= Y` with two bare names is read.
bool bare_line_is_role(const std::string& x, const std::string& y, const std::set<std::string>& roles,
                       const std::set<std::string>& concepts) {
    bool any_role = roles.count(x) || roles.count(y);
    bool any_concept = concepts.count(x) || concepts.count(y);
    if (any_role != any_concept) return any_role;
    return lower_initial(x) && lower_initial(y);
}

void known_names(const std::vector<Axiom>& axioms, std::set<std::string>& roles,
                 std::set<std::string>& concepts) {
    for (const auto& a : axioms) {
        if (a.kind == Axiom::Kind::RoleInclusion) {
            // Only inverses are unambiguous evidence of role-hood.
            if (a.sub.inverted || a.sup.inverted) {
                roles.insert(a.sub.name);
                roles.insert(a.sup.name);
            }
            continue;
        }
        if (a.lhs.kind == ConceptExpr::Kind::Atom && a.rhs.kind == ConceptExpr::Kind::Atom) continue;
        std::vector<std::string> cs, rs;
        collect_names(a.lhs, cs, rs);
        collect_names(a.rhs, cs, rs);
        concepts.insert(cs.begin(), cs.end());
        roles.insert(rs.begin(), rs.end());
    }
}

}  // namespace

std::string to_string(const ConceptExpr& c) {
    switch (c.kind) {
    case ConceptExpr::Kind::Top:
        return std::string(kTop);
    case ConceptExpr::Kind::Atom:
        return c.name;
    case ConceptExpr::Kind::Exists:
        return "exists " + c.role.str() + " . " + print_operand(c.args.front());
    case ConceptExpr::Kind::Not:
        return "not " + print_operand(c.args.front());
    case ConceptExpr::Kind::And: {
        std::string out;
        for (std::size_t i = 0; i < c.args.size(); ++i) {
            if (i) out += " & ";
            out += print_operand(c.args[i]);
        }
        return out;
    }
    }
    return {};
}

std::string to_string(const Axiom& a) {
    if (a.kind == Axiom::Kind::RoleInclusion) return a.sub.str() + " <= " + a.sup.str();
    return to_string(a.lhs) + " <= " + to_string(a.rhs);
}

std::string print_tbox(const TBox& t) {
    std::set<std::string> roles, concepts;
    known_names(t.axioms, roles, concepts);
    std::ostringstream out;
    for (const auto& a : t.axioms) {
        bool bare = a.kind == Axiom::Kind::RoleInclusion
                        ? !a.sub.inverted && !a.sup.inverted
                        : a.lhs.kind == ConceptExpr::Kind::Atom && a.rhs.kind == ConceptExpr::Kind::Atom;
        if (!bare) {
            out << to_string(a) << '\n';
            continue;
        }
        bool is_role = a.kind == Axiom::Kind::RoleInclusion;
        std::string x = is_role ? a.sub.name : a.lhs.name;
        std::string y = is_role ? a.sup.name : a.rhs.name;
        bool read_as_role = bare_line_is_role(x, y, roles, concepts);
        if (is_role && !read_as_role)
            out << "role " << x << " <= " << y << '\n';
        else if (!is_role && read_as_role)
            out << '(' << x << ") <= " << y << '\n';
        else
            out << x << " <= " << y << '\n';
    }
    return out.str();
}

std::string print_normalized(const TBox& t) {
    std::ostringstream out;
    for (const auto& ax : t.normalized) out << ax.str() << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
    enum class Kind { Name, Sub, Amp, LParen, RParen, Dot, Not, End };
    Kind kind;
    std::string text;
    int column;
};

class LineLexer {
public:
    LineLexer(std::string_view line, int line_no) : line_(line), line_no_(line_no) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        std::size_t i = 0;
        while (i < line_.size()) {
            unsigned char c = static_cast<unsigned char>(line_[i]);
            int col = static_cast<int>(i) + 1;
            if (std::isspace(c)) {
                ++i;
            } else if (line_.substr(i, 2) == "<=") {
                out.push_back({Token::Kind::Sub, "<=", col});
                i += 2;
            } else if (line_.substr(i, 3) == "⊑") {  // ⊑
                out.push_back({Token::Kind::Sub, "<=", col});
                i += 3;
            } else if (line_.substr(i, 2) == "¬") {  // ¬
                out.push_back({Token::Kind::Not, "not", col});
                i += 2;
            } else if (c == '&') {
                out.push_back({Token::Kind::Amp, "&", col});
                ++i;
            } else if (c == '(') {
                out.push_back({Token::Kind::LParen, "(", col});
                ++i;
            } else if (c == ')') {
                out.push_back({Token::Kind::RParen, ")", col});
                ++i;
            } else if (c == '.') {
                out.push_back({Token::Kind::Dot, ".", col});
                ++i;
            } else if (std::isalnum(c) || c == '_') {
                std::size_t j = i;
                while (j < line_.size() &&
                       (std::isalnum(static_cast<unsigned char>(line_[j])) || line_[j] == '_'))
                    ++j;
                std::string word(line_.substr(i, j - i));
                check_identifier(word, col);
                out.push_back({word == "not" ? Token::Kind::Not : Token::Kind::Name, word, col});
                i = j;
            } else {
                throw ParseError("unexpected character '" + std::string(1, line_[i]) + "'", line_no_, col);
            }
        }
        out.push_back({Token::Kind::End, "", static_cast<int>(line_.size()) + 1});
        return out;
    }

private:
    void check_identifier(const std::string& word, int col) const {
        if (word.rfind(kFreshPrefix, 0) == 0)
            throw ParseError("identifier '" + word + "' uses the reserved prefix '" +
                                 std::string(kFreshPrefix) + "'",
                             line_no_, col);
        if (!std::isalpha(static_cast<unsigned char>(word[0])))
            throw ParseError("identifier '" + word + "' must start with a letter", line_no_, col);
    }

    std::string_view line_;
    int line_no_;
};

// A parsed side of `X <= Y`: either a concept expression or an explicit
// inverse role. A bare name is kept as a concept atom and may be
// reinterpreted as a role once the whole document has been read.
struct Side {
    std::optional<ConceptExpr> concept_expr;
    std::optional<Role> role;
    bool bare = false;
};

struct RawLine {
    Side lhs, rhs;
    bool forced_role = false;
    int line = 0;
    int rhs_column = 0;
};

class LineParser {
public:
    LineParser(std::vector<Token> toks, int line_no) : toks_(std::move(toks)), line_no_(line_no) {}

    RawLine parse() {
        RawLine raw;
        raw.line = line_no_;
        if (peek().kind == Token::Kind::Name && peek().text == "role" && peek(1).kind == Token::Kind::Name) {
            raw.forced_role = true;
            ++pos_;
        }
        raw.lhs = raw.forced_role ? role_side() : side();
        expect(Token::Kind::Sub, "'<='");
        raw.rhs_column = peek().column;
        raw.rhs = raw.forced_role ? role_side() : side();
        if (peek().kind != Token::Kind::End) fail("unexpected '" + peek().text + "'");
        return raw;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, line_no_, peek().column);
    }

    Token expect(Token::Kind kind, const char* what) {
        if (peek().kind != kind) fail(std::string("expected ") + what);
        return toks_[pos_++];
    }

    Side role_side() {
        Side s;
        s.role = role();
        return s;
    }

    Side side() {
        Side s;
        if (peek().kind == Token::Kind::Name && peek().text == "inv" && peek(1).kind == Token::Kind::LParen) {
            s.role = role();
            return s;
        }
        if (peek().kind == Token::Kind::Name && peek().text != "exists" && peek().text != "top" &&
            (peek(1).kind == Token::Kind::Sub || peek(1).kind == Token::Kind::End))
            s.bare = true;
        s.concept_expr = conjunction();
        return s;
    }

    Role role() {
        Token t = expect(Token::Kind::Name, "role name");
        if (t.text == "inv" && peek().kind == Token::Kind::LParen) {
            ++pos_;
            Role inner = role();
            expect(Token::Kind::RParen, "')'");
            return inner.inverse();
        }
        if (t.text == kTop || t.text == "exists") fail("'" + t.text + "' cannot be used as a role name");
        return Role{t.text, false};
    }

    ConceptExpr conjunction() {
        ConceptExpr c = unary();
        while (peek().kind == Token::Kind::Amp) {
            ++pos_;
            c = ConceptExpr::conj(std::move(c), unary());
        }
        return c;
    }

    ConceptExpr unary() {
        const Token& t = peek();
        switch (t.kind) {
        case Token::Kind::Not:
            ++pos_;
            return ConceptExpr::negate(unary());
        case Token::Kind::LParen: {
            ++pos_;
            ConceptExpr c = conjunction();
            expect(Token::Kind::RParen, "')'");
            return c;
        }
        case Token::Kind::Name:
            if (t.text == "exists") {
                ++pos_;
                Role r = role();
                expect(Token::Kind::Dot, "'.' after role");
                return ConceptExpr::exists(std::move(r), unary());
            }
            if (t.text == "inv") fail("inverse role used where a concept is expected");
            ++pos_;
            return t.text == kTop ? ConceptExpr::top() : ConceptExpr::atom(t.text);
        default:
            fail("expected concept expression");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int line_no_;
};

}  // namespace

TBox parse_tbox(std::string_view text) {
    std::vector<RawLine> raws;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        bool blank = std::all_of(line.begin(), line.end(),
                                 [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
        if (!blank) raws.push_back(LineParser(LineLexer(line, line_no).run(), line_no).parse());
        if (end == text.size()) break;
        start = end + 1;
    }

    // Names whose kind is evident from non-bare lines.
    std::set<std::string> roles, concepts;
    for (const auto& r : raws) {
        for (const Side* s : {&r.lhs, &r.rhs}) {
            if (s->role) roles.insert(s->role->name);
            if (s->concept_expr && !s->bare) {
                std::vector<std::string> cs, rs;
                collect_names(*s->concept_expr, cs, rs);
                concepts.insert(cs.begin(), cs.end());
                roles.insert(rs.begin(), rs.end());
            }
        }
    }

    TBox t;
    for (const auto& r : raws) {
        Axiom a;
        bool lhs_role = r.lhs.role.has_value(), rhs_role = r.rhs.role.has_value();
        auto as_role = [](const Side& s) { return s.role ? *s.role : Role{s.concept_expr->name, false}; };
        if (r.forced_role) {
            a = Axiom::role_inclusion(*r.lhs.role, *r.rhs.role);
        } else if (lhs_role || rhs_role) {
            if (!(lhs_role || r.lhs.bare) || !(rhs_role || r.rhs.bare))
                throw ParseError("cannot mix a role and a concept expression in one inclusion", r.line,
                                 r.rhs_column);
            a = Axiom::role_inclusion(as_role(r.lhs), as_role(r.rhs));
        } else if (r.lhs.bare && r.rhs.bare &&
                   bare_line_is_role(r.lhs.concept_expr->name, r.rhs.concept_expr->name, roles, concepts)) {
            a = Axiom::role_inclusion(as_role(r.lhs), as_role(r.rhs));
        } else {
            a = Axiom::concept_inclusion(*r.lhs.concept_expr, *r.rhs.concept_expr);
        }
        a.line = r.line;
        t.axioms.push_back(std::move(a));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

std::optional<std::string> forbidden_construct(const ConceptExpr& c) {
    if (c.kind == ConceptExpr::Kind::Not) return "negation '" + to_string(c) + "'";
    for (const auto& a : c.args)
        if (auto f = forbidden_construct(a)) return f;
    return std::nullopt;
}

}  // namespace

void validate_fragment(const TBox& t) {
    for (const auto& a : t.axioms) {
        if (a.kind == Axiom::Kind::RoleInclusion) continue;
        for (const ConceptExpr* side : {&a.lhs, &a.rhs}) {
            if (auto f = forbidden_construct(*side)) {
                std::string where = a.line > 0 ? " (line " + std::to_string(a.line) + ")" : "";
                throw FragmentViolation("axiom '" + to_string(a) + "'" + where + ": " + *f +
                                        " is outside the supported fragment");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

class Normalizer {
public:
    explicit Normalizer(int first_fresh) : next_fresh_(first_fresh) {}

    void concept_inclusion(const ConceptExpr& lhs, const ConceptExpr& rhs) {
        Lhs l = reduce_lhs(lhs);
        std::vector<ConceptExpr> rhs_parts;
        flatten_and(rhs, rhs_parts);
        for (const auto& part : rhs_parts) single_rhs(l, part);
    }

    void role_inclusion(const Role& sub, const Role& sup) { emit(NormalizedAxiom::role_inclusion(sub, sup)); }

    std::vector<NormalizedAxiom> take() { return std::move(out_); }

private:
    // A left-hand side reduced to a name, a conjunction of names, or ∃p.name.
    struct Lhs {
        enum class Kind { Name, Conj, Exists } kind = Kind::Name;
        std::vector<std::string> names;
        Role role;
    };

    std::string fresh() { return std::string(kFreshPrefix) + std::to_string(next_fresh_++); }

    void emit(NormalizedAxiom ax) {
        if (std::find(out_.begin(), out_.end(), ax) == out_.end()) out_.push_back(std::move(ax));
    }

    // Introduces a fresh name N with c ⊑ N unless c already is a name.
    std::string name_for_lhs(const ConceptExpr& c) {
        if (c.is_name()) return c.name_or_top();
        std::string n = fresh();
        concept_inclusion(c, ConceptExpr::atom(n));
        return n;
    }

    Lhs reduce_lhs(const ConceptExpr& c) {
        Lhs l;
        switch (c.kind) {
        case ConceptExpr::Kind::Top:
        case ConceptExpr::Kind::Atom:
            l.names = {c.name_or_top()};
            return l;
        case ConceptExpr::Kind::Exists:
            l.kind = Lhs::Kind::Exists;
            l.role = c.role;
            l.names = {name_for_lhs(c.args.front())};
            return l;
        case ConceptExpr::Kind::And: {
            std::vector<ConceptExpr> parts;
            flatten_and(c, parts);
            std::set<std::string> names;
            for (const auto& p : parts) {
                std::string n = name_for_lhs(p);
                if (n != kTop) names.insert(n);
            }
            if (names.empty()) names.insert(std::string(kTop));
            l.names.assign(names.begin(), names.end());
            l.kind = l.names.size() == 1 ? Lhs::Kind::Name : Lhs::Kind::Conj;
            return l;
        }
        case ConceptExpr::Kind::Not:
            throw FragmentViolation("negation is outside the supported fragment: " + to_string(c));
        }
        return l;
    }

    void single_rhs(const Lhs& l, const ConceptExpr& r) {
        if (r.is_name()) {
            std::string sup = r.name_or_top();
            switch (l.kind) {
            case Lhs::Kind::Name:
                emit(NormalizedAxiom::atomic(l.names.front(), sup));
                break;
            case Lhs::Kind::Conj:
                emit(NormalizedAxiom::conj(l.names, sup));
                break;
            case Lhs::Kind::Exists:
                emit(NormalizedAxiom::ex_left(l.role, l.names.front(), sup));
                break;
            }
            return;
        }
        if (r.kind == ConceptExpr::Kind::Not)
            throw FragmentViolation("negation is outside the supported fragment: " + to_string(r));
        // r = ∃p.F
        std::string sub;
        if (l.kind == Lhs::Kind::Name) {
            sub = l.names.front();
        } else {
            sub = fresh();
            single_rhs(l, ConceptExpr::atom(sub));
        }
        const ConceptExpr& filler = r.args.front();
        if (filler.is_name()) {
            emit(NormalizedAxiom::ex_right(sub, r.role, filler.name_or_top()));
        } else {
            std::string n = fresh();
            emit(NormalizedAxiom::ex_right(sub, r.role, n));
            concept_inclusion(ConceptExpr::atom(n), filler);
        }
    }

    int next_fresh_;
    std::vector<NormalizedAxiom> out_;
};

int first_free_fresh_index(const TBox& t) {
    int next = 0;
    std::vector<std::string> names = t.concept_names();
    for (const auto& n : names) {
        if (n.rfind(kFreshPrefix, 0) != 0) continue;
        std::string digits = n.substr(kFreshPrefix.size());
        if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit))
            next = std::max(next, std::stoi(digits) + 1);
    }
    return next;
}

}  // namespace

TBox normalize(const TBox& t) {
    if (t.is_normalized) return t;
    validate_fragment(t);
    Normalizer n(first_free_fresh_index(t));
    for (const auto& a : t.axioms) {
        if (a.kind == Axiom::Kind::RoleInclusion)
            n.role_inclusion(a.sub, a.sup);
        else
            n.concept_inclusion(a.lhs, a.rhs);
    }
    TBox out;
    out.axioms = t.axioms;
    out.normalized = n.take();
    out.is_normalized = true;
    return out;
}

TBox from_normalized(std::vector<NormalizedAxiom> axioms) {
    TBox t;
    for (const auto& ax : axioms) t.axioms.push_back(ax.to_axiom());
    t.normalized = std::move(axioms);
    t.is_normalized = true;
    return t;
}

}  // namespace navrw
