#include "navrw/cypher.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "navrw/errors.hpp"

namespace navrw {

namespace {

constexpr std::size_t kMaxAlternatives = 4096;

struct Step {
    enum class Kind { Rel, Check } kind = Kind::Rel;
    bool inverse = false;
    bool star = false;
    std::vector<std::string> types;   // Rel
    std::vector<std::string> labels;  // Check: label union
    std::optional<TestExpr> test;     // Check: data or label test
};

using Seq = std::vector<Step>;

// Same-direction edge union, or nullopt.
std::optional<Step> edge_union(const PathExpression& e) {
    Step s;
    if (e.kind == PathExpression::Kind::Edge) {
        s.inverse = e.role.inverted;
        s.types = {e.role.name};
        return s;
    }
    if (e.kind != PathExpression::Kind::Union) return std::nullopt;
    std::set<std::string> types;
    std::optional<bool> dir;
    for (const auto& b : e.args) {
        auto inner = edge_union(b);
        if (!inner) return std::nullopt;
        if (dir && *dir != inner->inverse) return std::nullopt;
        dir = inner->inverse;
        types.insert(inner->types.begin(), inner->types.end());
    }
    s.inverse = dir.value_or(false);
    s.types.assign(types.begin(), types.end());
    return s;
}

std::vector<Seq> expand(const PathExpression& e) {
    switch (e.kind) {
    case PathExpression::Kind::NodeTest: {
        if (e.is_epsilon()) return {Seq{}};
        Step s;
        s.kind = Step::Kind::Check;
        s.labels = e.labels;
        return {Seq{s}};
    }
    case PathExpression::Kind::Test: {
        Step s;
        s.kind = Step::Kind::Check;
        s.test = e.test;
        return {Seq{s}};
    }
    case PathExpression::Kind::Edge:
        return {Seq{*edge_union(e)}};
    case PathExpression::Kind::Union: {
        if (auto s = edge_union(e)) return {Seq{*s}};
        std::vector<Seq> out;
        for (const auto& b : e.args) {
            auto part = expand(b);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
    case PathExpression::Kind::Concat: {
        std::vector<Seq> out{Seq{}};
        for (const auto& part : e.args) {
            auto alts = expand(part);
            std::vector<Seq> next;
            for (const auto& prefix : out)
                for (const auto& alt : alts) {
                    Seq s = prefix;
                    s.insert(s.end(), alt.begin(), alt.end());
                    next.push_back(std::move(s));
                }
            if (next.size() > kMaxAlternatives)
                throw UnsupportedPath("path '" + to_string(e) + "' expands into too many MATCH alternatives");
            out = std::move(next);
        }
        return out;
    }
    case PathExpression::Kind::Star: {
        auto s = edge_union(e.args.front());
        if (!s)
            throw UnsupportedPath("no Cypher pattern for '" + to_string(e) +
                                  "': a star must range over edges of a single direction");
        s->star = true;
        return {Seq{*s}};
    }
    }
    return {};
}

std::string literal(const Literal& v) {
    if (auto i = std::get_if<std::int64_t>(&v.value)) return std::to_string(*i);
    if (auto d = std::get_if<double>(&v.value)) {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, *d);
        std::string s(buf, res.ptr);
        if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
        return s;
    }
    std::string out = "'";
    for (char c : std::get<std::string>(v.value)) {
        if (c == '\'' || c == '\\') out += '\\';
        out += c;
    }
    return out + "'";
}

std::string op(CmpOp o) { return o == CmpOp::Ne ? "<>" : std::string(to_string(o)); }

std::string comparison(const std::string& owner, const DataTest& t) {
    return "coalesce(" + owner + "." + cypher_name(t.key) + " " + op(t.op) + " " + literal(t.value) + ", false)";
}

std::string node_test(const TestExpr& t, const std::string& v) {
    switch (t.kind) {
    case TestExpr::Kind::Data:
        return comparison(v, t.data);
    case TestExpr::Kind::Label:
        return t.label == kTop ? "true" : v + ":" + cypher_name(t.label);
    case TestExpr::Kind::And:
        return "(" + node_test(t.args[0], v) + " AND " + node_test(t.args[1], v) + ")";
    case TestExpr::Kind::Or:
        return "(" + node_test(t.args[0], v) + " OR " + node_test(t.args[1], v) + ")";
    case TestExpr::Kind::Not:
        return "NOT " + node_test(t.args[0], v);
    }
    return "true";
}

std::string pair_test(const TestExpr& t, const std::string& u, const std::string& v) {
    switch (t.kind) {
    case TestExpr::Kind::Data:
        return "EXISTS { MATCH (" + u + ")-[e]->(" + v + ") WHERE " + comparison("e", t.data) + " }";
    case TestExpr::Kind::Label:
        return "EXISTS { MATCH (" + u + ")-[:" + cypher_name(t.label) + "]->(" + v + ") }";
    case TestExpr::Kind::And:
        return "(" + pair_test(t.args[0], u, v) + " AND " + pair_test(t.args[1], u, v) + ")";
    case TestExpr::Kind::Or:
        return "(" + pair_test(t.args[0], u, v) + " OR " + pair_test(t.args[1], u, v) + ")";
    case TestExpr::Kind::Not:
        return "NOT " + pair_test(t.args[0], u, v);
    }
    return "true";
}

std::string label_union(const std::vector<std::string>& labels, const std::string& v) {
    if (std::find(labels.begin(), labels.end(), kTop) != labels.end()) return {};
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) out += (i ? " OR " : "") + v + ":" + cypher_name(labels[i]);
    return labels.size() > 1 ? "(" + out + ")" : out;
}

// One branch: every path atom already fixed to a single step sequence.
std::string emit_branch(const C2RPQ& q, const std::vector<const Seq*>& choice) {
    // Variables joined by step-free paths denote the same node.
    std::vector<std::string> order = q.variables();
    std::map<std::string, std::string> rep;
    for (const auto& v : order) rep[v] = v;
    std::function<std::string(const std::string&)> find = [&](const std::string& v) -> std::string {
        return rep[v] == v ? v : rep[v] = find(rep[v]);
    };
    std::size_t k = 0;
    for (const auto& a : q.atoms) {
        if (a.kind != Atom::Kind::Path) continue;
        const Seq& s = *choice[k++];
        bool moves = std::any_of(s.begin(), s.end(), [](const Step& st) { return st.kind == Step::Kind::Rel; });
        if (moves) continue;
        std::string x = find(a.vars[0]), y = find(a.vars[1]);
        if (x == y) continue;
        auto pos = [&](const std::string& v) { return std::find(order.begin(), order.end(), v) - order.begin(); };
        if (pos(x) < pos(y))
            rep[y] = x;
        else
            rep[x] = y;
    }
    auto name = [&](const std::string& v) { return cypher_name(find(v)); };

    std::set<std::string> used(order.begin(), order.end());
    std::size_t fresh = 0;
    auto fresh_var = [&]() {
        std::string v;
        do {
            v = "m" + std::to_string(fresh++);
        } while (used.count(v));
        used.insert(v);
        return v;
    };

    std::vector<std::string> patterns, conditions;
    std::set<std::string> bound;
    k = 0;
    for (const auto& a : q.atoms) {
        switch (a.kind) {
        case Atom::Kind::Concept:
            if (auto c = label_union(a.labels, name(a.vars[0])); !c.empty()) conditions.push_back(c);
            break;
        case Atom::Kind::Test:
            if (a.vars.size() == 1)
                conditions.push_back(node_test(a.test, name(a.vars[0])));
            else
                conditions.push_back(pair_test(a.test, name(a.vars[0]), name(a.vars[1])));
            break;
        case Atom::Kind::Path: {
            const Seq& s = *choice[k++];
            std::size_t last_rel = s.size();
            for (std::size_t i = 0; i < s.size(); ++i)
                if (s[i].kind == Step::Kind::Rel) last_rel = i;
            std::string at = name(a.vars[0]);
            for (std::size_t i = 0; i < s.size(); ++i) {
                const Step& st = s[i];
                if (st.kind == Step::Kind::Check) {
                    if (st.test)
                        conditions.push_back(node_test(*st.test, at));
                    else if (auto c = label_union(st.labels, at); !c.empty())
                        conditions.push_back(c);
                    continue;
                }
                std::string next = (i == last_rel) ? name(a.vars[1]) : fresh_var();
                std::string rel = "[:";
                for (std::size_t j = 0; j < st.types.size(); ++j) rel += (j ? "|" : "") + cypher_name(st.types[j]);
                if (st.star) rel += "*0..";
                rel += "]";
                patterns.push_back(st.inverse ? "(" + at + ")<-" + rel + "-(" + next + ")"
                                              : "(" + at + ")-" + rel + "->(" + next + ")");
                bound.insert(at);
                bound.insert(next);
                at = next;
            }
            break;
        }
        }
    }

    std::string out;
    std::set<std::string> seen_reps;
    for (const auto& v : order) {
        std::string r = name(v);
        if (!seen_reps.insert(r).second || bound.count(r)) continue;
        out += (out.empty() ? "" : " ") + std::string("MATCH (") + r + ")";
    }
    for (const auto& p : patterns) out += (out.empty() ? "" : " ") + std::string("MATCH ") + p;
    if (!conditions.empty()) {
        out += " WHERE ";
        for (std::size_t i = 0; i < conditions.size(); ++i) out += (i ? " AND " : "") + conditions[i];
    }
    out += " RETURN DISTINCT ";
    if (q.answer_vars.empty()) out += "true AS c0";
    for (std::size_t i = 0; i < q.answer_vars.size(); ++i)
        out += (i ? ", " : "") + name(q.answer_vars[i]) + " AS c" + std::to_string(i);
    return out;
}

}  // namespace

std::string cypher_name(const std::string& name) {
    bool plain = !name.empty() && (std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_') &&
                 std::all_of(name.begin(), name.end(),
                             [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
    if (plain) return name;
    std::string out = "`";
    for (char c : name) out += c == '`' ? std::string("``") : std::string(1, c);
    return out + "`";
}

CypherQuery emit_cypher(const UC2RPQ& u) {
    CypherQuery result;
    std::set<std::string> branches;
    for (const auto& member : u.members) {
        C2RPQ q = canonicalize(member);
        std::vector<std::vector<Seq>> alts;
        for (const auto& a : q.atoms)
            if (a.kind == Atom::Kind::Path) alts.push_back(expand(canonical(a.path)));
        std::size_t total = 1;
        for (const auto& a : alts) total *= a.size();
        if (total > kMaxAlternatives)
            throw UnsupportedPath("query '" + print_query(member) + "' expands into too many MATCH alternatives");
        if (total > 1)
            result.diagnostics.push_back("'" + print_query(member) + "' split into " + std::to_string(total) +
                                         " branches");
        std::vector<std::size_t> pick(alts.size(), 0);
        while (true) {
            std::vector<const Seq*> choice;
            for (std::size_t i = 0; i < alts.size(); ++i) choice.push_back(&alts[i][pick[i]]);
            branches.insert(emit_branch(q, choice));
            std::size_t i = 0;
            while (i < alts.size() && ++pick[i] == alts[i].size()) pick[i++] = 0;
            if (i == alts.size()) break;
        }
    }
    if (branches.empty()) {
        result.diagnostics.push_back("empty union; the query returns no rows");
        std::string ret = "MATCH (n) WHERE false RETURN DISTINCT ";
        if (u.arity == 0) ret += "true AS c0";
        for (std::size_t i = 0; i < u.arity; ++i) ret += (i ? ", " : "") + std::string("n AS c") + std::to_string(i);
        branches.insert(ret);
    }
    for (const auto& b : branches) result.text += (result.text.empty() ? "" : "UNION\n") + b + "\n";
    return result;
}

CypherQuery emit_cypher(const C2RPQ& q) {
    UC2RPQ u;
    u.arity = q.answer_vars.size();
    u.members.push_back(q);
    return emit_cypher(u);
}

}  // namespace navrw
