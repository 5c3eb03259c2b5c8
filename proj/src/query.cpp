#include "navrw/query.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "navrw/errors.hpp"

namespace navrw {

// ---------------------------------------------------------------------------
// Literals and tests

double Literal::as_double() const {
    if (auto i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
    if (auto d = std::get_if<double>(&value)) return *d;
    return 0.0;
}

std::string Literal::str() const {
    if (auto i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
    if (auto d = std::get_if<double>(&value)) {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, *d);
        std::string s(buf, res.ptr);
        if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
        return s;
    }
    const auto& s = std::get<std::string>(value);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string_view to_string(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    }
    return "=";
}

bool compare(const Literal& lhs, CmpOp op, const Literal& rhs) {
    int order = 0;
    if (lhs.is_numeric() && rhs.is_numeric()) {
        auto li = std::get_if<std::int64_t>(&lhs.value);
        auto ri = std::get_if<std::int64_t>(&rhs.value);
        if (li && ri) {
            order = *li < *ri ? -1 : (*li > *ri ? 1 : 0);
        } else {
            double a = lhs.as_double(), b = rhs.as_double();
            order = a < b ? -1 : (a > b ? 1 : 0);
        }
    } else if (!lhs.is_numeric() && !rhs.is_numeric()) {
        order = std::get<std::string>(lhs.value).compare(std::get<std::string>(rhs.value));
        order = order < 0 ? -1 : (order > 0 ? 1 : 0);
    } else {
        return op == CmpOp::Ne;
    }
    switch (op) {
    case CmpOp::Eq: return order == 0;
    case CmpOp::Ne: return order != 0;
    case CmpOp::Lt: return order < 0;
    case CmpOp::Le: return order <= 0;
    case CmpOp::Gt: return order > 0;
    case CmpOp::Ge: return order >= 0;
    }
    return false;
}

TestExpr TestExpr::data_test(DataTest t) {
    TestExpr e;
    e.kind = Kind::Data;
    e.data = std::move(t);
    return e;
}

TestExpr TestExpr::label_test(std::string label) {
    TestExpr e;
    e.kind = Kind::Label;
    e.label = std::move(label);
    return e;
}

TestExpr TestExpr::conj(TestExpr a, TestExpr b) {
    TestExpr e;
    e.kind = Kind::And;
    e.args = {std::move(a), std::move(b)};
    return e;
}

TestExpr TestExpr::disj(TestExpr a, TestExpr b) {
    TestExpr e;
    e.kind = Kind::Or;
    e.args = {std::move(a), std::move(b)};
    return e;
}

TestExpr TestExpr::negate(TestExpr a) {
    TestExpr e;
    e.kind = Kind::Not;
    e.args = {std::move(a)};
    return e;
}

namespace {

int test_precedence(const TestExpr& t) {
    switch (t.kind) {
    case TestExpr::Kind::Or: return 0;
    case TestExpr::Kind::And: return 1;
    default: return 2;
    }
}

std::string test_operand(const TestExpr& t, int min_prec) {
    std::string s = to_string(t);
    return test_precedence(t) < min_prec ? "(" + s + ")" : s;
}

}  // namespace

std::string to_string(const TestExpr& t) {
    switch (t.kind) {
    case TestExpr::Kind::Data:
        return t.data.key + std::string(to_string(t.data.op)) + t.data.value.str();
    case TestExpr::Kind::Label:
        return ":" + t.label;
    case TestExpr::Kind::And:
        return test_operand(t.args[0], 1) + " & " + test_operand(t.args[1], 1);
    case TestExpr::Kind::Or:
        return test_operand(t.args[0], 0) + " | " + test_operand(t.args[1], 0);
    case TestExpr::Kind::Not:
        return "!" + test_operand(t.args[0], 2);
    }
    return {};
}

// ---------------------------------------------------------------------------
// Path expressions

PathExpression PathExpression::node_test(std::vector<std::string> labels) {
    PathExpression e;
    e.kind = Kind::NodeTest;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    if (std::find(labels.begin(), labels.end(), kTop) != labels.end()) labels = {std::string(kTop)};
    e.labels = std::move(labels);
    return e;
}

PathExpression PathExpression::epsilon() { return node_test({std::string(kTop)}); }

PathExpression PathExpression::edge(Role role) {
    PathExpression e;
    e.kind = Kind::Edge;
    e.role = std::move(role);
    return e;
}

PathExpression PathExpression::concat(std::vector<PathExpression> parts) {
    if (parts.empty()) return epsilon();
    if (parts.size() == 1) return std::move(parts.front());
    PathExpression e;
    e.kind = Kind::Concat;
    e.args = std::move(parts);
    return e;
}

PathExpression PathExpression::concat(PathExpression a, PathExpression b) {
    return concat(std::vector<PathExpression>{std::move(a), std::move(b)});
}

PathExpression PathExpression::alt(std::vector<PathExpression> branches) {
    if (branches.size() == 1) return std::move(branches.front());
    PathExpression e;
    e.kind = Kind::Union;
    e.args = std::move(branches);
    return e;
}

PathExpression PathExpression::alt(PathExpression a, PathExpression b) {
    return alt(std::vector<PathExpression>{std::move(a), std::move(b)});
}

PathExpression PathExpression::star(PathExpression inner) {
    PathExpression e;
    e.kind = Kind::Star;
    e.args.push_back(std::move(inner));
    return e;
}

PathExpression PathExpression::filter(TestExpr test) {
    PathExpression e;
    e.kind = Kind::Test;
    e.test = std::move(test);
    return e;
}

bool PathExpression::is_epsilon() const {
    return kind == Kind::NodeTest && labels.size() == 1 && labels.front() == kTop;
}

bool operator==(const PathExpression& a, const PathExpression& b) {
    return to_string(canonical(a)) == to_string(canonical(b));
}

namespace {

int path_precedence(const PathExpression& e) {
    switch (e.kind) {
    case PathExpression::Kind::Union: return 0;
    case PathExpression::Kind::Concat: return 1;
    default: return 2;
    }
}

std::string path_operand(const PathExpression& e, int min_prec) {
    std::string s = to_string(e);
    return path_precedence(e) < min_prec ? "(" + s + ")" : s;
}

}  // namespace

std::string to_string(const PathExpression& e) {
    switch (e.kind) {
    case PathExpression::Kind::NodeTest: {
        std::string out = "<";
        for (std::size_t i = 0; i < e.labels.size(); ++i) {
            if (i) out += "|";
            out += e.labels[i];
        }
        return out + ">";
    }
    case PathExpression::Kind::Edge:
        return e.role.str();
    case PathExpression::Kind::Concat: {
        std::string out;
        for (std::size_t i = 0; i < e.args.size(); ++i) {
            if (i) out += ".";
            out += path_operand(e.args[i], 2);
        }
        return out;
    }
    case PathExpression::Kind::Union: {
        std::string out;
        for (std::size_t i = 0; i < e.args.size(); ++i) {
            if (i) out += "|";
            out += path_operand(e.args[i], 1);
        }
        return out;
    }
    case PathExpression::Kind::Star:
        return path_operand(e.args.front(), 2) + "*";
    case PathExpression::Kind::Test:
        return "[" + to_string(e.test) + "]";
    }
    return {};
}

PathExpression canonical(const PathExpression& e) {
    using K = PathExpression::Kind;
    switch (e.kind) {
    case K::NodeTest:
        return PathExpression::node_test(e.labels);
    case K::Edge:
    case K::Test:
        return e;
    case K::Concat: {
        std::vector<PathExpression> parts;
        for (const auto& a : e.args) {
            PathExpression c = canonical(a);
            if (c.is_epsilon()) continue;
            if (c.kind == K::Concat)
                parts.insert(parts.end(), c.args.begin(), c.args.end());
            else
                parts.push_back(std::move(c));
        }
        return PathExpression::concat(std::move(parts));
    }
    case K::Union: {
        std::vector<PathExpression> flat;
        for (const auto& a : e.args) {
            PathExpression c = canonical(a);
            if (c.kind == K::Union)
                flat.insert(flat.end(), c.args.begin(), c.args.end());
            else
                flat.push_back(std::move(c));
        }
        // Label tests collapse into one node test.
        std::vector<std::string> labels;
        std::vector<PathExpression> rest;
        bool has_tests = false;
        for (auto& b : flat) {
            if (b.kind == K::NodeTest) {
                has_tests = true;
                labels.insert(labels.end(), b.labels.begin(), b.labels.end());
            } else {
                rest.push_back(std::move(b));
            }
        }
        if (has_tests) rest.push_back(PathExpression::node_test(std::move(labels)));
        std::map<std::string, PathExpression> by_text;
        for (auto& b : rest) by_text.emplace(to_string(b), std::move(b));
        std::vector<PathExpression> branches;
        for (auto& [_, b] : by_text) branches.push_back(std::move(b));
        return PathExpression::alt(std::move(branches));
    }
    case K::Star: {
        PathExpression inner = canonical(e.args.front());
        if (inner.kind == K::Star) return inner;
        if (inner.kind == K::NodeTest || inner.kind == K::Test) return PathExpression::epsilon();
        if (inner.kind == K::Union) {
            // Empty-walk branches are redundant under a star.
            std::vector<PathExpression> branches;
            for (auto& b : inner.args)
                if (b.kind != K::NodeTest && b.kind != K::Test) branches.push_back(b.kind == K::Star ? b.args.front() : b);
            if (branches.empty()) return PathExpression::epsilon();
            inner = canonical(PathExpression::alt(std::move(branches)));
        }
        return PathExpression::star(std::move(inner));
    }
    }
    return e;
}

PathExpression inverse(const PathExpression& e) {
    using K = PathExpression::Kind;
    switch (e.kind) {
    case K::NodeTest:
    case K::Test:
        return e;
    case K::Edge:
        return PathExpression::edge(e.role.inverse());
    case K::Concat: {
        std::vector<PathExpression> parts;
        for (auto it = e.args.rbegin(); it != e.args.rend(); ++it) parts.push_back(inverse(*it));
        return PathExpression::concat(std::move(parts));
    }
    case K::Union: {
        std::vector<PathExpression> branches;
        for (const auto& a : e.args) branches.push_back(inverse(a));
        return PathExpression::alt(std::move(branches));
    }
    case K::Star:
        return PathExpression::star(inverse(e.args.front()));
    }
    return e;
}

// ---------------------------------------------------------------------------
// Atoms and queries

Atom Atom::concept_atom(std::vector<std::string> labels, std::string var) {
    Atom a;
    a.kind = Kind::Concept;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    if (std::find(labels.begin(), labels.end(), kTop) != labels.end()) labels = {std::string(kTop)};
    a.labels = std::move(labels);
    a.vars = {std::move(var)};
    return a;
}

Atom Atom::path_atom(PathExpression path, std::string src, std::string dst) {
    Atom a;
    a.kind = Kind::Path;
    a.path = std::move(path);
    a.vars = {std::move(src), std::move(dst)};
    return a;
}

Atom Atom::test_atom(TestExpr test, std::vector<std::string> vars) {
    Atom a;
    a.kind = Kind::Test;
    a.test = std::move(test);
    a.vars = std::move(vars);
    return a;
}

namespace {

std::string args_str(const std::vector<std::string>& vars) {
    std::string out = "(";
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (i) out += ",";
        out += vars[i];
    }
    return out + ")";
}

}  // namespace

std::string to_string(const Atom& a) {
    switch (a.kind) {
    case Atom::Kind::Concept:
        if (a.labels.size() == 1) return a.labels.front() + args_str(a.vars);
        {
            std::string out = "(";
            for (std::size_t i = 0; i < a.labels.size(); ++i) {
                if (i) out += "|";
                out += a.labels[i];
            }
            return out + ")" + args_str(a.vars);
        }
    case Atom::Kind::Path:
        if (a.path.kind == PathExpression::Kind::Edge) return a.path.role.str() + args_str(a.vars);
        return "(" + to_string(a.path) + ")" + args_str(a.vars);
    case Atom::Kind::Test:
        if (a.test.kind == TestExpr::Kind::Data) return to_string(a.test) + args_str(a.vars);
        return "[" + to_string(a.test) + "]" + args_str(a.vars);
    }
    return {};
}

std::vector<std::string> C2RPQ::variables() const {
    std::vector<std::string> out;
    auto push = [&](const std::string& v) {
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    };
    for (const auto& v : answer_vars) push(v);
    for (const auto& a : atoms)
        for (const auto& v : a.vars) push(v);
    return out;
}

bool C2RPQ::is_ncq() const {
    return std::all_of(atoms.begin(), atoms.end(), [](const Atom& a) {
        return a.kind != Atom::Kind::Path || a.path.kind == PathExpression::Kind::Edge;
    });
}

std::string print_query(const C2RPQ& q) {
    std::string out = q.head + args_str(q.answer_vars) + " :- ";
    for (std::size_t i = 0; i < q.atoms.size(); ++i) {
        if (i) out += ", ";
        out += to_string(q.atoms[i]);
    }
    return out;
}

std::string print_union(const UC2RPQ& u) {
    std::string out;
    for (const auto& q : u.members) out += print_query(q) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class QueryParser {
public:
    QueryParser(std::string_view text, QuerySyntax syntax, int line)
        : text_(text), syntax_(syntax), line_(line) {}

    C2RPQ parse() {
        C2RPQ q;
        skip();
        q.head = identifier("query name");
        q.answer_vars = arg_list(true);
        skip();
        if (text_.substr(pos_, 2) != ":-") fail("expected ':-'");
        pos_ += 2;
        do {
            q.atoms.push_back(atom());
            skip();
        } while (accept(','));
        skip();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return q;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        std::size_t at = std::min(pos_, text_.size());
        std::size_t line_start = text_.rfind('\n', at == 0 ? 0 : at - 1);
        line_start = (line_start == std::string_view::npos || line_start >= at) ? 0 : line_start + 1;
        int line = line_ + static_cast<int>(std::count(text_.begin(), text_.begin() + at, '\n'));
        throw ParseError(msg, line, static_cast<int>(at - line_start) + 1);
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    std::string identifier(const char* what) {
        skip();
        if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail(std::string("expected ") + what);
        std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    std::vector<std::string> arg_list(bool allow_empty) {
        expect('(');
        std::vector<std::string> vars;
        if (allow_empty && accept(')')) return vars;
        do {
            vars.push_back(identifier("variable"));
        } while (accept(','));
        expect(')');
        return vars;
    }

    std::optional<CmpOp> comparison() {
        skip();
        auto two = text_.substr(pos_, 2);
        if (two == "!=") { pos_ += 2; return CmpOp::Ne; }
        if (two == "<=") { pos_ += 2; return CmpOp::Le; }
        if (two == ">=") { pos_ += 2; return CmpOp::Ge; }
        if (pos_ < text_.size()) {
            switch (text_[pos_]) {
            case '=': ++pos_; return CmpOp::Eq;
            case '<': ++pos_; return CmpOp::Lt;
            case '>': ++pos_; return CmpOp::Gt;
            default: break;
            }
        }
        return std::nullopt;
    }

    Literal literal() {
        skip();
        if (pos_ < text_.size() && text_[pos_] == '"') {
            ++pos_;
            std::string s;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
                s += text_[pos_++];
            }
            if (pos_ >= text_.size()) fail("unterminated string literal");
            ++pos_;
            return Literal{s};
        }
        std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        bool decimal = false;
        if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
            std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
            decimal = true;
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        std::string num(text_.substr(start, pos_ - start));
        if (num.empty() || num == "-" || num == "+") {
            pos_ = start;
            fail("expected literal");
        }
        if (num[0] == '+') num.erase(0, 1);
        if (decimal) return Literal{std::stod(num)};
        std::int64_t v = 0;
        auto res = std::from_chars(num.data(), num.data() + num.size(), v);
        if (res.ec != std::errc()) fail("integer literal out of range");
        return Literal{v};
    }

    DataTest data_test(std::string key) {
        auto op = comparison();
        if (!op) fail("expected comparison operator");
        DataTest t{std::move(key), *op, literal()};
        if (*op != CmpOp::Eq && *op != CmpOp::Ne && !t.value.is_numeric())
            fail("ordered comparison requires a numeric literal");
        return t;
    }

    TestExpr test_or() {
        TestExpr t = test_and();
        while (accept('|')) t = TestExpr::disj(std::move(t), test_and());
        return t;
    }

    TestExpr test_and() {
        TestExpr t = test_unary();
        while (accept('&')) t = TestExpr::conj(std::move(t), test_unary());
        return t;
    }

    TestExpr test_unary() {
        if (peek() == '!' && text_.substr(pos_, 2) != "!=") {
            ++pos_;
            return TestExpr::negate(test_unary());
        }
        if (accept('(')) {
            TestExpr t = test_or();
            expect(')');
            return t;
        }
        if (accept(':')) return TestExpr::label_test(identifier("label"));
        std::string key = identifier("property key");
        return TestExpr::data_test(data_test(std::move(key)));
    }

    // path := seq ('|' seq)* ; seq := post ('.' post)* ; post := prim '*'*
    PathExpression path() {
        std::vector<PathExpression> branches{path_seq()};
        while (accept('|')) branches.push_back(path_seq());
        return PathExpression::alt(std::move(branches));
    }

    PathExpression path_seq() {
        std::vector<PathExpression> parts{path_post()};
        while (accept('.')) parts.push_back(path_post());
        return PathExpression::concat(std::move(parts));
    }

    PathExpression path_post() {
        PathExpression p = path_primary();
        while (accept('*')) p = PathExpression::star(std::move(p));
        return p;
    }

    PathExpression path_primary() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            PathExpression p = path();
            expect(')');
            return p;
        }
        if (c == '<') {
            ++pos_;
            std::vector<std::string> labels{identifier("label")};
            while (accept('|')) labels.push_back(identifier("label"));
            expect('>');
            return PathExpression::node_test(std::move(labels));
        }
        if (c == '[') {
            ++pos_;
            TestExpr t = test_or();
            expect(']');
            return PathExpression::filter(std::move(t));
        }
        return PathExpression::edge(role());
    }

    Role role() {
        std::string name = identifier("role or concept name");
        if (name == "inv" && peek() == '(') {
            ++pos_;
            Role inner = role();
            expect(')');
            return inner.inverse();
        }
        return Role{name, false};
    }

    static bool is_label_union(const PathExpression& p) {
        if (p.kind == PathExpression::Kind::Edge) return !p.role.inverted;
        if (p.kind == PathExpression::Kind::NodeTest) return true;
        if (p.kind == PathExpression::Kind::Union)
            return std::all_of(p.args.begin(), p.args.end(), is_label_union);
        return false;
    }

    static void collect_labels(const PathExpression& p, std::vector<std::string>& out) {
        if (p.kind == PathExpression::Kind::Edge) out.push_back(p.role.name);
        if (p.kind == PathExpression::Kind::NodeTest) out.insert(out.end(), p.labels.begin(), p.labels.end());
        for (const auto& a : p.args) collect_labels(a, out);
    }

    Atom atom() {
        skip();
        std::size_t start = pos_;
        if (accept('[')) {
            TestExpr t = test_or();
            expect(']');
            auto vars = arg_list(false);
            if (vars.size() > 2) fail("a test takes one or two variables");
            return Atom::test_atom(std::move(t), std::move(vars));
        }
        // `key OP literal (vars)`
        if (ident_start(peek())) {
            std::size_t save = pos_;
            std::string key = identifier("name");
            skip();
            auto two = text_.substr(pos_, 2);
            bool is_test = key != "inv" && pos_ < text_.size() &&
                           (text_[pos_] == '=' || text_[pos_] == '<' || text_[pos_] == '>' || two == "!=");
            if (is_test) {
                DataTest t = data_test(std::move(key));
                auto vars = arg_list(false);
                if (vars.size() > 2) fail("a test takes one or two variables");
                return Atom::test_atom(TestExpr::data_test(std::move(t)), std::move(vars));
            }
            pos_ = save;
        }
        PathExpression p = path();
        std::size_t args_pos = pos_;
        auto vars = arg_list(false);
        if (vars.size() == 1) {
            if (!is_label_union(p)) {
                pos_ = start;
                fail("a unary atom must be a concept name or a union of concept names");
            }
            std::vector<std::string> labels;
            collect_labels(p, labels);
            if (std::find(labels.begin(), labels.end(), "inv") != labels.end()) {
                pos_ = start;
                fail("'inv' is reserved for inverse roles");
            }
            return Atom::concept_atom(std::move(labels), vars.front());
        }
        if (vars.size() != 2) {
            pos_ = args_pos;
            fail("a path atom takes exactly two variables");
        }
        if (syntax_ == QuerySyntax::Input && p.kind != PathExpression::Kind::Edge) {
            pos_ = start;
            fail("navigational path operators are only accepted in extended syntax");
        }
        return Atom::path_atom(std::move(p), vars[0], vars[1]);
    }

    std::string_view text_;
    QuerySyntax syntax_;
    int line_;
    std::size_t pos_ = 0;
};

void check_ncq(const C2RPQ& q, int line) {
    std::set<std::string> body_vars;
    for (const auto& a : q.atoms) body_vars.insert(a.vars.begin(), a.vars.end());
    for (const auto& v : q.answer_vars)
        if (!body_vars.count(v)) throw ParseError("answer variable '" + v + "' does not occur in the body", line, 0);

    // Connectivity over concept and path atoms; test atoms must stay inside.
    std::map<std::string, std::string> parent;
    std::function<std::string(const std::string&)> find = [&](const std::string& v) -> std::string {
        auto it = parent.find(v);
        if (it == parent.end() || it->second == v) return parent[v] = v;
        return it->second = find(it->second);
    };
    for (const auto& a : q.atoms) {
        if (a.kind == Atom::Kind::Test) continue;
        for (const auto& v : a.vars) find(v);
        if (a.vars.size() == 2) parent[find(a.vars[0])] = find(a.vars[1]);
    }
    std::set<std::string> roots;
    for (const auto& v : body_vars) {
        if (!parent.count(v)) throw ParseError("variable '" + v + "' occurs only in data tests", line, 0);
        roots.insert(find(v));
    }
    if (roots.size() > 1) throw ParseError("query body is not connected", line, 0);
}

}  // namespace

C2RPQ parse_query(std::string_view text, QuerySyntax syntax) {
    // Allow a single query spread over a file with comments and blank lines.
    std::string joined;
    int first_line = 0, line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        bool blank = std::all_of(line.begin(), line.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
        if (!blank && !first_line) first_line = line_no;
        if (first_line) joined += std::string(blank ? std::string_view{} : line) + "\n";
        if (end == text.size()) break;
        start = end + 1;
    }
    while (!joined.empty() && joined.back() == '\n') joined.pop_back();
    if (joined.empty()) throw ParseError("empty query", 1, 1);
    C2RPQ q = QueryParser(joined, syntax, first_line).parse();
    if (syntax == QuerySyntax::Input) {
        check_ncq(q, first_line);
    } else {
        std::set<std::string> body_vars;
        for (const auto& a : q.atoms) body_vars.insert(a.vars.begin(), a.vars.end());
        for (const auto& v : q.answer_vars)
            if (!body_vars.count(v))
                throw ParseError("answer variable '" + v + "' does not occur in the body", first_line, 0);
    }
    return q;
}

UC2RPQ parse_union(std::string_view text, QuerySyntax syntax) {
    UC2RPQ u;
    int line_no = 0;
    std::size_t start = 0;
    bool first = true;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        bool blank = std::all_of(line.begin(), line.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
        if (!blank) {
            C2RPQ q = QueryParser(line, syntax, line_no).parse();
            if (syntax == QuerySyntax::Input) check_ncq(q, line_no);
            if (first) {
                u.arity = q.answer_vars.size();
                first = false;
            } else if (q.answer_vars.size() != u.arity) {
                throw ParseError("all members of a union must have the same answer arity", line_no, 0);
            }
            u.members.push_back(std::move(q));
        }
        if (end == text.size()) break;
        start = end + 1;
    }
    return u;
}

// ---------------------------------------------------------------------------
// Canonicalization

namespace {

std::size_t occurrences(const C2RPQ& q, const std::string& v) {
    std::size_t n = std::count(q.answer_vars.begin(), q.answer_vars.end(), v);
    for (const auto& a : q.atoms) n += std::count(a.vars.begin(), a.vars.end(), v);
    return n;
}

C2RPQ rename(const C2RPQ& q, const std::map<std::string, std::string>& names) {
    C2RPQ out = q;
    auto map = [&](std::string& v) {
        if (auto it = names.find(v); it != names.end()) v = it->second;
    };
    for (auto& v : out.answer_vars) map(v);
    for (auto& a : out.atoms)
        for (auto& v : a.vars) map(v);
    return out;
}

std::vector<Atom> sorted_atoms(std::vector<Atom> atoms) {
    std::map<std::string, Atom> by_text;
    for (auto& a : atoms) by_text.emplace(to_string(a), std::move(a));
    std::vector<Atom> out;
    for (auto& [_, a] : by_text) out.push_back(std::move(a));
    return out;
}

}  // namespace

C2RPQ canonicalize(const C2RPQ& q) {
    C2RPQ out;
    out.head = q.head;
    out.answer_vars = q.answer_vars;
    for (const auto& a : q.atoms) {
        Atom c = a;
        if (c.kind == Atom::Kind::Path) {
            c.path = canonical(c.path);
            // A node test whose far end is otherwise unused is a concept atom.
            if (c.path.kind == PathExpression::Kind::NodeTest) {
                const std::string& src = c.vars[0];
                const std::string& dst = c.vars[1];
                if (src == dst || occurrences(q, dst) == 1)
                    c = Atom::concept_atom(c.path.labels, src);
                else if (occurrences(q, src) == 1)
                    c = Atom::concept_atom(c.path.labels, dst);
            }
        } else if (c.kind == Atom::Kind::Concept) {
            c = Atom::concept_atom(c.labels, c.vars.front());
        }
        out.atoms.push_back(std::move(c));
    }
    // Drop trivial top atoms on variables that occur elsewhere.
    std::vector<Atom> kept;
    for (std::size_t i = 0; i < out.atoms.size(); ++i) {
        const Atom& a = out.atoms[i];
        bool trivial = a.kind == Atom::Kind::Concept && a.labels.size() == 1 && a.labels.front() == kTop;
        if (trivial) {
            bool elsewhere = false;
            for (std::size_t j = 0; j < out.atoms.size() && !elsewhere; ++j) {
                if (j == i) continue;
                const Atom& b = out.atoms[j];
                bool b_trivial = b.kind == Atom::Kind::Concept && b.labels.front() == kTop;
                if (b_trivial && j > i) continue;
                if (std::count(b.vars.begin(), b.vars.end(), a.vars[0])) elsewhere = true;
            }
            if (elsewhere) continue;
        }
        kept.push_back(a);
    }
    out.atoms = sorted_atoms(std::move(kept));
    return out;
}

std::string canonical_key(const C2RPQ& q_in) {
    C2RPQ q = canonicalize(q_in);
    std::map<std::string, std::string> answer_names;
    for (std::size_t i = 0; i < q.answer_vars.size(); ++i)
        answer_names.emplace(q.answer_vars[i], "?a" + std::to_string(i));

    std::vector<std::string> others;
    for (const auto& v : q.variables())
        if (!answer_names.count(v)) others.push_back(v);

    // Colour refinement: each variable is described by the atoms around it.
    std::map<std::string, std::string> colour;
    for (const auto& v : others) colour[v] = "n";
    for (const auto& [v, n] : answer_names) colour[v] = n;
    for (int round = 0; round < 3; ++round) {
        std::map<std::string, std::string> next;
        for (const auto& v : others) {
            std::vector<std::string> sigs;
            for (const auto& a : q.atoms) {
                if (!std::count(a.vars.begin(), a.vars.end(), v)) continue;
                Atom b = a;
                for (auto& w : b.vars) w = (w == v) ? "@" : colour[w];
                sigs.push_back(to_string(b));
            }
            std::sort(sigs.begin(), sigs.end());
            std::string c = colour[v] + "{";
            for (const auto& s : sigs) c += s + ";";
            next[v] = c + "}";
        }
        for (const auto& [v, c] : next) colour[v] = c;
    }
    std::stable_sort(others.begin(), others.end(),
                     [&](const std::string& a, const std::string& b) { return colour[a] < colour[b]; });

    // Break ties by trying every order inside each colour class, while cheap.
    std::vector<std::pair<std::size_t, std::size_t>> classes;
    std::size_t permutations = 1;
    for (std::size_t i = 0; i < others.size();) {
        std::size_t j = i;
        while (j < others.size() && colour[others[j]] == colour[others[i]]) ++j;
        for (std::size_t k = 2; k <= j - i; ++k) permutations *= k;
        classes.push_back({i, j});
        i = j;
    }
    auto render = [&](const std::vector<std::string>& order) {
        std::map<std::string, std::string> names = answer_names;
        for (std::size_t i = 0; i < order.size(); ++i) names[order[i]] = "?v" + std::to_string(i);
        C2RPQ r = rename(q, names);
        r.head = "q";
        r.atoms = sorted_atoms(std::move(r.atoms));
        return print_query(r);
    };
    if (permutations > 720) return render(others);

    std::string best;
    std::vector<std::string> order = others;
    std::function<void(std::size_t)> search = [&](std::size_t c) {
        if (c == classes.size()) {
            std::string s = render(order);
            if (best.empty() || s < best) best = s;
            return;
        }
        auto [lo, hi] = classes[c];
        std::sort(order.begin() + lo, order.begin() + hi);
        do {
            search(c + 1);
        } while (std::next_permutation(order.begin() + lo, order.begin() + hi));
    };
    search(0);
    return best;
}

// ---------------------------------------------------------------------------
// Containment

namespace {

class HomSearch {
public:
    HomSearch(const C2RPQ& target, const C2RPQ& source) : target_(target), source_(source) {
        for (const auto& a : target_.atoms) {
            if (a.kind == Atom::Kind::Path) {
                target_paths_.push_back(to_string(canonical(a.path)));
                target_inv_paths_.push_back(to_string(canonical(inverse(a.path))));
            } else {
                target_paths_.emplace_back();
                target_inv_paths_.emplace_back();
            }
            target_texts_.push_back(a.kind == Atom::Kind::Test ? to_string(a.test) : std::string());
        }
        for (const auto& a : source_.atoms) {
            bool trivial = a.kind == Atom::Kind::Concept && a.labels.front() == kTop;
            if (!trivial) pending_.push_back(&a);
        }
        // Most constrained first: path atoms, then tests, then concepts.
        std::stable_sort(pending_.begin(), pending_.end(), [](const Atom* a, const Atom* b) {
            auto rank = [](const Atom* x) { return x->kind == Atom::Kind::Path ? 0 : (x->kind == Atom::Kind::Test ? 1 : 2); };
            return rank(a) < rank(b);
        });
    }

    bool run() {
        for (std::size_t i = 0; i < source_.answer_vars.size(); ++i)
            if (!bind(source_.answer_vars[i], target_.answer_vars[i])) return false;
        return search(0);
    }

private:
    bool bind(const std::string& from, const std::string& to) {
        auto [it, inserted] = map_.emplace(from, to);
        return inserted || it->second == to;
    }

    bool try_vars(const std::vector<std::string>& from, const std::vector<std::string>& to, std::size_t next) {
        if (from.size() != to.size()) return false;
        auto saved = map_;
        bool ok = true;
        for (std::size_t i = 0; i < from.size() && ok; ++i) ok = bind(from[i], to[i]);
        if (ok && search(next)) return true;
        map_ = std::move(saved);
        return false;
    }

    bool search(std::size_t next) {
        if (next == pending_.size()) return true;
        const Atom& a = *pending_[next];
        std::string path_text, test_text;
        if (a.kind == Atom::Kind::Path) path_text = to_string(canonical(a.path));
        if (a.kind == Atom::Kind::Test) test_text = to_string(a.test);
        for (std::size_t i = 0; i < target_.atoms.size(); ++i) {
            const Atom& b = target_.atoms[i];
            if (b.kind != a.kind) continue;
            switch (a.kind) {
            case Atom::Kind::Concept:
                if (std::includes(a.labels.begin(), a.labels.end(), b.labels.begin(), b.labels.end()) &&
                    try_vars(a.vars, b.vars, next + 1))
                    return true;
                break;
            case Atom::Kind::Path:
                if (target_paths_[i] == path_text && try_vars(a.vars, b.vars, next + 1)) return true;
                if (target_inv_paths_[i] == path_text &&
                    try_vars(a.vars, {b.vars[1], b.vars[0]}, next + 1))
                    return true;
                break;
            case Atom::Kind::Test:
                if (target_texts_[i] == test_text && try_vars(a.vars, b.vars, next + 1)) return true;
                break;
            }
        }
        return false;
    }

    const C2RPQ& target_;
    const C2RPQ& source_;
    std::vector<std::string> target_paths_, target_inv_paths_, target_texts_;
    std::vector<const Atom*> pending_;
    std::map<std::string, std::string> map_;
};

}  // namespace

bool contains_structurally(const C2RPQ& q, const C2RPQ& q2) {
    if (q.answer_vars.size() != q2.answer_vars.size())
        throw Error("containment check between queries of different arity");
    return HomSearch(q, q2).run();
}

// ---------------------------------------------------------------------------
// Rewriting sets

UC2RPQ RewritingSet::to_union() const {
    std::vector<std::pair<std::string, C2RPQ>> sorted;
    for (const auto& q : queries_) sorted.emplace_back(print_query(q), q);
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    UC2RPQ u;
    u.arity = arity_;
    for (auto& [_, q] : sorted) u.members.push_back(std::move(q));
    return u;
}

RewritingSet add_subseteq(const RewritingSet& set, const C2RPQ& q) {
    if (!set.empty() && q.answer_vars.size() != set.arity_)
        throw Error("query arity does not match the rewriting set");
    for (const auto& member : set.queries_)
        if (contains_structurally(q, member)) return set;
    RewritingSet out(q.answer_vars.size());
    for (const auto& member : set.queries_)
        if (!contains_structurally(member, q)) out.queries_.push_back(member);
    out.queries_.push_back(q);
    return out;
}

RewritingSet add_unpruned(const RewritingSet& set, const C2RPQ& q) {
    if (!set.empty() && q.answer_vars.size() != set.arity_)
        throw Error("query arity does not match the rewriting set");
    std::string key = canonical_key(q);
    for (const auto& member : set.queries_)
        if (canonical_key(member) == key) return set;
    RewritingSet out = set;
    out.arity_ = q.answer_vars.size();
    out.queries_.push_back(q);
    return out;
}

// ---------------------------------------------------------------------------
// Role substitution

namespace {

PathExpression substitute(const PathExpression& e,
                          const std::function<std::optional<PathExpression>(const Role&)>& replacement) {
    if (e.kind == PathExpression::Kind::Edge) {
        if (auto r = replacement(Role{e.role.name, false})) return e.role.inverted ? inverse(*r) : *r;
        return e;
    }
    PathExpression out = e;
    for (auto& a : out.args) a = substitute(a, replacement);
    return out;
}

}  // namespace

C2RPQ substitute_roles(const C2RPQ& q,
                       const std::function<std::optional<PathExpression>(const Role&)>& replacement) {
    C2RPQ out = q;
    for (auto& a : out.atoms)
        if (a.kind == Atom::Kind::Path) a.path = substitute(a.path, replacement);
    return out;
}

C2RPQ substitute_role(const C2RPQ& q, const Role& r, const PathExpression& e) {
    Role base{r.name, false};
    PathExpression forward = r.inverted ? inverse(e) : e;
    return substitute_roles(q, [&](const Role& role) -> std::optional<PathExpression> {
        if (role == base) return forward;
        return std::nullopt;
    });
}

}  // namespace navrw
