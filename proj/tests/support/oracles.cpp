#include "oracles.hpp"

#include <deque>

namespace navrw::testing {

namespace {

bool label_test(const std::vector<std::string>& labels, const Node& n) {
    for (const auto& l : labels)
        if (l == kTop || n.labels.count(l)) return true;
    return false;
}

bool test_holds(const TestExpr& t, const Node& n) {
    switch (t.kind) {
    case TestExpr::Kind::Label:
        return t.label == kTop || n.labels.count(t.label) > 0;
    case TestExpr::Kind::Data: {
        auto it = n.props.find(t.data.key);
        return it != n.props.end() && compare(it->second, t.data.op, t.data.value);
    }
    case TestExpr::Kind::And:
        return test_holds(t.args[0], n) && test_holds(t.args[1], n);
    case TestExpr::Kind::Or:
        return test_holds(t.args[0], n) || test_holds(t.args[1], n);
    case TestExpr::Kind::Not:
        return !test_holds(t.args[0], n);
    }
    return false;
}

// End nodes of the walks from `from` that match e.
std::set<std::size_t> ends(const PathExpression& e, std::size_t from, const PropertyGraph& g) {
    std::set<std::size_t> out;
    switch (e.kind) {
    case PathExpression::Kind::NodeTest:
        if (label_test(e.labels, g.node(from))) out.insert(from);
        break;
    case PathExpression::Kind::Test:
        if (test_holds(e.test, g.node(from))) out.insert(from);
        break;
    case PathExpression::Kind::Edge:
        for (const auto& edge : g.edges()) {
            if (edge.label != e.role.name) continue;
            if (!e.role.inverted && edge.src == from) out.insert(edge.dst);
            if (e.role.inverted && edge.dst == from) out.insert(edge.src);
        }
        break;
    case PathExpression::Kind::Concat: {
        std::set<std::size_t> cur{from};
        for (const auto& part : e.args) {
            std::set<std::size_t> next;
            for (auto v : cur) {
                auto step = ends(part, v, g);
                next.insert(step.begin(), step.end());
            }
            cur = std::move(next);
        }
        out = std::move(cur);
        break;
    }
    case PathExpression::Kind::Union:
        for (const auto& b : e.args) {
            auto part = ends(b, from, g);
            out.insert(part.begin(), part.end());
        }
        break;
    case PathExpression::Kind::Star: {
        out.insert(from);
        std::deque<std::size_t> todo{from};
        while (!todo.empty()) {
            std::size_t v = todo.front();
            todo.pop_front();
            for (auto w : ends(e.args.front(), v, g))
                if (out.insert(w).second) todo.push_back(w);
        }
        break;
    }
    }
    return out;
}

}  // namespace

PairSet walk_pairs(const PathExpression& e, const PropertyGraph& g) {
    PairSet out;
    for (std::size_t u = 0; u < g.size(); ++u)
        for (auto v : ends(e, u, g)) out.insert({g.node(u).id, g.node(v).id});
    return out;
}

}  // namespace navrw::testing
