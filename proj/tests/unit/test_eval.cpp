#include <doctest.h>

#include <sstream>

#include "generators.hpp"
#include "navrw/errors.hpp"
#include "navrw/eval.hpp"
#include "oracles.hpp"

using namespace navrw;

namespace {

C2RPQ q(const char* text) { return parse_query(text, QuerySyntax::Extended); }

}  // namespace

TEST_CASE("JSON lines loading") {
    PropertyGraph g = load_graph_jsonl_text(
        "{\"type\":\"node\",\"id\":\"a\",\"labels\":[\"Teacher\"],\"props\":{\"age\":42}}\n"
        "{\"type\":\"node\",\"id\":\"b\"}\n"
        "{\"type\":\"edge\",\"src\":\"a\",\"label\":\"teaches\",\"dst\":\"b\"}\n");
    CHECK(g.size() == 2);
    CHECK(g.edges().size() == 1);
    CHECK(eval_query(q("q(x) :- age=42(x)"), g) == AnswerSet{{"a"}});
    CHECK(eval_query(q("q(x) :- age>42(x)"), g).empty());
    CHECK(load_graph_jsonl_text(write_graph_jsonl(g)).edges().size() == 1);
}

TEST_CASE("loading errors") {
    CHECK_THROWS_AS(load_graph_jsonl_text("{\"type\":\"edge\",\"src\":\"a\",\"label\":\"r\",\"dst\":\"b\"}\n"),
                    GraphError);
    CHECK_THROWS_AS(load_graph_jsonl_text("{\"type\":\"node\",\"id\":\"a\"}\n{\"type\":\"node\",\"id\":\"a\"}\n"),
                    GraphError);
    CHECK_THROWS_AS(load_graph_jsonl_text("{\"type\":\"node\",\"id\":\"_:x\"}\n"), GraphError);
    try {
        load_graph_jsonl_text("{\"type\":\"node\",\"id\":\"a\"}\n{oops\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("CSV loading") {
    std::istringstream nodes("id,labels,props\na,Teacher;Person,\"{\"\"age\"\": 3}\"\nb,,\n");
    std::istringstream edges("src,label,dst\na,teaches,b\n");
    PropertyGraph g = load_graph_csv(nodes, edges);
    CHECK(g.size() == 2);
    CHECK(g.node(0).labels == std::set<std::string>{"Person", "Teacher"});
    CHECK(eval_query(q("q(x) :- age<4(x), teaches(x,y)"), g) == AnswerSet{{"a"}});
}

TEST_CASE("query evaluation") {
    PropertyGraph g;
    g.add_node("a", {"A"});
    g.add_node("b");
    CHECK(eval_query(q("q(x) :- A(x)"), g) == AnswerSet{{"a"}});
    g.add_edge("a", "r", "b");
    g.add_edge("b", "r", "a");
    CHECK(eval_query(q("q(x,y) :- r(x,y), r(y,x)"), g) == AnswerSet{{"a", "b"}, {"b", "a"}});
    CHECK(eval_query(q("q() :- r(x,x)"), g).empty());
    CHECK(eval_query(q("q() :- (r.r)(x,x)"), g) == AnswerSet{{}});
    C2RPQ free_var = q("q(x) :- A(x)");
    free_var.answer_vars.push_back("y");  // not in the body: ranges over all nodes
    CHECK(eval_query(free_var, g) == AnswerSet{{"a", "a"}, {"a", "b"}});
    CHECK(eval_query(q("q(x) :- A(x)"), PropertyGraph{}).empty());
}

TEST_CASE("data tests") {
    PropertyGraph g;
    g.add_node("a", {}, {{"age", Literal{std::int64_t{31}}}, {"name", Literal{std::string("ann")}}});
    g.add_node("b", {}, {{"age", Literal{29.5}}});
    g.add_node("c");
    g.add_edge("a", "knows", "b", {{"since", Literal{std::int64_t{2001}}}});
    CHECK(eval_query(q("q(x) :- age>30(x)"), g) == AnswerSet{{"a"}});
    CHECK(eval_query(q("q(x) :- age<30.0(x)"), g) == AnswerSet{{"b"}});
    CHECK(eval_query(q("q(x) :- name=\"ann\"(x)"), g) == AnswerSet{{"a"}});
    // An absent property makes every comparison false, negated or not.
    CHECK(eval_query(q("q(x) :- age!=1(x)"), g) == AnswerSet{{"a"}, {"b"}});
    CHECK(eval_query(q("q(x,y) :- since>=2000(x,y)"), g) == AnswerSet{{"a", "b"}});
    CHECK(eval_query(q("q(x,y) :- [:knows](x,y), knows(x,y)"), g) == AnswerSet{{"a", "b"}});
}

TEST_CASE("eval_path agrees with walk enumeration") {
    std::mt19937 rng(5);
    auto paths = testing::all_paths(4, 2, {"r0", "r1"}, {"L0", "L1"});
    for (int i = 0; i < 20; ++i) {
        PropertyGraph g = testing::random_graph(rng, 1 + i % 4, 2, 2);
        for (const auto& e : paths) {
            testing::PairSet got;
            for (const auto& m : eval_path(e, "x", "y", g)) got.insert({m.at("x"), m.at("y")});
            CHECK(got == testing::walk_pairs(e, g));
        }
    }
}

TEST_CASE("star is reflexive") {
    PropertyGraph g;
    g.add_node("a");
    g.add_node("b");
    g.add_edge("a", "r", "b");
    auto pairs = eval_path(PathExpression::star(PathExpression::edge({"r"})), "x", "y", g);
    CHECK(pairs.size() == 3);
    CHECK(eval_path(PathExpression::star(PathExpression::edge({"r"})), "x", "x", g).size() == 2);
}
