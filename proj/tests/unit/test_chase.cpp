#include <doctest.h>

#include "navrw/chase.hpp"

using namespace navrw;

namespace {

TBox tbox(const char* text) { return normalize(parse_tbox(text)); }

PropertyGraph teacher_a() {
    PropertyGraph g;
    g.add_node("a", {"Teacher"});
    return g;
}

}  // namespace

TEST_CASE("one generating step") {
    ChasedGraph c = chase(teacher_a(), tbox("Teacher <= exists teaches . Student"), 1);
    REQUIRE(c.graph.size() == 2);
    auto child = c.graph.find("_:a/0");
    REQUIRE(child);
    CHECK(c.graph.node(*child).labels == std::set<std::string>{"Student"});
    CHECK(c.graph.has_edge(0, "teaches", *child));
    CHECK(c.is_anonymous(*child));
    CHECK(c.generation[*child] == 1);
}

TEST_CASE("depth zero only closes labels") {
    ChasedGraph c = chase(teacher_a(), tbox("Teacher <= exists teaches . Student\nTeacher <= Person"), 0);
    CHECK(c.graph.size() == 1);
    CHECK(c.graph.node(0).labels == std::set<std::string>{"Person", "Teacher"});
}

TEST_CASE("restricted: satisfied existentials add nothing") {
    PropertyGraph g = teacher_a();
    g.add_node("b", {"Student"});
    g.add_edge("a", "teaches", "b");
    CHECK(chase(g, tbox("Teacher <= exists teaches . Student"), 3).graph.size() == 2);
}

TEST_CASE("inverse roles, role inclusions and depth bound") {
    PropertyGraph g;
    g.add_node("a", {"A"});
    ChasedGraph c = chase(g, tbox("A <= exists inv(r) . A\nr <= s"), 3);
    CHECK(c.graph.size() == 4);
    auto child = c.graph.find("_:a/0");
    REQUIRE(child);
    CHECK(c.graph.has_edge(*child, "r", 0));
    CHECK(c.graph.has_edge(*child, "s", 0));
    CHECK(c.graph.find("_:a/0/0"));
}

TEST_CASE("labels flow back from anonymous elements") {
    ChasedGraph c = chase(teacher_a(), tbox("Teacher <= exists teaches . Student\nexists teaches . Student <= Busy"), 1);
    CHECK(c.graph.node(0).labels.count("Busy"));
}

TEST_CASE("certain answers") {
    TBox t = tbox("Teacher <= exists teaches . Student");
    CHECK(certain_answers(parse_query("q(x) :- teaches(x,y), Student(y)"), teacher_a(), t, 2) == AnswerSet{{"a"}});
    CHECK(certain_answers(parse_query("q(x) :- Student(x)"), teacher_a(), t, 2).empty());
    PropertyGraph g;
    g.add_node("u", {"B"});
    g.add_node("v");
    g.add_edge("u", "r", "v");
    C2RPQ q = parse_query("q(x) :- r(x,y)");
    CHECK(certain_answers(q, g, TBox{}, 2) == eval_query(q, g));
}
