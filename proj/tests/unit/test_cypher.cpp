#include <doctest.h>

#include "navrw/cypher.hpp"
#include "navrw/errors.hpp"

using namespace navrw;

namespace {

std::string emit(const char* text) { return emit_cypher(parse_union(text)).text; }

}  // namespace

TEST_CASE("translation examples") {
    CHECK(emit("q(x) :- Teacher(x)") == "MATCH (x) WHERE x:Teacher RETURN DISTINCT x AS c0\n");
    CHECK(emit("q(x,y) :- (teaches|mentors)(x,y)") ==
          "MATCH (x)-[:mentors|teaches]->(y) RETURN DISTINCT x AS c0, y AS c1\n");
    CHECK(emit("q(x,y) :- (partOf*.<Region>)(x,y)") ==
          "MATCH (x)-[:partOf*0..]->(y) WHERE y:Region RETURN DISTINCT x AS c0, y AS c1\n");
}

TEST_CASE("inverse edges, chains and concept unions") {
    CHECK(emit("q(x,y) :- inv(r)(x,y)") == "MATCH (x)<-[:r]-(y) RETURN DISTINCT x AS c0, y AS c1\n");
    CHECK(emit("q(x) :- (r.inv(s))(x,y), (A|B)(y)") ==
          "MATCH (x)-[:r]->(m0) MATCH (m0)<-[:s]-(y) WHERE (y:A OR y:B) RETURN DISTINCT x AS c0\n");
    CHECK(emit("q() :- (inv(r)|inv(s))*(x,y)") == "MATCH (x)<-[:r|s*0..]-(y) RETURN DISTINCT true AS c0\n");
}

TEST_CASE("mixed unions become branches") {
    CHECK(emit("q(x,y) :- (r|inv(s))(x,y)") ==
          "MATCH (x)-[:r]->(y) RETURN DISTINCT x AS c0, y AS c1\nUNION\n"
          "MATCH (x)<-[:s]-(y) RETURN DISTINCT x AS c0, y AS c1\n");
    CHECK(emit("q(x) :- A(x)\nq(x) :- B(x)\nq(x) :- A(x)") ==
          "MATCH (x) WHERE x:A RETURN DISTINCT x AS c0\nUNION\nMATCH (x) WHERE x:B RETURN DISTINCT x AS c0\n");
}

TEST_CASE("node tests without edges unify endpoints") {
    CHECK(emit("q(x,y) :- <A>(x,y)") == "MATCH (x) WHERE x:A RETURN DISTINCT x AS c0, x AS c1\n");
}

TEST_CASE("data tests") {
    CHECK(emit("q(x) :- age>30(x)") == "MATCH (x) WHERE coalesce(x.age > 30, false) RETURN DISTINCT x AS c0\n");
    CHECK(emit("q(x) :- name!=\"o'k\"(x)") ==
          "MATCH (x) WHERE coalesce(x.name <> 'o\\'k', false) RETURN DISTINCT x AS c0\n");
    CHECK(emit("q(x,y) :- r(x,y), w>=1.5(x,y)") ==
          "MATCH (x)-[:r]->(y) WHERE EXISTS { MATCH (x)-[e]->(y) WHERE coalesce(e.w >= 1.5, false) } "
          "RETURN DISTINCT x AS c0, y AS c1\n");
}

TEST_CASE("names needing quotes") {
    CHECK(cypher_name("plain_1") == "plain_1");
    CHECK(cypher_name("__w0") == "__w0");
    CHECK(cypher_name("has space") == "`has space`");
    CHECK(cypher_name("a`b") == "`a``b`");
}

TEST_CASE("unsupported paths name the subexpression") {
    try {
        emit_cypher(parse_union("q(x,y) :- (r.s)*(x,y)"));
        FAIL("expected UnsupportedPath");
    } catch (const UnsupportedPath& e) {
        CHECK(std::string(e.what()).find("(r.s)*") != std::string::npos);
    }
    CHECK_THROWS_AS(emit_cypher(parse_union("q(x,y) :- (r|inv(s))*(x,y)")), UnsupportedPath);
}

TEST_CASE("empty union") {
    UC2RPQ u;
    u.arity = 1;
    CypherQuery c = emit_cypher(u);
    CHECK(c.text == "MATCH (n) WHERE false RETURN DISTINCT n AS c0\n");
    CHECK_FALSE(c.diagnostics.empty());
}
