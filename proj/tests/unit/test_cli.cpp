#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = navrw::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string golden(const std::string& name, const std::string& file) {
    return std::string(NAVRW_GOLDEN_DIR) + "/" + name + "/" + file;
}

std::string scratch(const std::string& name, const std::string& content) {
    fs::path dir = fs::temp_directory_path() / "navrw_cli_test";
    fs::create_directories(dir);
    std::ofstream(dir / name) << content;
    return (dir / name).string();
}

}  // namespace

TEST_CASE("rewrite") {
    Run r = run({"rewrite", "-t", golden("teacher", "tbox.dl"), "-q", golden("teacher", "query.ncq")});
    CHECK(r.code == 0);
    CHECK(r.out == "q(x) :- Student(y), teaches(x,y)\nq(x) :- Teacher(x)\n");

    Run j = run({"rewrite", "-t", golden("teacher", "tbox.dl"), "-q", golden("teacher", "query.ncq"), "--format",
                 "json"});
    auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["queries"].size() == 2);
    CHECK(doc["arity"] == 1);

    Run e = run({"rewrite", "-t", scratch("empty.dl", ""), "-q", golden("teacher", "query.ncq")});
    CHECK(e.out == "q(x) :- Student(y), teaches(x,y)\n");
}

TEST_CASE("exit codes") {
    Run parse = run({"rewrite", "-t", golden("teacher", "tbox.dl"), "-q", scratch("bad.ncq", "q(x) :- r(x,\n")});
    CHECK(parse.code == navrw::cli::kParse);
    CHECK(parse.err.find("line 1") != std::string::npos);
    CHECK(parse.out.empty());

    CHECK(run({"rewrite", "-q", golden("teacher", "query.ncq")}).code == navrw::cli::kUsage);
    CHECK(run({"frobnicate"}).code == navrw::cli::kUsage);
    CHECK(run({"rewrite", "-t", "/nonexistent.dl", "-q", golden("teacher", "query.ncq")}).code == navrw::cli::kUsage);

    Run frag = run({"rewrite", "-t", scratch("neg.dl", "not A <= B\n"), "-q", golden("teacher", "query.ncq")});
    CHECK(frag.code == navrw::cli::kFragment);

    Run budget = run({"rewrite", "-t", scratch("chain.dl", "A <= exists r . B\nB <= exists r . C\n"), "-q",
                      scratch("chain.ncq", "q(x) :- r(x,y), r(y,z), C(z)\n"), "--max-queries", "2"});
    CHECK(budget.code == navrw::cli::kBudget);

    Run unsupported = run({"emit-cypher", "-r", scratch("u.rw", "q(x,y) :- (r.s)*(x,y)\n")});
    CHECK(unsupported.code == navrw::cli::kUnsupported);
}

TEST_CASE("emit-cypher") {
    Run r = run({"emit-cypher", "-t", golden("partof", "tbox.dl"), "-q", golden("partof", "query.ncq")});
    CHECK(r.code == 0);
    CHECK(r.out == "MATCH (x)-[:partOf*0..]->(__w0) WHERE __w0:Region RETURN DISTINCT x AS c0\n");
}

TEST_CASE("eval") {
    Run r = run({"eval", "-t", golden("mentors", "tbox.dl"), "-q", golden("mentors", "query.ncq"), "-g",
                 golden("mentors", "graph.jsonl")});
    CHECK(r.code == 0);
    CHECK(r.out == "a,b\nb,c\n");

    Run empty = run({"eval", "-q", golden("mentors", "query.ncq"), "-g", scratch("empty.jsonl", "")});
    CHECK(empty.code == 0);
    CHECK(empty.out.empty());

    Run rw = run({"eval", "-r", scratch("rw.txt", "q(x) :- (partOf*.<Region>)(x,y)\n"), "-g",
                  golden("partof", "graph.jsonl"), "--format", "json"});
    auto doc = nlohmann::json::parse(rw.out);
    CHECK(doc["rows"].size() == 4);
}

TEST_CASE("chase") {
    Run r = run({"chase", "-t", golden("teacher", "tbox.dl"), "-g", golden("teacher", "graph.jsonl"), "--depth", "0"});
    CHECK(r.code == 0);
    CHECK(r.out.find("_:") == std::string::npos);
    Run d = run({"chase", "-t", golden("teacher", "tbox.dl"), "-g", golden("teacher", "graph.jsonl"), "--depth", "1"});
    CHECK(d.out.find("\"_:alice/0\"") != std::string::npos);
}

TEST_CASE("check") {
    for (std::string name : {"teacher", "mentors", "partof"}) {
        Run r = run({"check", "-t", golden(name, "tbox.dl"), "-q", golden(name, "query.ncq"), "-g",
                     golden(name, "graph.jsonl")});
        CHECK(r.code == 0);
        CHECK(r.out == "OK\n");
    }
}

TEST_CASE("configuration precedence") {
    std::string cfg = scratch("navrw.conf", "# budgets\nmax_queries = 2\nformat = \"json\"\n");
    std::vector<std::string> base{"rewrite", "-t", scratch("chain.dl", "A <= exists r . B\nB <= exists r . C\n"),
                                  "-q", scratch("chain.ncq", "q(x) :- r(x,y), r(y,z), C(z)\n")};
    auto with = [&](std::vector<std::string> extra) {
        auto args = base;
        args.insert(args.end(), extra.begin(), extra.end());
        return run(args);
    };
    CHECK(with({"--config", cfg}).code == navrw::cli::kBudget);
    Run flag = with({"--config", cfg, "--max-queries", "50"});
    CHECK(flag.code == 0);
    CHECK(nlohmann::json::parse(flag.out)["queries"].size() == 3);

    setenv("NAVRW_MAX_QUERIES", "2", 1);
    CHECK(with({}).code == navrw::cli::kBudget);
    CHECK(with({"--config", scratch("loose.conf", "max_queries = 40\n")}).code == 0);
    unsetenv("NAVRW_MAX_QUERIES");

    CHECK(with({"--config", scratch("bad.conf", "max_queries = 0\n")}).code == navrw::cli::kUsage);
    CHECK(with({"--config", scratch("unknown.conf", "colour = blue\n")}).code == navrw::cli::kUsage);
}
