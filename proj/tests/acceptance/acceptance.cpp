// Acceptance suite: one PASS/FAIL/SKIP line per criterion.

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "generators.hpp"
#include "navrw/chase.hpp"
#include "navrw/cypher.hpp"
#include "navrw/errors.hpp"
#include "navrw/eval.hpp"
#include "navrw/rewriter.hpp"
#include "navrw/store.hpp"
#include "oracles.hpp"

using namespace navrw;
using namespace navrw::testing;

namespace {

constexpr unsigned kSweepSeed = 20240917;
constexpr std::size_t kSweepSize = 500;

enum class Verdict { Pass, Fail, Skip };

int failures = 0;
std::map<int, std::string> lines;  // printed in criterion order

void report(int id, const std::string& name, Verdict v, const std::string& detail) {
    const char* tag = v == Verdict::Pass ? "PASS" : v == Verdict::Fail ? "FAIL" : "SKIP";
    if (v == Verdict::Fail) ++failures;
    lines[id] = "[" + std::string(tag) + "] " + std::to_string(id) + ". " + name + ": " + detail;
}

std::string read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string golden(const std::string& name, const std::string& file) {
    return std::string(NAVRW_GOLDEN_DIR) + "/" + name + "/" + file;
}

std::string tuple_str(const std::vector<std::string>& t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + t[i];
    return s + ")";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Criteria 1, 2 and 6 share the corpus.
void sweep() {
    auto t0 = std::chrono::steady_clock::now();
    auto corpus = sweep_corpus(kSweepSize, kSweepSeed);
    std::size_t unsound = 0, incomplete = 0, pruning = 0;
    std::string first_unsound, first_incomplete, first_pruning;
    double rewrite_time = 0;
    for (const auto& inst : corpus) {
        auto r0 = std::chrono::steady_clock::now();
        RewriteResult r = rewrite_ncq(inst.query, inst.tbox);
        UC2RPQ u = r.queries.to_union();
        AnswerSet got = eval_query(u, inst.graph);
        rewrite_time += seconds_since(r0);

        AnswerSet c4 = certain_answers(inst.query, inst.graph, inst.tbox, 4);
        AnswerSet c3 = certain_answers(inst.query, inst.graph, inst.tbox, 3);
        for (const auto& t : got)
            if (!c4.count(t)) {
                if (!unsound++)
                    first_unsound = "seed " + std::to_string(inst.seed) + " extra " + tuple_str(t) + " for " +
                                    print_query(inst.query);
                break;
            }
        for (const auto& t : c3)
            if (!got.count(t)) {
                if (!incomplete++)
                    first_incomplete = "seed " + std::to_string(inst.seed) + " missing " + tuple_str(t) + " for " +
                                       print_query(inst.query);
                break;
            }

        RewriteOptions raw;
        raw.prune = false;
        AnswerSet un = eval_query(rewrite_ncq(inst.query, inst.tbox, raw).queries.to_union(), inst.graph);
        if (un != got && !pruning++) first_pruning = "seed " + std::to_string(inst.seed);
    }
    double total = seconds_since(t0);
    std::ostringstream d1;
    d1 << corpus.size() << " instances, " << unsound << " unsound, " << total << " s total (rewrite+eval " << rewrite_time
       << " s)";
    if (unsound) d1 << "; first: " << first_unsound;
    report(1, "soundness vs certain answers at depth 4", unsound == 0 && total < 60 ? Verdict::Pass : Verdict::Fail,
           d1.str());
    std::ostringstream d2;
    d2 << corpus.size() << " instances, " << incomplete << " incomplete";
    if (incomplete) d2 << "; first: " << first_incomplete;
    report(2, "completeness vs certain answers at depth 3", incomplete ? Verdict::Fail : Verdict::Pass, d2.str());
    std::ostringstream d6;
    d6 << corpus.size() << " instances, " << pruning << " differ";
    if (pruning) d6 << "; first: " << first_pruning;
    report(6, "pruned and unpruned answers agree", pruning ? Verdict::Fail : Verdict::Pass, d6.str());
}

RewriteResult rewrite_golden(const std::string& name) {
    TBox t = normalize(parse_tbox(read(golden(name, "tbox.dl"))));
    return rewrite_ncq(parse_query(read(golden(name, "query.ncq"))), t);
}

bool has_path_branch(const UC2RPQ& u, const PathExpression& want, std::vector<std::string> vars) {
    for (const auto& q : u.members) {
        if (q.atoms.size() != 1 || q.atoms[0].kind != Atom::Kind::Path) continue;
        const Atom& a = q.atoms[0];
        if (a.vars[0] != vars[0]) continue;
        if (!vars[1].empty() && a.vars[1] != vars[1]) continue;
        if (canonical(a.path) == canonical(want)) return true;
    }
    return false;
}

void golden_instances() {
    std::vector<std::string> notes;
    bool ok = true;

    UC2RPQ a = rewrite_golden("teacher").queries.to_union();
    bool has_teacher = false;
    for (const auto& q : a.members) has_teacher |= print_query(q) == "q(x) :- Teacher(x)";
    ok &= has_teacher;
    notes.push_back(std::string("(a) ") + (has_teacher ? "Teacher(x) present" : "Teacher(x) missing"));

    UC2RPQ b = rewrite_golden("mentors").queries.to_union();
    auto either = PathExpression::alt(PathExpression::edge({"teaches"}), PathExpression::edge({"mentors"}));
    bool has_union = has_path_branch(b, either, {"x", "y"});
    ok &= has_union;
    notes.push_back(std::string("(b) ") + (has_union ? "(teaches|mentors)(x,y) present" : "union branch missing"));

    UC2RPQ c = rewrite_golden("partof").queries.to_union();
    auto chain = PathExpression::concat(PathExpression::star(PathExpression::edge({"partOf"})),
                                        PathExpression::node_test({"Region"}));
    bool has_star = has_path_branch(c, chain, {"x", ""});
    // Chains of length 3 ending in a Region, next to an unrelated chain.
    PropertyGraph g;
    for (int i = 0; i < 4; ++i) g.add_node("c" + std::to_string(i), i == 3 ? std::set<std::string>{"Region"} : std::set<std::string>{});
    for (int i = 0; i < 4; ++i) g.add_node("d" + std::to_string(i));
    for (int i = 0; i < 3; ++i) {
        g.add_edge("c" + std::to_string(i), "partOf", "c" + std::to_string(i + 1));
        g.add_edge("d" + std::to_string(i), "partOf", "d" + std::to_string(i + 1));
    }
    TBox t = normalize(parse_tbox(read(golden("partof", "tbox.dl"))));
    AnswerSet got = eval_query(c, g);
    AnswerSet want = certain_answers(parse_query(read(golden("partof", "query.ncq"))), g, t, 4);
    AnswerSet expected{{"c0"}, {"c1"}, {"c2"}, {"c3"}};
    bool chains = got == want && got == expected;
    ok &= has_star && chains;
    notes.push_back(std::string("(c) ") + (has_star ? "partOf*.<Region> present" : "star branch missing") + ", chain " +
                    (chains ? "answers c0..c3" : "answers wrong"));

    std::string detail;
    for (const auto& n : notes) detail += (detail.empty() ? "" : "; ") + n;
    report(3, "golden instances", ok ? Verdict::Pass : Verdict::Fail, detail);
}

void path_oracle() {
    auto t0 = std::chrono::steady_clock::now();
    auto paths = all_paths(5, 2, {"r0", "r1"}, {"L0", "L1"});
    std::vector<PropertyGraph> graphs;
    // All graphs on one and two nodes.
    for (std::size_t n = 1; n <= 2; ++n) {
        std::size_t label_bits = 2 * n, edge_bits = 2 * n * n;
        for (std::size_t mask = 0; mask < (std::size_t{1} << (label_bits + edge_bits)); ++mask) {
            PropertyGraph g;
            for (std::size_t v = 0; v < n; ++v) {
                std::set<std::string> ls;
                for (std::size_t l = 0; l < 2; ++l)
                    if (mask >> (v * 2 + l) & 1) ls.insert("L" + std::to_string(l));
                g.add_node("v" + std::to_string(v), ls);
            }
            std::size_t bit = label_bits;
            for (std::size_t u = 0; u < n; ++u)
                for (std::size_t v = 0; v < n; ++v)
                    for (std::size_t r = 0; r < 2; ++r, ++bit)
                        if (mask >> bit & 1) g.add_edge(u, "r" + std::to_string(r), v);
            graphs.push_back(std::move(g));
        }
    }
    std::mt19937 rng(7);
    const std::size_t exhaustive = graphs.size();
    for (int i = 0; i < 150; ++i) graphs.push_back(random_graph(rng, 3 + i % 2, 2, 2, 0.3, 0.4));

    std::size_t checks = 0, mismatches = 0;
    std::string first;
    for (const auto& g : graphs) {
        for (const auto& e : paths) {
            PairSet got;
            for (const auto& m : eval_path(e, "x", "y", g)) got.insert({m.at("x"), m.at("y")});
            ++checks;
            if (got != walk_pairs(e, g) && !mismatches++) first = to_string(e);
        }
    }
    std::ostringstream d;
    d << paths.size() << " expressions x " << graphs.size() << " graphs (" << exhaustive
      << " exhaustive on <=2 nodes, rest random on 3-4 nodes), " << mismatches << " mismatches, "
      << seconds_since(t0) << " s";
    if (mismatches) d << "; first: " << first;
    report(4, "eval_path equals walk enumeration", mismatches ? Verdict::Fail : Verdict::Pass, d.str());
}

void star_identity() {
    std::mt19937 rng(11);
    auto inner = all_paths(3, 1, {"r0", "r1"}, {"L0", "L1"});
    std::size_t missing = 0;
    for (int i = 0; i < 100; ++i) {
        PropertyGraph g = random_graph(rng, 1 + i % 6, 2, 2);
        for (const auto& e : inner) {
            PathExpression st;
            st.kind = PathExpression::Kind::Star;
            st.args = {e};
            Relation r = eval_relation(st, g);
            for (std::size_t v = 0; v < g.size(); ++v)
                if (!std::binary_search(r[v].begin(), r[v].end(), v)) ++missing;
        }
    }
    std::ostringstream d;
    d << "100 graphs x " << inner.size() << " starred expressions, " << missing << " missing identity pairs";
    report(5, "eval(r*) contains the identity", missing ? Verdict::Fail : Verdict::Pass, d.str());
}

std::string run_process(const std::string& cmd) {
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return "<popen failed>";
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    int rc = pclose(p);
    return out + (rc ? "\n<exit " + std::to_string(rc) + ">" : "");
}

void determinism() {
    std::size_t same = 0, total = 0, frozen = 0;
    std::string first;
    for (std::string name : {"teacher", "mentors", "partof"}) {
        for (std::string cmd : {"rewrite", "emit-cypher"}) {
            std::string line = std::string(NAVRW_CLI) + " " + cmd + " -t " + golden(name, "tbox.dl") + " -q " +
                               golden(name, "query.ncq") + " 2>/dev/null";
            std::string a = run_process(line), b = run_process(line);
            ++total;
            if (a == b)
                ++same;
            else if (first.empty())
                first = name + " " + cmd;
            std::string expected = read(golden(name, cmd == "rewrite" ? "expected.rewrite" : "expected.cypher"));
            if (a == expected)
                ++frozen;
            else if (first.empty())
                first = name + " " + cmd + " differs from the frozen output";
        }
    }
    std::ostringstream d;
    d << same << "/" << total << " byte-identical across runs, " << frozen << "/" << total << " equal to frozen output";
    if (!first.empty()) d << "; first problem: " << first;
    report(7, "deterministic rewrite and emit-cypher", same == total && frozen == total ? Verdict::Pass : Verdict::Fail,
           d.str());
}

// Golden instances on their graphs, then sweep instances until 20 pairs.
std::vector<std::pair<UC2RPQ, PropertyGraph>> roundtrip_pairs() {
    std::vector<std::pair<UC2RPQ, PropertyGraph>> out;
    for (std::string name : {"teacher", "mentors", "partof"})
        out.push_back({rewrite_golden(name).queries.to_union(), load_graph_file(golden(name, "graph.jsonl"))});
    for (const auto& inst : sweep_corpus(60, kSweepSeed)) {
        if (out.size() == 20) break;
        UC2RPQ u = rewrite_ncq(inst.query, inst.tbox).queries.to_union();
        try {
            emit_cypher(u);
        } catch (const UnsupportedPath&) {
            continue;
        }
        out.push_back({u, inst.graph});
    }
    return out;
}

void cypher_roundtrip() {
    auto config = StoreConfig::from_env();
    if (!config) {
        report(8, "Cypher round-trip", Verdict::Skip, "NAVRW_GRAPH_STORE_URL not set");
        return;
    }
    GraphStore store(*config);
    if (!store.reachable()) {
        report(8, "Cypher round-trip", Verdict::Skip, "no graph store reachable at " + config->url);
        return;
    }
    std::size_t agree = 0, total = 0;
    std::string first;
    for (const auto& [u, g] : roundtrip_pairs()) {
        ++total;
        try {
            store.replace_graph(g);
            if (store.answers(emit_cypher(u)) == eval_query(u, g))
                ++agree;
            else if (first.empty())
                first = print_union(u);
        } catch (const std::exception& e) {
            if (first.empty()) first = e.what();
        }
    }
    std::ostringstream d;
    d << agree << "/" << total << " pairs agree";
    if (!first.empty()) d << "; first disagreement: " << first;
    report(8, "Cypher round-trip", agree == total ? Verdict::Pass : Verdict::Fail, d.str());
}

void guarded(const std::function<void()>& f, int id, const std::string& name) {
    try {
        f();
    } catch (const std::exception& e) {
        report(id, name, Verdict::Fail, std::string("exception: ") + e.what());
    }
}

}  // namespace

int main() {
    guarded(sweep, 1, "sweep (criteria 1, 2, 6)");
    guarded(golden_instances, 3, "golden instances");
    guarded(path_oracle, 4, "eval_path equals walk enumeration");
    guarded(star_identity, 5, "eval(r*) contains the identity");
    guarded(determinism, 7, "deterministic rewrite and emit-cypher");
    guarded(cypher_roundtrip, 8, "Cypher round-trip");
    for (const auto& [id, line] : lines) std::cout << line << "\n";
    return failures ? 1 : 0;
}
