#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "navrw/chase.hpp"
#include "navrw/cypher.hpp"
#include "navrw/errors.hpp"
#include "navrw/eval.hpp"
#include "navrw/rewriter.hpp"

namespace py = pybind11;
using namespace navrw;

namespace {

std::vector<std::string> rewrite(const std::string& tbox, const std::string& query, std::size_t max_queries,
                                 std::size_t max_clip_attempts, bool prune) {
    RewriteOptions o;
    o.max_queries = max_queries;
    o.max_clip_attempts = max_clip_attempts;
    o.prune = prune;
    auto u = rewrite_ncq(parse_query(query), normalize(parse_tbox(tbox)), o).queries.to_union();
    std::vector<std::string> out;
    for (const auto& q : u.members) out.push_back(print_query(q));
    return out;
}

std::vector<std::vector<std::string>> rows(const AnswerSet& a) { return {a.begin(), a.end()}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "NCQ rewriting, property-graph evaluation and Cypher emission";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", base);
    py::register_exception<FragmentViolation>(m, "FragmentViolation", base);
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base);
    py::register_exception<UnsupportedPath>(m, "UnsupportedPath", base);
    py::register_exception<GraphError>(m, "GraphError", base);

    m.def("normalize", [](const std::string& tbox) { return print_normalized(normalize(parse_tbox(tbox))); },
          py::arg("tbox"), "Normalized axioms, one per line.");

    m.def("rewrite", &rewrite, py::arg("tbox"), py::arg("query"), py::arg("max_queries") = 10000,
          py::arg("max_clip_attempts") = 100000, py::arg("prune") = true,
          "Branches of the UC2RPQ rewriting in the extended query syntax.");

    m.def(
        "emit_cypher",
        [](const std::string& rewriting) { return emit_cypher(parse_union(rewriting)).text; },
        py::arg("rewriting"), "Cypher for a union given one query per line.");

    m.def(
        "evaluate",
        [](const std::string& rewriting, const std::string& graph) {
            return rows(eval_query(parse_union(rewriting), load_graph_jsonl_text(graph)));
        },
        py::arg("rewriting"), py::arg("graph"), "Sorted answer tuples over a JSON-lines graph.");

    m.def(
        "chase",
        [](const std::string& tbox, const std::string& graph, std::size_t depth) {
            return write_graph_jsonl(navrw::chase(load_graph_jsonl_text(graph), normalize(parse_tbox(tbox)), depth).graph);
        },
        py::arg("tbox"), py::arg("graph"), py::arg("depth") = 4);

    m.def(
        "certain_answers",
        [](const std::string& tbox, const std::string& query, const std::string& graph, std::size_t depth) {
            return rows(certain_answers(parse_query(query), load_graph_jsonl_text(graph), normalize(parse_tbox(tbox)), depth));
        },
        py::arg("tbox"), py::arg("query"), py::arg("graph"), py::arg("depth") = 4);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs a command line; returns (exit code, stdout, stderr).");
}
