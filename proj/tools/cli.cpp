#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "navrw/chase.hpp"
#include "navrw/cypher.hpp"
#include "navrw/errors.hpp"
#include "navrw/eval.hpp"
#include "navrw/graph.hpp"
#include "navrw/rewriter.hpp"
#include "navrw/store.hpp"

namespace navrw::cli {

namespace {

using json = nlohmann::json;

struct UsageError : Error {
    using Error::Error;
};

struct Config {
    std::size_t max_queries = 10000;
    std::size_t max_clip_attempts = 100000;
    std::size_t witness_cap = 1024;
    std::size_t depth = 4;
    std::string format = "text";
    StoreConfig store;
};

std::string trim(std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::size_t positive(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    unsigned long long n = 0;
    try {
        n = std::stoull(value, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != value.size() || n == 0) throw UsageError(key + " must be a positive integer, got '" + value + "'");
    return static_cast<std::size_t>(n);
}

void set(Config& c, const std::string& key, const std::string& value) {
    if (key == "max_queries")
        c.max_queries = positive(key, value);
    else if (key == "max_clip_attempts")
        c.max_clip_attempts = positive(key, value);
    else if (key == "witness_cap")
        c.witness_cap = positive(key, value);
    else if (key == "depth") {
        if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
            throw UsageError("depth must be a non-negative integer, got '" + value + "'");
        c.depth = std::stoull(value);
    } else if (key == "format") {
        if (value != "text" && value != "json") throw UsageError("format must be 'text' or 'json'");
        c.format = value;
    } else if (key == "store_url")
        c.store.url = value;
    else if (key == "store_db")
        c.store.database = value;
    else if (key == "store_user")
        c.store.user = value;
    else if (key == "store_password")
        c.store.password = value;
    else
        throw UsageError("unknown configuration key '" + key + "'");
}

void apply_env(Config& c) {
    static const std::pair<const char*, const char*> vars[] = {
        {"NAVRW_MAX_QUERIES", "max_queries"},       {"NAVRW_MAX_CLIP_ATTEMPTS", "max_clip_attempts"},
        {"NAVRW_WITNESS_CAP", "witness_cap"},       {"NAVRW_DEPTH", "depth"},
        {"NAVRW_FORMAT", "format"},                 {"NAVRW_GRAPH_STORE_URL", "store_url"},
        {"NAVRW_GRAPH_STORE_DB", "store_db"},       {"NAVRW_GRAPH_STORE_USER", "store_user"},
        {"NAVRW_GRAPH_STORE_PASSWORD", "store_password"},
    };
    for (const auto& [env, key] : vars)
        if (const char* v = std::getenv(env)) set(c, key, v);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// `key = value` lines; `#` comments; values may be quoted.
void apply_file(Config& c, const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty() || line.front() == '[') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(n) + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        set(c, key, value);
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return out + "\"";
}

void print_answers(const AnswerSet& answers, std::size_t arity, const Config& c, std::ostream& out) {
    if (c.format == "json") {
        json cols = json::array();
        for (std::size_t i = 0; i < arity; ++i) cols.push_back("c" + std::to_string(i));
        json rows = json::array();
        for (const auto& t : answers) rows.push_back(t);
        out << json{{"columns", cols}, {"rows", rows}}.dump() << "\n";
        return;
    }
    for (const auto& t : answers) {
        if (t.empty()) {
            out << "true\n";
            continue;
        }
        for (std::size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << csv_field(t[i]);
        out << "\n";
    }
}

struct Inputs {
    std::string tbox, query, rewriting, graph, config, format;
    std::optional<std::size_t> depth, max_queries, max_clip_attempts, witness_cap;
    bool no_prune = false;
    bool verify = false;
};

class Session {
public:
    Session(const Inputs& in, std::ostream& out, std::ostream& err) : in_(in), out_(out), err_(err) {
        apply_env(config_);
        if (!in.config.empty()) apply_file(config_, in.config);
        if (!in.format.empty()) set(config_, "format", in.format);
        if (in.depth) config_.depth = *in.depth;
        if (in.max_queries) set(config_, "max_queries", std::to_string(*in.max_queries));
        if (in.max_clip_attempts) set(config_, "max_clip_attempts", std::to_string(*in.max_clip_attempts));
        if (in.witness_cap) set(config_, "witness_cap", std::to_string(*in.witness_cap));
    }

    int rewrite() {
        RewriteResult r = run_rewrite();
        UC2RPQ u = r.queries.to_union();
        if (json_out()) {
            json queries = json::array();
            for (const auto& q : u.members) queries.push_back(print_query(q));
            out_ << json{{"arity", u.arity},
                         {"queries", queries},
                         {"diagnostics", r.diagnostics},
                         {"saturated_queries", r.saturated_queries},
                         {"clip_attempts", r.clip_attempts}}
                        .dump()
                 << "\n";
        } else {
            report(r.diagnostics);
            out_ << print_union(u);
        }
        return kOk;
    }

    int emit() {
        UC2RPQ u = target();
        CypherQuery c = emit_cypher(u);
        if (json_out())
            out_ << json{{"cypher", c.text}, {"diagnostics", c.diagnostics}}.dump() << "\n";
        else {
            report(c.diagnostics);
            out_ << c.text;
        }
        if (!in_.verify) return kOk;
        if (config_.store.url.empty()) throw UsageError("--verify needs a graph store URL (store_url)");
        PropertyGraph g = graph();
        GraphStore store(config_.store);
        store.replace_graph(g);
        AnswerSet remote = store.answers(c), local = eval_query(u, g);
        if (remote == local) return kOk;
        err_ << "store answers differ from local evaluation\n";
        return kMismatch;
    }

    int eval() {
        UC2RPQ u = target();
        print_answers(eval_query(u, graph()), u.arity, config_, out_);
        return kOk;
    }

    int chase() {
        ChasedGraph c = navrw::chase(graph(), tbox(), config_.depth);
        out_ << write_graph_jsonl(c.graph);
        return kOk;
    }

    int check() {
        C2RPQ q = ncq();
        PropertyGraph g = graph();
        RewriteResult r = run_rewrite(q);
        AnswerSet got = eval_query(r.queries.to_union(), g);
        AnswerSet want = certain_answers(q, g, tbox(), config_.depth);
        std::optional<std::pair<std::string, std::vector<std::string>>> diff;
        for (const auto& t : want)
            if (!got.count(t)) {
                diff = {"missing", t};
                break;
            }
        if (!diff)
            for (const auto& t : got)
                if (!want.count(t)) {
                    diff = {"extra", t};
                    break;
                }
        if (json_out()) {
            json v{{"verdict", diff ? diff->first : "OK"}};
            if (diff) v["tuple"] = diff->second;
            out_ << v.dump() << "\n";
        } else if (!diff) {
            out_ << "OK\n";
        } else {
            out_ << diff->first << ":";
            for (std::size_t i = 0; i < diff->second.size(); ++i) out_ << (i ? "," : " ") << csv_field(diff->second[i]);
            out_ << "\n";
        }
        return diff ? kMismatch : kOk;
    }

private:
    bool json_out() const { return config_.format == "json"; }

    void report(const std::vector<std::string>& diagnostics) {
        for (const auto& d : diagnostics) err_ << "note: " << d << "\n";
    }

    const TBox& tbox() {
        if (!tbox_) tbox_ = normalize(in_.tbox.empty() ? TBox{} : parse_tbox(read_file(in_.tbox)));
        return *tbox_;
    }

    C2RPQ ncq() {
        if (in_.query.empty()) throw UsageError("a query file (-q) is required");
        return parse_query(read_file(in_.query));
    }

    PropertyGraph graph() {
        if (in_.graph.empty()) throw UsageError("a graph file (-g) is required");
        if (!std::ifstream(in_.graph) && !std::ifstream(in_.graph + "/nodes.csv"))
            throw UsageError("cannot read '" + in_.graph + "'");
        return load_graph_file(in_.graph);
    }

    RewriteResult run_rewrite(const std::optional<C2RPQ>& given = std::nullopt) {
        RewriteOptions o;
        o.max_queries = config_.max_queries;
        o.max_clip_attempts = config_.max_clip_attempts;
        o.witness_cap = config_.witness_cap;
        o.prune = !in_.no_prune;
        return rewrite_ncq(given ? *given : ncq(), tbox(), o);
    }

    // A stored rewriting (-r), or the rewriting of -q under -t.
    UC2RPQ target() {
        if (!in_.rewriting.empty()) return parse_union(read_file(in_.rewriting), QuerySyntax::Extended);
        return run_rewrite().queries.to_union();
    }

    const Inputs& in_;
    std::ostream& out_;
    std::ostream& err_;
    Config config_;
    std::optional<TBox> tbox_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"NCQ rewriting over DL TBoxes with evaluation on property graphs", "navrw"};
    app.require_subcommand(1);
    Inputs in;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--format", in.format, "text or json")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--config", in.config, "key = value configuration file");
    };
    auto budgets = [&](CLI::App* sub) {
        sub->add_option("--max-queries", in.max_queries);
        sub->add_option("--max-clip-attempts", in.max_clip_attempts);
        sub->add_option("--witness-cap", in.witness_cap);
        sub->add_flag("--no-prune", in.no_prune, "keep queries contained in others");
    };

    auto* rewrite = app.add_subcommand("rewrite", "print the UC2RPQ rewriting of an NCQ");
    rewrite->add_option("-t,--tbox", in.tbox)->required();
    rewrite->add_option("-q,--query", in.query)->required();
    common(rewrite);
    budgets(rewrite);

    auto* emit = app.add_subcommand("emit-cypher", "print the rewriting as Cypher");
    emit->add_option("-t,--tbox", in.tbox);
    emit->add_option("-q,--query", in.query);
    emit->add_option("-r,--rewriting", in.rewriting, "UC2RPQ file, one query per line");
    emit->add_option("-g,--graph", in.graph);
    emit->add_flag("--verify", in.verify, "run on the configured graph store and compare with eval");
    common(emit);
    budgets(emit);

    auto* eval = app.add_subcommand("eval", "answer tuples as sorted CSV rows");
    eval->add_option("-t,--tbox", in.tbox);
    eval->add_option("-q,--query", in.query);
    eval->add_option("-r,--rewriting", in.rewriting, "UC2RPQ file, one query per line");
    eval->add_option("-g,--graph", in.graph)->required();
    common(eval);
    budgets(eval);

    auto* chase = app.add_subcommand("chase", "bounded chase as JSON lines");
    chase->add_option("-t,--tbox", in.tbox)->required();
    chase->add_option("-g,--graph", in.graph)->required();
    chase->add_option("--depth", in.depth);
    common(chase);

    auto* check = app.add_subcommand("check", "compare the rewriting with chase-based certain answers");
    check->add_option("-t,--tbox", in.tbox)->required();
    check->add_option("-q,--query", in.query)->required();
    check->add_option("-g,--graph", in.graph)->required();
    check->add_option("--depth", in.depth);
    common(check);
    budgets(check);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        Session s(in, out, err);
        if (rewrite->parsed()) return s.rewrite();
        if ((emit->parsed() || eval->parsed()) && in.rewriting.empty() && in.query.empty())
            throw UsageError("give a query (-q) or a rewriting (-r)");
        if (emit->parsed()) return s.emit();
        if (eval->parsed()) return s.eval();
        if (chase->parsed()) return s.chase();
        return s.check();
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const GraphError& e) {
        err << "graph error: " << e.what() << "\n";
        return kParse;
    } catch (const FragmentViolation& e) {
        err << "fragment violation: " << e.what() << "\n";
        return kFragment;
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return kBudget;
    } catch (const UnsupportedPath& e) {
        err << "unsupported path: " << e.what() << "\n";
        return kUnsupported;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace navrw::cli
