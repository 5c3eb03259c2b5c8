#include "navrw/store.hpp"

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "navrw/errors.hpp"

namespace navrw {

using json = nlohmann::json;

namespace {

constexpr const char* kIdKey = "navrw_id";

std::string env(const char* name) {
    const char* v = std::getenv(name);
    return v ? v : "";
}

json to_json(const Properties& props) {
    json obj = json::object();
    for (const auto& [k, v] : props) {
        if (auto i = std::get_if<std::int64_t>(&v.value))
            obj[k] = *i;
        else if (auto d = std::get_if<double>(&v.value))
            obj[k] = *d;
        else
            obj[k] = std::get<std::string>(v.value);
    }
    return obj;
}

json statement(const std::string& text, json params = json::object()) {
    return json{{"statement", text}, {"parameters", std::move(params)}};
}

std::string cell_id(const json& cell) {
    if (cell.is_object() && cell.contains(kIdKey)) return cell[kIdKey].get<std::string>();
    throw Error("graph store returned a value without '" + std::string(kIdKey) + "': " + cell.dump());
}

}  // namespace

std::optional<StoreConfig> StoreConfig::from_env() {
    StoreConfig c;
    c.url = env("NAVRW_GRAPH_STORE_URL");
    if (c.url.empty()) return std::nullopt;
    if (auto db = env("NAVRW_GRAPH_STORE_DB"); !db.empty()) c.database = db;
    c.user = env("NAVRW_GRAPH_STORE_USER");
    c.password = env("NAVRW_GRAPH_STORE_PASSWORD");
    return c;
}

GraphStore::GraphStore(StoreConfig config) : config_(std::move(config)) {}

std::string GraphStore::commit(const std::string& body) {
    httplib::Client client(config_.url);
    client.set_connection_timeout(5);
    client.set_read_timeout(60);
    if (!config_.user.empty()) client.set_basic_auth(config_.user, config_.password);
    auto res = client.Post("/db/" + config_.database + "/tx/commit", body, "application/json");
    if (!res) throw Error("graph store unreachable at " + config_.url + ": " + httplib::to_string(res.error()));
    if (res->status / 100 != 2) throw Error("graph store answered HTTP " + std::to_string(res->status));
    auto doc = json::parse(res->body);
    if (doc.contains("errors") && !doc["errors"].empty())
        throw Error("graph store error: " + doc["errors"][0].value("message", doc["errors"][0].dump()));
    return res->body;
}

bool GraphStore::reachable() {
    try {
        commit(json{{"statements", json::array({statement("RETURN 1")})}}.dump());
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

void GraphStore::replace_graph(const PropertyGraph& g) {
    json stmts = json::array({statement("MATCH (n) DETACH DELETE n")});
    for (const auto& n : g.nodes()) {
        std::string labels;
        for (const auto& l : n.labels) labels += ":" + cypher_name(l);
        json props = to_json(n.props);
        props[kIdKey] = n.id;
        stmts.push_back(statement("CREATE (n" + labels + ") SET n = $props", {{"props", props}}));
    }
    for (const auto& e : g.edges()) {
        const Properties* p = g.edge_props(e.src, e.dst);
        json params{{"s", g.node(e.src).id}, {"d", g.node(e.dst).id}, {"props", p ? to_json(*p) : json::object()}};
        stmts.push_back(statement("MATCH (a {" + std::string(kIdKey) + ": $s}), (b {" + kIdKey + ": $d}) CREATE (a)-[r:" +
                                      cypher_name(e.label) + "]->(b) SET r = $props",
                                  params));
    }
    commit(json{{"statements", stmts}}.dump());
}

AnswerSet GraphStore::answers(const CypherQuery& q) {
    auto doc = json::parse(commit(json{{"statements", json::array({statement(q.text)})}}.dump()));
    AnswerSet out;
    for (const auto& row : doc["results"][0]["data"]) {
        const json& cells = row["row"];
        if (cells.size() == 1 && cells[0].is_boolean()) {
            out.insert({});
            continue;
        }
        std::vector<std::string> tuple;
        for (const auto& c : cells) tuple.push_back(cell_id(c));
        out.insert(std::move(tuple));
    }
    return out;
}

}  // namespace navrw
