#pragma once

// Minimal client for a graph store's HTTP transaction endpoint
// (`POST {url}/db/{database}/tx/commit`).

#include <optional>
#include <string>

#include "navrw/cypher.hpp"
#include "navrw/eval.hpp"
#include "navrw/graph.hpp"

namespace navrw {

struct StoreConfig {
    std::string url;  // e.g. http://localhost:7474
    std::string database = "neo4j";
    std::string user;
    std::string password;

    /// NAVRW_GRAPH_STORE_URL, _DB, _USER, _PASSWORD. nullopt without a URL.
    static std::optional<StoreConfig> from_env();
};

class GraphStore {
public:
    explicit GraphStore(StoreConfig config);

    bool reachable();
    /// Deletes everything, then loads g. Node ids go to the `navrw_id` property.
    void replace_graph(const PropertyGraph& g);
    /// Runs the query and maps returned nodes back to their ids.
    AnswerSet answers(const CypherQuery& q);

private:
    std::string commit(const std::string& body);

    StoreConfig config_;
};

}  // namespace navrw
