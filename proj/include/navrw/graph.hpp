#pragma once

// In-memory property graph with JSON-lines and CSV loaders.

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "navrw/query.hpp"

namespace navrw {

using Properties = std::map<std::string, Literal>;

struct Node {
    std::string id;
    std::set<std::string> labels;
    Properties props;
};

struct Edge {
    std::size_t src, dst;
    std::string label;
};

class PropertyGraph {
public:
    /// Throws GraphError on a duplicate id.
    std::size_t add_node(const std::string& id, std::set<std::string> labels = {}, Properties props = {});
    /// Throws GraphError on unknown endpoints or on properties that conflict
    /// with those already stored for the (src, dst) pair.
    std::size_t add_edge(const std::string& src, const std::string& label, const std::string& dst,
                         const Properties& props = {});
    std::size_t add_edge(std::size_t src, const std::string& label, std::size_t dst, const Properties& props = {});
    /// Returns true if the label was new.
    bool add_label(std::size_t node, const std::string& label);

    std::size_t size() const { return nodes_.size(); }
    const Node& node(std::size_t i) const { return nodes_[i]; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::optional<std::size_t> find(const std::string& id) const;

    bool has_edge(std::size_t src, const std::string& label, std::size_t dst) const;
    /// Edge indices leaving / entering a node.
    const std::vector<std::size_t>& out_edges(std::size_t n) const { return out_[n]; }
    const std::vector<std::size_t>& in_edges(std::size_t n) const { return in_[n]; }
    /// Properties of the (src, dst) pair, or null when no edge carries any.
    const Properties* edge_props(std::size_t src, std::size_t dst) const;

private:
    std::vector<Node> nodes_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> out_, in_;
    std::set<std::tuple<std::size_t, std::string, std::size_t>> edge_set_;
    std::map<std::pair<std::size_t, std::size_t>, Properties> edge_props_;
};

/// JSON lines: {"type":"node","id":..,"labels":[..],"props":{..}} and
/// {"type":"edge","src":..,"label":..,"dst":..,"props":{..}}. Ids starting
/// with `_:` are reserved. Errors carry line numbers.
PropertyGraph load_graph_jsonl(std::istream& in);
PropertyGraph load_graph_jsonl_text(const std::string& text);
/// nodes.csv rows `id,labels,props` (labels separated by `;`) and edges.csv
/// rows `src,label,dst,props`; props are JSON objects; header rows optional.
PropertyGraph load_graph_csv(std::istream& nodes, std::istream& edges);
/// Picks the format from the path: a directory or `nodes.csv` means CSV.
PropertyGraph load_graph_file(const std::string& path);

std::string write_graph_jsonl(const PropertyGraph& g);

}  // namespace navrw
