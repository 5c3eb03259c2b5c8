#include "navrw/graph.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "navrw/errors.hpp"

namespace navrw {

using json = nlohmann::json;

std::size_t PropertyGraph::add_node(const std::string& id, std::set<std::string> labels, Properties props) {
    if (id.empty()) throw GraphError("empty node id");
    if (index_.count(id)) throw GraphError("duplicate node id '" + id + "'");
    index_[id] = nodes_.size();
    nodes_.push_back(Node{id, std::move(labels), std::move(props)});
    out_.emplace_back();
    in_.emplace_back();
    return nodes_.size() - 1;
}

std::size_t PropertyGraph::add_edge(const std::string& src, const std::string& label, const std::string& dst,
                                    const Properties& props) {
    auto s = find(src);
    if (!s) throw GraphError("edge source '" + src + "' is not a node");
    auto d = find(dst);
    if (!d) throw GraphError("edge target '" + dst + "' is not a node");
    return add_edge(*s, label, *d, props);
}

std::size_t PropertyGraph::add_edge(std::size_t src, const std::string& label, std::size_t dst,
                                    const Properties& props) {
    if (src >= nodes_.size() || dst >= nodes_.size()) throw GraphError("edge endpoint out of range");
    if (label.empty()) throw GraphError("edge without label");
    if (!props.empty()) {
        auto& stored = edge_props_[{src, dst}];
        for (const auto& [k, v] : props) {
            auto it = stored.find(k);
            if (it != stored.end() && !(it->second == v))
                throw GraphError("conflicting values for property '" + k + "' on edges " + nodes_[src].id + " -> " +
                                 nodes_[dst].id);
            stored.emplace(k, v);
        }
    }
    edges_.push_back(Edge{src, dst, label});
    out_[src].push_back(edges_.size() - 1);
    in_[dst].push_back(edges_.size() - 1);
    edge_set_.insert({src, label, dst});
    return edges_.size() - 1;
}

bool PropertyGraph::add_label(std::size_t node, const std::string& label) {
    return nodes_.at(node).labels.insert(label).second;
}

std::optional<std::size_t> PropertyGraph::find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool PropertyGraph::has_edge(std::size_t src, const std::string& label, std::size_t dst) const {
    return edge_set_.count({src, label, dst}) > 0;
}

const Properties* PropertyGraph::edge_props(std::size_t src, std::size_t dst) const {
    auto it = edge_props_.find({src, dst});
    return it == edge_props_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Loading

namespace {

Literal literal_from_json(const json& v, const std::string& key) {
    if (v.is_number_integer()) return Literal{v.get<std::int64_t>()};
    if (v.is_number_float()) return Literal{v.get<double>()};
    if (v.is_string()) return Literal{v.get<std::string>()};
    throw GraphError("property '" + key + "' must be an integer, a decimal or a string");
}

Properties props_from_json(const json& obj) {
    Properties out;
    if (obj.is_null()) return out;
    if (!obj.is_object()) throw GraphError("props must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) out.emplace(it.key(), literal_from_json(it.value(), it.key()));
    return out;
}

json props_to_json(const Properties& props) {
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

void check_id(const std::string& id) {
    if (id.rfind("_:", 0) == 0) throw GraphError("node id '" + id + "' uses the reserved prefix '_:'");
}

struct PendingEdge {
    std::string src, label, dst;
    Properties props;
    int line;
};

void add_pending(PropertyGraph& g, const std::vector<PendingEdge>& edges) {
    for (const auto& e : edges) {
        try {
            g.add_edge(e.src, e.label, e.dst, e.props);
        } catch (const GraphError& err) {
            throw GraphError("line " + std::to_string(e.line) + ": " + err.what());
        }
    }
}

// One CSV record; fields may be double-quoted with "" as an escaped quote.
std::vector<std::string> split_csv(const std::string& line, int line_no) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else if (c != '\r') {
            fields.back() += c;
        }
    }
    if (quoted) throw ParseError("unterminated quoted field", line_no, static_cast<int>(line.size()));
    return fields;
}

Properties props_from_text(const std::string& text, int line_no) {
    if (text.find_first_not_of(" \t") == std::string::npos) return {};
    try {
        return props_from_json(json::parse(text));
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad props: ") + e.what(), line_no, 0);
    } catch (const GraphError& e) {
        throw GraphError("line " + std::to_string(line_no) + ": " + e.what());
    }
}

}  // namespace

PropertyGraph load_graph_jsonl(std::istream& in) {
    PropertyGraph g;
    std::vector<PendingEdge> edges;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("malformed JSON: ") + e.what(), line_no, static_cast<int>(e.byte));
        }
        try {
            if (!doc.is_object() || !doc.contains("type")) throw GraphError("expected an object with a \"type\" field");
            std::string type = doc.at("type").get<std::string>();
            Properties props = props_from_json(doc.value("props", json()));
            if (type == "node") {
                std::string id = doc.at("id").get<std::string>();
                check_id(id);
                std::set<std::string> labels;
                for (const auto& l : doc.value("labels", json::array())) labels.insert(l.get<std::string>());
                g.add_node(id, std::move(labels), std::move(props));
            } else if (type == "edge") {
                edges.push_back({doc.at("src").get<std::string>(), doc.at("label").get<std::string>(),
                                 doc.at("dst").get<std::string>(), std::move(props), line_no});
            } else {
                throw GraphError("unknown record type '" + type + "'");
            }
        } catch (const json::exception& e) {
            throw ParseError(std::string("malformed record: ") + e.what(), line_no, 0);
        } catch (const GraphError& e) {
            throw GraphError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    add_pending(g, edges);
    return g;
}

PropertyGraph load_graph_jsonl_text(const std::string& text) {
    std::istringstream in(text);
    return load_graph_jsonl(in);
}

PropertyGraph load_graph_csv(std::istream& nodes, std::istream& edges) {
    PropertyGraph g;
    std::string line;
    int line_no = 0;
    while (std::getline(nodes, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto f = split_csv(line, line_no);
        if (line_no == 1 && f[0] == "id") continue;
        if (f.size() > 3) throw ParseError("expected id,labels,props", line_no, 0);
        f.resize(3);
        std::set<std::string> labels;
        std::stringstream ls(f[1]);
        for (std::string l; std::getline(ls, l, ';');)
            if (!l.empty()) labels.insert(l);
        try {
            check_id(f[0]);
            g.add_node(f[0], std::move(labels), props_from_text(f[2], line_no));
        } catch (const GraphError& e) {
            throw GraphError("nodes line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    std::vector<PendingEdge> pending;
    line_no = 0;
    while (std::getline(edges, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto f = split_csv(line, line_no);
        if (line_no == 1 && f[0] == "src") continue;
        if (f.size() < 3 || f.size() > 4) throw ParseError("expected src,label,dst,props", line_no, 0);
        f.resize(4);
        pending.push_back({f[0], f[1], f[2], props_from_text(f[3], line_no), line_no});
    }
    add_pending(g, pending);
    return g;
}

PropertyGraph load_graph_file(const std::string& path) {
    namespace fs = std::filesystem;
    fs::path p(path);
    fs::path nodes_path, edges_path;
    if (fs::is_directory(p)) {
        nodes_path = p / "nodes.csv";
        edges_path = p / "edges.csv";
    } else if (p.filename() == "nodes.csv") {
        nodes_path = p;
        edges_path = p.parent_path() / "edges.csv";
    }
    if (!nodes_path.empty()) {
        std::ifstream n(nodes_path), e(edges_path);
        if (!n) throw Error("cannot open " + nodes_path.string());
        if (!e) throw Error("cannot open " + edges_path.string());
        return load_graph_csv(n, e);
    }
    std::ifstream in(p);
    if (!in) throw Error("cannot open " + path);
    return load_graph_jsonl(in);
}

std::string write_graph_jsonl(const PropertyGraph& g) {
    std::string out;
    for (const auto& n : g.nodes()) {
        json doc = {{"type", "node"}, {"id", n.id}, {"labels", std::vector<std::string>(n.labels.begin(), n.labels.end())}};
        if (!n.props.empty()) doc["props"] = props_to_json(n.props);
        out += doc.dump() + "\n";
    }
    for (const auto& e : g.edges()) {
        json doc = {{"type", "edge"}, {"src", g.node(e.src).id}, {"label", e.label}, {"dst", g.node(e.dst).id}};
        if (const Properties* p = g.edge_props(e.src, e.dst)) doc["props"] = props_to_json(*p);
        out += doc.dump() + "\n";
    }
    return out;
}

}  // namespace navrw
