#pragma once

// JSON graph files:
//   {"dimension": d,
//    "vertices": [{"id": "...", "potential": x}, ...],
//    "edges":    [{"from": "...", "to": "...", "index": [i_1, ..., i_d]}, ...]}
// Unknown keys are rejected.

#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>

#include "json.hpp"
#include "pgraph/graph.hpp"

namespace pgraph {

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                                const std::string& where) {
  if (!obj.is_object()) throw GraphError(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) throw GraphError("unknown field '" + item.key() + "' in " + where);
  }
  for (const char* key : allowed)
    if (!obj.contains(key)) throw GraphError("missing field '" + std::string(key) + "' in " + where);
}

inline int json_int(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number_integer()) throw GraphError(where + " must be an integer");
  auto x = v.get<long long>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw GraphError(where + " is out of range");
  return static_cast<int>(x);
}

}  // namespace detail

inline FundamentalGraph graph_from_json(const nlohmann::json& doc) {
  detail::reject_unknown_keys(doc, {"dimension", "vertices", "edges"}, "graph");
  const int dim = detail::json_int(doc["dimension"], "dimension");

  if (!doc["vertices"].is_array()) throw GraphError("'vertices' must be an array");
  std::vector<Vertex> vertices;
  for (const auto& v : doc["vertices"]) {
    detail::reject_unknown_keys(v, {"id", "potential"}, "vertex");
    if (!v["id"].is_string()) throw GraphError("vertex id must be a string");
    if (!v["potential"].is_number()) throw GraphError("vertex potential must be a number");
    vertices.push_back({v["id"].get<std::string>(), v["potential"].get<double>()});
  }

  if (!doc["edges"].is_array()) throw GraphError("'edges' must be an array");
  std::vector<EdgeSpec> edges;
  for (const auto& e : doc["edges"]) {
    detail::reject_unknown_keys(e, {"from", "to", "index"}, "edge");
    if (!e["from"].is_string() || !e["to"].is_string())
      throw GraphError("edge endpoints must be strings");
    if (!e["index"].is_array()) throw GraphError("edge index must be an array");
    IndexVector index;
    for (const auto& x : e["index"]) index.push_back(detail::json_int(x, "edge index entry"));
    edges.push_back({e["from"].get<std::string>(), e["to"].get<std::string>(), std::move(index)});
  }
  return FundamentalGraph::build(dim, std::move(vertices), edges);
}

inline FundamentalGraph parse_graph(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw GraphError(std::string("malformed graph JSON: ") + e.what());
  }
  return graph_from_json(doc);
}

inline nlohmann::ordered_json graph_to_json(const FundamentalGraph& g) {
  nlohmann::ordered_json doc;
  doc["dimension"] = g.dimension();
  doc["vertices"] = nlohmann::ordered_json::array();
  for (const auto& v : g.vertices()) {
    nlohmann::ordered_json jv;
    jv["id"] = v.id;
    jv["potential"] = v.potential;
    doc["vertices"].push_back(std::move(jv));
  }
  doc["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : g.edges()) {
    nlohmann::ordered_json je;
    je["from"] = g.vertices()[e.from].id;
    je["to"] = g.vertices()[e.to].id;
    je["index"] = e.index;
    doc["edges"].push_back(std::move(je));
  }
  return doc;
}

inline std::string format_graph(const FundamentalGraph& g) { return graph_to_json(g).dump(2) + "\n"; }

inline FundamentalGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open graph file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_graph(buf.str());
  } catch (const GraphError& e) {
    throw GraphError(path + ": " + e.what());
  }
}

inline void save_graph(const FundamentalGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GraphError("cannot write graph file '" + path + "'");
  out << format_graph(g);
  if (!out) throw GraphError("failed writing graph file '" + path + "'");
}

}  // namespace pgraph
