#include <fstream>
#include <sstream>

#include <json.hpp>

#include "p2pshare/error.hpp"
#include "p2pshare/graph.hpp"
#include "p2pshare/serialize.hpp"

namespace p2pshare {

using nlohmann::json;

std::string graph_to_json(const Graph& graph) {
  json edges = json::array();
  for (const auto& [u, v] : graph.edges()) edges.push_back({u, v});
  json doc;
  doc["n"] = graph.node_count();
  doc["edges"] = std::move(edges);
  return doc.dump() + "\n";
}

Graph graph_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::parse, std::string("graph json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges")) {
    fail(ErrorCode::parse, "graph json: expected object with 'n' and 'edges'");
  }
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 0) {
    fail(ErrorCode::parse, "graph json: 'n' must be a non-negative integer");
  }
  const int n = doc["n"].get<int>();
  const auto& arr = doc["edges"];
  if (!arr.is_array()) fail(ErrorCode::parse, "graph json: 'edges' must be an array");
  std::vector<Edge> edges;
  edges.reserve(arr.size());
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      fail(ErrorCode::parse, "graph json: each edge must be [u, v] with integer endpoints");
    }
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  try {
    return Graph::from_edges(n, std::move(edges));
  } catch (const Error& e) {
    fail(ErrorCode::parse, std::string("graph json: ") + e.what());
  }
}

void save_graph(const Graph& graph, const std::string& path) { write_text_file(path, graph_to_json(graph)); }

Graph load_graph(const std::string& path) { return graph_from_json(read_text_file(path)); }

}  // namespace p2pshare
