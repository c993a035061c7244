#include "p2pshare/serialize.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "p2pshare/error.hpp"

namespace p2pshare {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorCode::io, "error reading '" + path + "'");
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) fail(ErrorCode::io, "error writing '" + path + "'");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string engagement_to_json(const EngagementSolution& sol) {
  const auto& eng = sol.engagement;
  const Graph& g = eng.graph();
  json edges = json::array();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const double m = eng.magnitude(e);
    if (m > 0.0) edges.push_back({g.edge(e).first, g.edge(e).second, m});
  }
  json doc;
  doc["n"] = g.node_count();
  doc["edges"] = std::move(edges);
  doc["objective"] = sol.objective;
  doc["exact"] = sol.exact;
  doc["stage"] = sol.stage;
  return doc.dump() + "\n";
}

EngagementSolution engagement_from_json(const std::string& text, const GraphPtr& graph) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::parse, std::string("engagement json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("edges") || !doc["edges"].is_array()) {
    fail(ErrorCode::parse, "engagement json: expected an object with an 'edges' array");
  }
  if (doc.contains("n") && (!doc["n"].is_number_integer() || doc["n"].get<int>() != graph->node_count())) {
    fail(ErrorCode::parse, "engagement json: 'n' does not match the graph");
  }
  std::vector<std::tuple<int, int, double>> triples;
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
        !e[2].is_number()) {
      fail(ErrorCode::parse, "engagement json: each edge must be [u, v, gamma]");
    }
    triples.emplace_back(e[0].get<int>(), e[1].get<int>(), e[2].get<double>());
  }
  EngagementSolution sol;
  sol.engagement = EngagementMap::from_triples(graph, triples);
  sol.objective = doc.value("objective", sol.engagement.total());
  sol.exact = doc.value("exact", true);
  sol.stage = doc.value("stage", 1);
  return sol;
}

std::string settlement_to_json(const SettlementResult& r) {
  const auto& L = r.layers;
  json doc;
  doc["xi"] = r.xi;
  doc["total_in"] = r.total_in;
  doc["layers"] = {
      {"self_first", L.self_first},     {"friends_received", L.friends_received},
      {"friends_paid", L.friends_paid}, {"fof_received", L.fof_received},
      {"fof_paid", L.fof_paid},         {"residual_self", L.residual_self},
  };
  return doc.dump() + "\n";
}

std::string qp_shares_to_json(const Graph& graph, const QpShares& shares) {
  json edges = json::array();
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    edges.push_back({graph.edge(e).first, graph.edge(e).second, shares.edge_share[e]});
  }
  json doc;
  doc["n"] = graph.node_count();
  doc["self"] = shares.self_share;
  doc["edges"] = std::move(edges);
  doc["objective"] = shares.objective;
  return doc.dump() + "\n";
}

std::vector<std::vector<double>> matrix_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::parse, std::string("matrix json: ") + e.what());
  }
  if (doc.is_object() && doc.contains("matrix")) doc = doc["matrix"];
  if (!doc.is_array() || doc.empty()) fail(ErrorCode::parse, "matrix json: expected a nonempty array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : doc) {
    if (!row.is_array()) fail(ErrorCode::parse, "matrix json: each row must be an array");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) fail(ErrorCode::parse, "matrix json: entries must be numbers");
      r.push_back(v.get<double>());
    }
    if (!rows.empty() && r.size() != rows.front().size()) fail(ErrorCode::parse, "matrix json: ragged rows");
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace p2pshare
