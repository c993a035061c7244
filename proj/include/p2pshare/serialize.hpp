#pragma once

#include <string>
#include <vector>

#include "p2pshare/graph.hpp"
#include "p2pshare/optimize.hpp"
#include "p2pshare/sharing.hpp"

namespace p2pshare {

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

/// {"n", "edges": [[u, v, gamma], ...], "objective", "exact", "stage"}.
/// Only edges with nonzero magnitude are listed.
std::string engagement_to_json(const EngagementSolution& sol);
/// Reads an engagement file against the graph it was built on.
EngagementSolution engagement_from_json(const std::string& text, const GraphPtr& graph);

std::string settlement_to_json(const SettlementResult& result);
std::string qp_shares_to_json(const Graph& graph, const QpShares& shares);

/// Accepts [[...], ...] or {"matrix": [[...], ...]}; rows must be equal length.
std::vector<std::vector<double>> matrix_from_json(const std::string& text);

}  // namespace p2pshare
