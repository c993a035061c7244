#pragma once

#include <string>
#include <utility>
#include <vector>

namespace p2pshare {

/// Parses `key = value` lines. `#` starts a comment; blank lines are
/// skipped. Duplicate keys and lines without `=` are parse errors. Order of
/// first appearance is kept.
std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text);

/// Splits on commas that are not inside parentheses and trims each piece.
std::vector<std::string> split_list(const std::string& text);

double parse_real(const std::string& key, const std::string& text);
long long parse_integer(const std::string& key, const std::string& text);

}  // namespace p2pshare
