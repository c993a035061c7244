#include "p2pshare/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "p2pshare/analytics.hpp"
#include "p2pshare/error.hpp"
#include "p2pshare/serialize.hpp"

namespace p2pshare {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// "name(a,b)" -> ("name", ["a", "b"]); "name" -> ("name", []).
std::pair<std::string, std::vector<std::string>> split_call(const std::string& text) {
  const auto open = text.find('(');
  if (open == std::string::npos) return {trim(text), {}};
  if (text.back() != ')') fail(ErrorCode::parse, "mechanism '" + text + "': missing ')'");
  return {trim(text.substr(0, open)), split_list(text.substr(open + 1, text.size() - open - 2))};
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail(ErrorCode::parse, "config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) fail(ErrorCode::parse, "config line " + std::to_string(lineno) + ": empty key");
    if (!seen.insert(key).second) fail(ErrorCode::parse, "config: duplicate key '" + key + "'");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (depth != 0) fail(ErrorCode::parse, "unbalanced parentheses in '" + text + "'");
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

double parse_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    fail(ErrorCode::parse, key + ": expected a number, got '" + text + "'");
  }
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorCode::parse, key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

Mechanism Mechanism::parse(const std::string& text) {
  const auto [name, args] = split_call(text);
  Mechanism m;
  auto num = [&](std::size_t k) { return parse_real("mechanism " + text, args[k]); };
  if (name == "none" && args.empty()) {
    m.kind = Kind::none;
  } else if (name == "uniform" && args.empty()) {
    m.kind = Kind::uniform;
  } else if (name == "uniform_self" && args.size() == 1) {
    m.kind = Kind::uniform_self;
    m.z = num(0);
  } else if (name == "lp" && args.size() <= 1) {
    m.kind = Kind::lp;
    if (!args.empty()) m.z = num(0);
  } else if (name == "qp" && args.empty()) {
    m.kind = Kind::qp;
  } else if (name == "fof" && (args.size() == 2 || args.size() == 3)) {
    m.kind = Kind::fof;
    m.gamma1 = num(0);
    m.gamma2 = num(1);
    if (args.size() == 3) m.z = num(2);
  } else {
    fail(ErrorCode::parse, "unknown mechanism '" + text +
                               "' (expected none, uniform, uniform_self(z), lp, lp(z), qp, fof(g1,g2[,z]))");
  }
  if (m.z < 0.0 || m.gamma1 < 0.0 || m.gamma2 < 0.0) {
    fail(ErrorCode::parse, "mechanism '" + text + "': parameters must be >= 0");
  }
  return m;
}

std::string Mechanism::tag() const {
  switch (kind) {
    case Kind::none:
      return "none";
    case Kind::uniform:
      return "uniform";
    case Kind::uniform_self:
      return "uniform_self";
    case Kind::lp:
      return "lp";
    case Kind::qp:
      return "qp";
    case Kind::fof:
      return "fof:" + format_double(gamma1) + ":" + format_double(gamma2);
  }
  return "?";
}

std::string Mechanism::to_string() const {
  switch (kind) {
    case Kind::uniform_self:
      return "uniform_self(" + format_double(z) + ")";
    case Kind::lp:
      return z == 0.0 ? "lp" : "lp(" + format_double(z) + ")";
    case Kind::fof:
      return "fof(" + format_double(gamma1) + "," + format_double(gamma2) +
             (z == 0.0 ? std::string() : "," + format_double(z)) + ")";
    default:
      return tag();
  }
}

GammaRule GammaRule::parse(const std::string& text) {
  GammaRule r;
  if (text == "nominal") {
    r.kind = Kind::nominal;
  } else if (text == "empirical") {
    r.kind = Kind::empirical;
  } else {
    r.kind = Kind::fixed;
    r.value = parse_real("gamma", text);
    if (r.value < 0.0) fail(ErrorCode::parse, "gamma must be >= 0");
  }
  return r;
}

std::string GammaRule::to_string() const {
  switch (kind) {
    case Kind::nominal:
      return "nominal";
    case Kind::empirical:
      return "empirical";
    case Kind::fixed:
      return format_double(value);
  }
  return "?";
}

double GammaRule::gamma(double deductible, double dbar, const Graph& graph) const {
  switch (kind) {
    case Kind::nominal:
      require(dbar > 0.0, "gamma rule: dbar must be > 0");
      return deductible / dbar;
    case Kind::empirical: {
      const double md = graph.mean_degree();
      require(md > 0.0, "gamma rule: graph has no edges");
      return deductible / md;
    }
    case Kind::fixed:
      return value;
  }
  return 0.0;
}

void SweepConfig::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorCode::invalid_argument, "config: " + what); };
  if (n < 2) bad("n must be >= 2");
  if (min_degree < 1) bad("min_degree must be >= 1");
  if (!(dbar > min_degree)) bad("dbar must exceed min_degree");
  if (sigmas.empty()) bad("sigmas must not be empty");
  for (double s : sigmas) {
    if (!(s >= 0.0)) bad("sigmas must be >= 0");
  }
  if (seeds < 1) bad("seeds must be >= 1");
  if (mechanisms.empty()) bad("mechanisms must not be empty");
  if (min_reps < 1 || max_reps < min_reps) bad("need 1 <= min_reps <= max_reps");
  if (!(rel_se > 0.0)) bad("rel_se must be > 0");
  if (workers < 0) bad("workers must be >= 0");
  for (const auto& m : mechanisms) {
    if (m.z > loss.deductible) bad("mechanism " + m.to_string() + ": z exceeds s");
  }
  loss.validate();
}

SweepConfig SweepConfig::parse(const std::string& text) {
  SweepConfig c;
  for (const auto& [key, value] : parse_key_values(text)) {
    if (key == "n") {
      c.n = static_cast<int>(parse_integer(key, value));
    } else if (key == "dbar") {
      c.dbar = parse_real(key, value);
    } else if (key == "min_degree") {
      c.min_degree = static_cast<int>(parse_integer(key, value));
    } else if (key == "sigmas" || key == "sigma") {
      c.sigmas.clear();
      for (const auto& s : split_list(value)) c.sigmas.push_back(parse_real(key, s));
    } else if (key == "seeds") {
      c.seeds = static_cast<int>(parse_integer(key, value));
    } else if (key == "seed") {
      const long long s = parse_integer(key, value);
      if (s < 0) fail(ErrorCode::parse, "seed must be >= 0");
      c.master_seed = static_cast<std::uint64_t>(s);
    } else if (key == "p") {
      c.loss.claim_probability = parse_real(key, value);
    } else if (key == "severity") {
      c.loss.severity = Severity::parse(value);
    } else if (key == "s") {
      c.loss.deductible = parse_real(key, value);
    } else if (key == "gamma") {
      c.gamma_rule = GammaRule::parse(value);
    } else if (key == "mechanisms") {
      c.mechanisms.clear();
      for (const auto& m : split_list(value)) c.mechanisms.push_back(Mechanism::parse(m));
    } else if (key == "min_reps") {
      c.min_reps = static_cast<int>(parse_integer(key, value));
    } else if (key == "max_reps") {
      c.max_reps = static_cast<int>(parse_integer(key, value));
    } else if (key == "rel_se") {
      c.rel_se = parse_real(key, value);
    } else if (key == "workers") {
      c.workers = static_cast<int>(parse_integer(key, value));
    } else {
      fail(ErrorCode::parse, "config: unknown key '" + key + "'");
    }
  }
  try {
    c.validate();
  } catch (const Error& e) {
    fail(ErrorCode::parse, e.what());
  }
  return c;
}

SweepConfig SweepConfig::load(const std::string& path) { return parse(read_text_file(path)); }

std::string SweepConfig::echo() const {
  std::string sig;
  for (std::size_t k = 0; k < sigmas.size(); ++k) sig += (k ? ", " : "") + format_double(sigmas[k]);
  std::string mech;
  for (std::size_t k = 0; k < mechanisms.size(); ++k) mech += (k ? ", " : "") + mechanisms[k].to_string();
  std::ostringstream out;
  out << "n = " << n << "\n"
      << "dbar = " << format_double(dbar) << "\n"
      << "min_degree = " << min_degree << "\n"
      << "sigmas = " << sig << "\n"
      << "seeds = " << seeds << "\n"
      << "seed = " << master_seed << "\n"
      << "p = " << format_double(loss.claim_probability) << "\n"
      << "severity = " << loss.severity.to_string() << "\n"
      << "s = " << format_double(loss.deductible) << "\n"
      << "gamma = " << gamma_rule.to_string() << "\n"
      << "mechanisms = " << mech << "\n"
      << "min_reps = " << min_reps << "\n"
      << "max_reps = " << max_reps << "\n"
      << "rel_se = " << format_double(rel_se) << "\n";
  return out.str();
}

}  // namespace p2pshare
