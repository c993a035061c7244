#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "p2pshare/p2pshare.h"

namespace {

constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

struct Exit {
  int code;
};

// Library failures map to exit code 1.
void ok(p2p_status s, const std::string& what) {
  if (s == P2P_OK) return;
  std::cerr << "p2pshare: " << what << ": " << p2p_status_string(s) << ": " << p2p_last_error() << "\n";
  throw Exit{kDomainError};
}

[[noreturn]] void usage(const std::string& message) {
  std::cerr << "p2pshare: " << message << "\n";
  throw Exit{kUsageError};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Graph = std::unique_ptr<p2p_graph, Deleter<p2p_graph, p2p_graph_free>>;
using Claims = std::unique_ptr<p2p_claims, Deleter<p2p_claims, p2p_claims_free>>;
using Engagement = std::unique_ptr<p2p_engagement, Deleter<p2p_engagement, p2p_engagement_free>>;
using Settlement = std::unique_ptr<p2p_settlement, Deleter<p2p_settlement, p2p_settlement_free>>;
using Shares = std::unique_ptr<p2p_qp_shares, Deleter<p2p_qp_shares, p2p_qp_free>>;
using Matrix = std::unique_ptr<p2p_share_matrix, Deleter<p2p_share_matrix, p2p_share_matrix_free>>;
using Report = std::unique_ptr<p2p_report, Deleter<p2p_report, p2p_report_free>>;

std::string num(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

double to_real(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    usage("bad number '" + s + "' in " + what);
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    std::cerr << "p2pshare: cannot write " << path << "\n";
    throw Exit{kDomainError};
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "p2pshare: cannot read " << path << "\n";
    throw Exit{kDomainError};
  }
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Graph load_graph(const std::string& path) {
  p2p_graph* g = nullptr;
  ok(p2p_graph_load(path.c_str(), &g), "loading graph " + path);
  return Graph(g);
}

double mean_degree(const p2p_graph* g) {
  const int n = p2p_graph_node_count(g);
  return n > 0 ? 2.0 * static_cast<double>(p2p_graph_edge_count(g)) / n : 0.0;
}

// ------------------------------------------------------------ gen-graph

struct GenGraphArgs {
  int n = 0;
  double dbar = 20;
  double sigma = 0;
  int min_degree = 5;
  std::optional<std::uint64_t> seed;
  std::string out;
};

Graph generate(const GenGraphArgs& a) {
  if (!a.seed) usage("--seed is required");
  p2p_degree_spec spec;
  p2p_degree_spec_init(&spec);
  spec.mean_degree = a.dbar;
  spec.degree_sd = a.sigma;
  spec.min_degree = a.min_degree;
  p2p_graph* g = nullptr;
  ok(p2p_graph_generate(&spec, a.n, *a.seed, &g), "generating graph");
  return Graph(g);
}

void run_gen_graph(const GenGraphArgs& a) {
  auto g = generate(a);
  ok(p2p_graph_save(g.get(), a.out.c_str()), "writing " + a.out);
  const int n = p2p_graph_node_count(g.get());
  std::vector<int> deg(static_cast<std::size_t>(n));
  ok(p2p_graph_degrees(g.get(), deg.data()), "degrees");
  double sum = 0.0, sq = 0.0;
  for (int d : deg) sum += d;
  const double mean = n ? sum / n : 0.0;
  for (int d : deg) sq += (d - mean) * (d - mean);
  const int lo = n ? *std::min_element(deg.begin(), deg.end()) : 0;
  const int hi = n ? *std::max_element(deg.begin(), deg.end()) : 0;
  std::cout << "nodes " << n << " edges " << p2p_graph_edge_count(g.get()) << " degree min " << lo << " mean "
            << num(mean) << " sd " << num(n ? std::sqrt(sq / n) : 0.0) << " max " << hi << "\n";
}

// ------------------------------------------------------------ simulate

struct SimulateArgs {
  std::string graph;
  GenGraphArgs gen;
  std::string mechanism = "uniform";
  std::string gamma = "nominal";
  std::optional<double> dbar;
  double p = 0.1;
  std::string severity = "gamma:100,1000,2000";
  double s = 1000;
  std::optional<int> reps;
  int min_reps = 10;
  int max_reps = 500;
  double rel_se = 0.01;
  std::string claims;
  std::string out;
  std::string detail;
};

// "z:y,z:y,..." with z in {0, 1}.
Claims parse_claims(const std::string& text, int n, double s) {
  std::vector<std::uint8_t> z;
  std::vector<double> y;
  for (const auto& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) usage("--claims expects z:y pairs, got '" + item + "'");
    z.push_back(parts[0] == "1" ? 1 : 0);
    if (parts[0] != "0" && parts[0] != "1") usage("claim indicator must be 0 or 1, got '" + parts[0] + "'");
    y.push_back(to_real(parts[1], "--claims"));
  }
  if (static_cast<int>(z.size()) != n) {
    usage("--claims has " + std::to_string(z.size()) + " entries for " + std::to_string(n) + " nodes");
  }
  p2p_claims* c = nullptr;
  ok(p2p_claims_from_losses(z.data(), y.data(), n, s, &c), "claims");
  return Claims(c);
}

void run_simulate(SimulateArgs a) {
  Graph g;
  if (!a.graph.empty()) {
    g = load_graph(a.graph);
  } else {
    if (a.gen.n <= 0) usage("either --graph or --n with generation flags is required");
    a.gen.dbar = a.dbar.value_or(a.gen.dbar);
    g = generate(a.gen);
  }
  const double dbar = a.dbar.value_or(a.graph.empty() ? a.gen.dbar : mean_degree(g.get()));

  if (!a.claims.empty()) {
    auto claims = parse_claims(a.claims, p2p_graph_node_count(g.get()), a.s);
    p2p_settlement* r = nullptr;
    ok(p2p_simulate_claims(g.get(), claims.get(), a.mechanism.c_str(), a.gamma.c_str(), dbar, &r), "settlement");
    Settlement res(r);
    std::vector<double> xi(static_cast<std::size_t>(p2p_settlement_size(r)));
    ok(p2p_settlement_xi(r, xi.data()), "settlement");
    if (!a.detail.empty()) ok(p2p_settlement_save(r, a.detail.c_str()), "writing " + a.detail);
    std::cout << "xi";
    for (double v : xi) std::cout << ' ' << num(v);
    std::cout << "\n";
    return;
  }
  if (!a.detail.empty()) usage("--detail needs --claims");
  if (!a.gen.seed) usage("--seed is required");
  if (a.reps) {
    if (*a.reps < 1) usage("--reps must be >= 1");
    a.min_reps = a.max_reps = *a.reps;
  }
  p2p_loss_model model;
  ok(p2p_loss_model_init(&model, a.p, a.severity.c_str(), a.s), "loss model");
  p2p_report* rep = nullptr;
  ok(p2p_simulate(g.get(), &model, a.mechanism.c_str(), a.gamma.c_str(), dbar, a.min_reps, a.max_reps, a.rel_se,
                  *a.gen.seed, &rep),
     "simulation");
  Report report(rep);
  write_output(a.out, p2p_report_csv(rep));
}

// ------------------------------------------------------------ optimize

struct OptimizeArgs {
  std::string graph;
  double s = 0;
  std::optional<double> gamma;
  std::optional<std::size_t> sparse;
  std::string fof;
  double z = 0;
  bool qp = false;
  std::string out;
};

std::string stem_of(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return path.substr(0, dot);
  return path;
}

void run_optimize(const OptimizeArgs& a) {
  auto g = load_graph(a.graph);
  const int modes = (a.sparse ? 1 : 0) + (a.fof.empty() ? 0 : 1) + (a.qp ? 1 : 0);
  if (modes > 1) usage("--sparse, --fof and --qp are mutually exclusive");
  if (a.z != 0 && a.fof.empty()) usage("--z applies to --fof only");
  const double gamma = a.gamma.value_or(mean_degree(g.get()) > 0 ? a.s / mean_degree(g.get()) : 0.0);

  if (a.qp) {
    p2p_qp_shares* q = nullptr;
    ok(p2p_optimize_qp(g.get(), a.s, gamma, &q), "qp");
    Shares shares(q);
    ok(p2p_qp_save(q, g.get(), a.out.c_str()), "writing " + a.out);
    std::cout << "objective " << num(p2p_qp_objective(q)) << "\n";
    return;
  }
  if (!a.fof.empty()) {
    const auto parts = split(a.fof, ',');
    if (parts.size() != 2) usage("--fof expects g1,g2");
    const double g1 = to_real(parts[0], "--fof"), g2 = to_real(parts[1], "--fof");
    p2p_engagement *e1 = nullptr, *e2 = nullptr;
    p2p_graph* fg = nullptr;
    ok(p2p_optimize_two_stage(g.get(), a.s, g1, g2, a.z, &e1, &fg, &e2), "two-stage optimization");
    Engagement s1(e1), s2(e2);
    Graph fof(fg);
    const std::string stem = stem_of(a.out);
    ok(p2p_engagement_save(e1, (stem + ".stage1.json").c_str()), "writing stage 1");
    ok(p2p_graph_save(fg, (stem + ".fof_graph.json").c_str()), "writing friends-of-friends graph");
    ok(p2p_engagement_save(e2, (stem + ".stage2.json").c_str()), "writing stage 2");
    std::cout << "stage1 objective " << num(p2p_engagement_objective(e1)) << "\n"
              << "fof edges " << p2p_graph_edge_count(fg) << "\n"
              << "stage2 objective " << num(p2p_engagement_objective(e2)) << "\n";
    return;
  }
  p2p_engagement* e = nullptr;
  if (a.sparse) {
    ok(p2p_optimize_sparse(g.get(), a.s, gamma, *a.sparse, &e), "sparse optimization");
  } else {
    ok(p2p_optimize_lp(g.get(), a.s, gamma, &e), "optimization");
  }
  Engagement eng(e);
  ok(p2p_engagement_save(e, a.out.c_str()), "writing " + a.out);
  std::cout << "objective " << num(p2p_engagement_objective(e)) << (p2p_engagement_exact(e) ? "" : " (heuristic)")
            << "\n";
}

// ------------------------------------------------------------ sweep, fairness, order

void run_sweep(const std::string& config, const std::string& out, int workers) {
  p2p_report* rep = nullptr;
  ok(p2p_sweep_run_file(config.c_str(), workers, &rep), "sweep");
  Report report(rep);
  write_output(out, p2p_report_csv(rep));
}

void run_fairness(int dbar, double p) {
  p2p_fairness f;
  ok(p2p_fairness_exact(dbar, p, &f), "fairness");
  std::cout << "p_zero " << num(f.p_zero) << "\n"
            << "p_full " << num(f.p_full) << "\n"
            << "p_strict " << num(f.p_strict) << "\n"
            << "p_weak " << num(f.p_weak) << "\n";
}

// "v:p,v:p,..."
void parse_dist(const std::string& text, std::vector<double>& v, std::vector<double>& p) {
  for (const auto& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) usage("distribution expects value:probability pairs, got '" + item + "'");
    v.push_back(to_real(parts[0], "distribution"));
    p.push_back(to_real(parts[1], "distribution"));
  }
}

struct OrderArgs {
  std::string matrix;
  std::string apply;
  std::string sigma;
  std::string x;
  std::string y;
  double tol = 1e-9;
};

void run_order(const OrderArgs& a) {
  if (a.matrix.empty() == a.x.empty()) usage("give either --matrix or --x/--y");
  if (!a.x.empty()) {
    if (a.y.empty()) usage("--x needs --y");
    std::vector<double> xv, xp, yv, yp;
    parse_dist(a.x, xv, xp);
    parse_dist(a.y, yv, yp);
    const char* res = nullptr;
    ok(p2p_convex_order_compare(xv.data(), xp.data(), xv.size(), yv.data(), yp.data(), yv.size(), a.tol, &res),
       "convex order");
    std::cout << res << "\n";
    return;
  }
  p2p_share_matrix* m = nullptr;
  ok(p2p_share_matrix_load(a.matrix.c_str(), &m), "loading matrix " + a.matrix);
  Matrix mat(m);
  const char* cls = p2p_share_matrix_classify(m, a.tol);
  if (!cls) ok(P2P_INVALID_ARGUMENT, "classify");
  std::cout << cls << "\n";
  const std::size_t n = p2p_share_matrix_size(m);
  if (!a.apply.empty()) {
    std::vector<double> x;
    for (const auto& s : split(a.apply, ',')) x.push_back(to_real(s, "--apply"));
    if (x.size() != n) usage("--apply needs " + std::to_string(n) + " values");
    std::vector<double> xi(n);
    ok(p2p_share_matrix_apply(m, x.data(), xi.data()), "apply");
    std::cout << "xi";
    for (double v : xi) std::cout << ' ' << num(v);
    std::cout << "\n";
  }
  if (!a.sigma.empty()) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_file(a.sigma));
      if (doc.is_object() && doc.contains("matrix")) doc = doc["matrix"];
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "p2pshare: " << a.sigma << ": " << e.what() << "\n";
      throw Exit{kDomainError};
    }
    std::vector<double> flat;
    if (!doc.is_array() || doc.size() != n) usage("--sigma must be a " + std::to_string(n) + "x" + std::to_string(n) + " array");
    for (const auto& row : doc) {
      if (!row.is_array() || row.size() != n) usage("--sigma rows must have " + std::to_string(n) + " entries");
      for (const auto& v : row) flat.push_back(v.get<double>());
    }
    double t = 0.0;
    ok(p2p_share_matrix_trace_variance(m, flat.data(), &t), "trace");
    std::cout << "trace " << num(t) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Peer-to-peer risk sharing on networks"};
  app.set_version_flag("--version", std::string(p2p_version()));
  app.require_subcommand(1);

  GenGraphArgs gen;
  auto* gg = app.add_subcommand("gen-graph", "Generate a random network with a Gamma degree law");
  gg->add_option("--n", gen.n, "Number of nodes")->required()->check(CLI::PositiveNumber);
  gg->add_option("--dbar", gen.dbar, "Mean degree")->capture_default_str();
  gg->add_option("--sigma", gen.sigma, "Degree standard deviation")->capture_default_str();
  gg->add_option("--min-degree", gen.min_degree, "Minimum degree")->capture_default_str();
  gg->add_option("--seed", gen.seed, "Random seed (required)");
  gg->add_option("--out", gen.out, "Graph JSON output")->required();

  SimulateArgs sim;
  auto* sm = app.add_subcommand("simulate", "Replicated settlement of one mechanism");
  sm->add_option("--graph", sim.graph, "Graph JSON input");
  sm->add_option("--n", sim.gen.n, "Generate a graph with this many nodes");
  sm->add_option("--sigma", sim.gen.sigma, "Degree standard deviation for generation");
  sm->add_option("--min-degree", sim.gen.min_degree, "Minimum degree for generation");
  sm->add_option("--dbar", sim.dbar, "Nominal mean degree (default: generation value or graph mean)");
  sm->add_option("--seed", sim.gen.seed, "Random seed (required unless --claims)");
  sm->add_option("--mechanism", sim.mechanism,
                 "none | uniform | uniform_self(z) | lp | lp(z) | qp | fof(g1,g2[,z])")
      ->capture_default_str();
  sm->add_option("--gamma", sim.gamma, "nominal | empirical | a number")->capture_default_str();
  sm->add_option("--p", sim.p, "Claim probability")->capture_default_str();
  sm->add_option("--severity", sim.severity, "point:c | uniform:a,b | gamma:shift,mean,sd")->capture_default_str();
  sm->add_option("--s", sim.s, "Deductible")->capture_default_str();
  sm->add_option("--reps", sim.reps, "Fixed number of replications");
  sm->add_option("--min-reps", sim.min_reps)->capture_default_str();
  sm->add_option("--max-reps", sim.max_reps)->capture_default_str();
  sm->add_option("--rel-se", sim.rel_se)->capture_default_str();
  sm->add_option("--claims", sim.claims, "Settle fixed claims z:y,z:y,... instead of replicating");
  sm->add_option("--detail", sim.detail, "Settlement JSON for --claims");
  sm->add_option("--out", sim.out, "CSV output (default stdout)");

  OptimizeArgs opt;
  auto* op = app.add_subcommand("optimize", "Engagement optimization");
  op->add_option("--graph", opt.graph, "Graph JSON input")->required();
  op->add_option("--s", opt.s, "Deductible")->required();
  op->add_option("--gamma", opt.gamma, "Edge cap (default s / mean degree)");
  op->add_option("--sparse", opt.sparse, "At most this many engaged edges");
  op->add_option("--fof", opt.fof, "Two-stage caps g1,g2");
  op->add_option("--z", opt.z, "Self-contribution for --fof");
  op->add_flag("--qp", opt.qp, "Minimum-variance linear shares");
  op->add_option("--out", opt.out, "JSON output (stem for --fof)")->required();

  std::string config, sweep_out;
  int workers = 0;
  auto* sw = app.add_subcommand("sweep", "Run a configured sweep");
  sw->add_option("--config", config, "key = value config file")->required();
  sw->add_option("--out", sweep_out, "CSV output (default stdout)");
  sw->add_option("--workers", workers, "Worker threads (default: config or hardware)");

  int fair_dbar = 20;
  double fair_p = 0.1;
  auto* fa = app.add_subcommand("fairness", "Exact fairness probabilities on a regular network");
  fa->add_option("--dbar", fair_dbar)->capture_default_str();
  fa->add_option("--p", fair_p)->capture_default_str();

  OrderArgs ord;
  auto* od = app.add_subcommand("order", "Sharing matrices and convex order");
  od->add_option("--matrix", ord.matrix, "Share matrix JSON");
  od->add_option("--apply", ord.apply, "Loss vector x1,x2,...");
  od->add_option("--sigma", ord.sigma, "Covariance matrix JSON for the trace");
  od->add_option("--x", ord.x, "Distribution v:p,v:p,...");
  od->add_option("--y", ord.y, "Distribution v:p,v:p,...");
  od->add_option("--tol", ord.tol)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }

  try {
    if (gg->parsed()) {
      run_gen_graph(gen);
    } else if (sm->parsed()) {
      run_simulate(sim);
    } else if (op->parsed()) {
      run_optimize(opt);
    } else if (sw->parsed()) {
      run_sweep(config, sweep_out, workers);
    } else if (fa->parsed()) {
      run_fairness(fair_dbar, fair_p);
    } else if (od->parsed()) {
      run_order(ord);
    }
  } catch (const Exit& e) {
    return e.code;
  }
  return 0;
}
