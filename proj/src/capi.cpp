#include "p2pshare/p2pshare.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <new>
#include <string>

#include "p2pshare/analytics.hpp"
#include "p2pshare/error.hpp"
#include "p2pshare/graph.hpp"
#include "p2pshare/loss_model.hpp"
#include "p2pshare/optimize.hpp"
#include "p2pshare/ordering.hpp"
#include "p2pshare/serialize.hpp"
#include "p2pshare/sharing.hpp"

using namespace p2pshare;

struct p2p_graph {
  GraphPtr g;
};
struct p2p_claims {
  ClaimSample c;
};
struct p2p_engagement {
  EngagementSolution sol;
};
struct p2p_settlement {
  SettlementResult r;
};
struct p2p_qp_shares {
  QpShares q;
};
struct p2p_share_matrix {
  ShareMatrix m;
};
struct p2p_report {
  std::vector<SweepRow> rows;
  std::string csv;
};

namespace {

thread_local std::string last_error;

p2p_status code_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument:
      return P2P_INVALID_ARGUMENT;
    case ErrorCode::domain:
      return P2P_DOMAIN;
    case ErrorCode::not_graphical:
      return P2P_NOT_GRAPHICAL;
    case ErrorCode::capacity:
      return P2P_CAPACITY;
    case ErrorCode::io:
      return P2P_IO;
    case ErrorCode::parse:
      return P2P_PARSE;
    case ErrorCode::numeric:
      return P2P_NUMERIC;
  }
  return P2P_INTERNAL;
}

template <class F>
p2p_status guard(F&& f) {
  try {
    f();
    last_error.clear();
    return P2P_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return code_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return P2P_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return P2P_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) fail(ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
}

LossModel to_model(const p2p_loss_model* m) {
  need(m, "loss model");
  LossModel out;
  out.claim_probability = m->claim_probability;
  out.deductible = m->deductible;
  switch (m->kind) {
    case P2P_SEVERITY_POINT:
      out.severity = Severity::point(m->param[0]);
      break;
    case P2P_SEVERITY_UNIFORM:
      out.severity = Severity::uniform(m->param[0], m->param[1]);
      break;
    case P2P_SEVERITY_GAMMA:
      out.severity = Severity::shifted_gamma(m->param[0], m->param[1], m->param[2]);
      break;
    default:
      fail(ErrorCode::invalid_argument, "unknown severity kind");
  }
  out.validate();
  return out;
}

template <class T>
void copy_out(const std::vector<T>& v, T* out) {
  need(out, "output buffer");
  std::copy(v.begin(), v.end(), out);
}

}  // namespace

extern "C" {

const char* p2p_last_error(void) { return last_error.c_str(); }

const char* p2p_status_string(p2p_status status) {
  switch (status) {
    case P2P_OK:
      return "ok";
    case P2P_INVALID_ARGUMENT:
      return "invalid argument";
    case P2P_DOMAIN:
      return "domain error";
    case P2P_NOT_GRAPHICAL:
      return "degree sequence not graphical";
    case P2P_CAPACITY:
      return "capacity violated";
    case P2P_IO:
      return "i/o error";
    case P2P_PARSE:
      return "parse error";
    case P2P_NUMERIC:
      return "numerical failure";
    case P2P_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* p2p_version(void) { return P2PSHARE_VERSION; }

void p2p_degree_spec_init(p2p_degree_spec* spec) {
  if (spec == nullptr) return;
  const DegreeSpec d;
  spec->mean_degree = d.mean_degree;
  spec->degree_sd = d.degree_sd;
  spec->min_degree = d.min_degree;
}

p2p_status p2p_degree_sequence_sample(const p2p_degree_spec* spec, int n, uint64_t seed, int* out_degrees) {
  return guard([&] {
    need(spec, "spec");
    Rng rng = make_stream({seed});
    copy_out(sample_degree_sequence({spec->mean_degree, spec->degree_sd, spec->min_degree}, n, rng), out_degrees);
  });
}

p2p_status p2p_graph_realize(const int* degrees, int n, uint64_t seed, int64_t shuffle_swaps, p2p_graph** out,
                             size_t* out_prefix) {
  if (out_prefix) *out_prefix = 0;
  return guard([&] {
    need(degrees, "degrees");
    need(out, "out");
    require(n >= 1, "n must be >= 1");
    std::span<const int> d(degrees, static_cast<std::size_t>(n));
    Rng rng = make_stream({seed});
    const std::size_t swaps = shuffle_swaps < 0 ? default_swaps(d) : static_cast<std::size_t>(shuffle_swaps);
    try {
      *out = new p2p_graph{share(realize_graph(d, rng, swaps))};
    } catch (const NotGraphicalError& e) {
      if (out_prefix) *out_prefix = e.prefix();
      throw;
    }
  });
}

p2p_status p2p_graph_generate(const p2p_degree_spec* spec, int n, uint64_t seed, p2p_graph** out) {
  return guard([&] {
    need(spec, "spec");
    need(out, "out");
    Rng rng = make_stream({seed});
    *out = new p2p_graph{share(generate_graph({spec->mean_degree, spec->degree_sd, spec->min_degree}, n, rng))};
  });
}

p2p_status p2p_graph_from_edges(int n, const int* edges, size_t edge_count, p2p_graph** out) {
  return guard([&] {
    need(out, "out");
    if (edge_count > 0) need(edges, "edges");
    std::vector<Edge> e;
    e.reserve(edge_count);
    for (size_t k = 0; k < edge_count; ++k) e.emplace_back(edges[2 * k], edges[2 * k + 1]);
    *out = new p2p_graph{share(Graph::from_edges(n, std::move(e)))};
  });
}

p2p_status p2p_graph_load(const char* path, p2p_graph** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new p2p_graph{share(load_graph(path))};
  });
}

p2p_status p2p_graph_save(const p2p_graph* graph, const char* path) {
  return guard([&] {
    need(graph, "graph");
    need(path, "path");
    save_graph(*graph->g, path);
  });
}

int p2p_graph_node_count(const p2p_graph* graph) { return graph ? graph->g->node_count() : 0; }

size_t p2p_graph_edge_count(const p2p_graph* graph) { return graph ? graph->g->edge_count() : 0; }

p2p_status p2p_graph_degrees(const p2p_graph* graph, int* out_degrees) {
  return guard([&] {
    need(graph, "graph");
    copy_out(graph->g->degrees(), out_degrees);
  });
}

p2p_status p2p_graph_edges(const p2p_graph* graph, int* out_edges) {
  return guard([&] {
    need(graph, "graph");
    need(out_edges, "output buffer");
    std::size_t k = 0;
    for (const auto& [u, v] : graph->g->edges()) {
      out_edges[k++] = u;
      out_edges[k++] = v;
    }
  });
}

p2p_status p2p_graph_friends_of_friends(const p2p_graph* graph, const int* eligible, size_t count, p2p_graph** out) {
  return guard([&] {
    need(graph, "graph");
    need(out, "out");
    if (count > 0) need(eligible, "eligible");
    std::vector<int> nodes(eligible, eligible + count);
    *out = new p2p_graph{share(friends_of_friends(*graph->g, nodes))};
  });
}

void p2p_graph_free(p2p_graph* graph) { delete graph; }

p2p_status p2p_loss_model_init(p2p_loss_model* model, double p, const char* severity, double deductible) {
  return guard([&] {
    need(model, "model");
    need(severity, "severity");
    const Severity sev = Severity::parse(severity);
    LossModel m{p, sev, deductible};
    m.validate();
    model->claim_probability = p;
    model->deductible = deductible;
    model->kind = sev.kind == Severity::Kind::point     ? P2P_SEVERITY_POINT
                  : sev.kind == Severity::Kind::uniform ? P2P_SEVERITY_UNIFORM
                                                        : P2P_SEVERITY_GAMMA;
    model->param[0] = sev.a;
    model->param[1] = sev.b;
    model->param[2] = sev.c;
  });
}

p2p_status p2p_loss_moments(const p2p_loss_model* model, double* mean, double* stdev) {
  return guard([&] {
    need(mean, "mean");
    need(stdev, "stdev");
    const auto m = loss_moments(to_model(model));
    *mean = m.mean;
    *stdev = m.stdev;
  });
}

p2p_status p2p_below_deductible_fraction(const p2p_loss_model* model, double* out) {
  return guard([&] {
    need(out, "out");
    *out = below_deductible_fraction(to_model(model));
  });
}

p2p_status p2p_claims_sample(const p2p_loss_model* model, int n, uint64_t seed, p2p_claims** out) {
  return guard([&] {
    need(out, "out");
    Rng rng = make_stream({seed});
    *out = new p2p_claims{sample_claims(to_model(model), n, rng)};
  });
}

p2p_status p2p_claims_from_losses(const uint8_t* z, const double* y, int n, double deductible, p2p_claims** out) {
  return guard([&] {
    need(z, "z");
    need(y, "y");
    need(out, "out");
    require(n >= 0, "n must be >= 0");
    *out = new p2p_claims{ClaimSample::from_losses(std::vector<std::uint8_t>(z, z + n), std::vector<double>(y, y + n),
                                                   deductible)};
  });
}

int p2p_claims_size(const p2p_claims* claims) { return claims ? static_cast<int>(claims->c.size()) : 0; }

p2p_status p2p_claims_x(const p2p_claims* claims, double* out) {
  return guard([&] {
    need(claims, "claims");
    copy_out(claims->c.x, out);
  });
}

void p2p_claims_free(p2p_claims* claims) { delete claims; }

p2p_status p2p_optimize_lp(const p2p_graph* graph, double deductible, double gamma, p2p_engagement** out) {
  return guard([&] {
    need(graph, "graph");
    need(out, "out");
    *out = new p2p_engagement{solve_engagement_lp({graph->g, gamma, deductible, {}})};
  });
}

p2p_status p2p_optimize_sparse(const p2p_graph* graph, double deductible, double gamma, size_t max_edges,
                               p2p_engagement** out) {
  return guard([&] {
    need(graph, "graph");
    need(out, "out");
    *out = new p2p_engagement{solve_sparse_mip({graph->g, gamma, deductible, {}}, max_edges)};
  });
}

p2p_status p2p_optimize_two_stage(const p2p_graph* graph, double deductible, double gamma1, double gamma2,
                                  double self_contribution, p2p_engagement** stage1, p2p_graph** fof_graph,
                                  p2p_engagement** stage2) {
  return guard([&] {
    need(graph, "graph");
    need(stage1, "stage1");
    need(fof_graph, "fof_graph");
    need(stage2, "stage2");
    auto r = solve_two_stage(graph->g, deductible, gamma1, gamma2, self_contribution);
    *stage1 = new p2p_engagement{std::move(r.stage1)};
    *fof_graph = new p2p_graph{r.fof_graph};
    *stage2 = new p2p_engagement{std::move(r.stage2)};
  });
}

p2p_status p2p_optimize_qp(const p2p_graph* graph, double deductible, double gamma, p2p_qp_shares** out) {
  return guard([&] {
    need(graph, "graph");
    need(out, "out");
    *out = new p2p_qp_shares{solve_min_variance_qp(*graph->g, deductible, gamma)};
  });
}

p2p_status p2p_engagement_from_triples(const p2p_graph* graph, const double* triples, size_t count,
                                       p2p_engagement** out) {
  return guard([&] {
    need(graph, "graph");
    need(out, "out");
    if (count > 0) need(triples, "triples");
    std::vector<std::tuple<int, int, double>> t;
    for (size_t k = 0; k < count; ++k) {
      const double u = triples[3 * k], v = triples[3 * k + 1];
      require(u == std::floor(u) && v == std::floor(v), "engagement endpoints must be integers");
      t.emplace_back(static_cast<int>(u), static_cast<int>(v), triples[3 * k + 2]);
    }
    auto eng = EngagementMap::from_triples(graph->g, t);
    const double total = eng.total();
    *out = new p2p_engagement{{std::move(eng), total, true, 1}};
  });
}

p2p_status p2p_engagement_load(const p2p_graph* graph, const char* path, p2p_engagement** out) {
  return guard([&] {
    need(graph, "graph");
    need(path, "path");
    need(out, "out");
    *out = new p2p_engagement{engagement_from_json(read_text_file(path), graph->g)};
  });
}

p2p_status p2p_engagement_save(const p2p_engagement* eng, const char* path) {
  return guard([&] {
    need(eng, "engagement");
    need(path, "path");
    write_text_file(path, engagement_to_json(eng->sol));
  });
}

double p2p_engagement_objective(const p2p_engagement* eng) { return eng ? eng->sol.objective : 0.0; }

int p2p_engagement_exact(const p2p_engagement* eng) { return eng && eng->sol.exact ? 1 : 0; }

p2p_status p2p_engagement_magnitudes(const p2p_engagement* eng, double* out) {
  return guard([&] {
    need(eng, "engagement");
    need(out, "output buffer");
    const auto m = eng->sol.engagement.magnitudes();
    std::copy(m.begin(), m.end(), out);
  });
}

p2p_status p2p_engagement_coverage(const p2p_engagement* eng, int node, double* out) {
  return guard([&] {
    need(eng, "engagement");
    need(out, "out");
    *out = node_coverage(eng->sol.engagement, node);
  });
}

void p2p_engagement_free(p2p_engagement* eng) { delete eng; }

double p2p_qp_objective(const p2p_qp_shares* shares) { return shares ? shares->q.objective : 0.0; }

p2p_status p2p_qp_self_shares(const p2p_qp_shares* shares, double* out) {
  return guard([&] {
    need(shares, "shares");
    copy_out(shares->q.self_share, out);
  });
}

p2p_status p2p_qp_edge_shares(const p2p_qp_shares* shares, double* out) {
  return guard([&] {
    need(shares, "shares");
    copy_out(shares->q.edge_share, out);
  });
}

p2p_status p2p_qp_save(const p2p_qp_shares* shares, const p2p_graph* graph, const char* path) {
  return guard([&] {
    need(shares, "shares");
    need(graph, "graph");
    need(path, "path");
    require(shares->q.edge_share.size() == graph->g->edge_count(), "shares were not computed on this graph");
    write_text_file(path, qp_shares_to_json(*graph->g, shares->q));
  });
}

void p2p_qp_free(p2p_qp_shares* shares) { delete shares; }

p2p_status p2p_settle_uniform(const p2p_graph* graph, const p2p_claims* claims, double deductible, double gamma,
                              p2p_settlement** out) {
  return guard([&] {
    need(graph, "graph");
    need(claims, "claims");
    need(out, "out");
    *out = new p2p_settlement{settle_uniform(*graph->g, claims->c, deductible, gamma)};
  });
}

p2p_status p2p_settle_uniform_self(const p2p_graph* graph, const p2p_claims* claims, double deductible,
                                   double self_contribution, double dbar, p2p_settlement** out) {
  return guard([&] {
    need(graph, "graph");
    need(claims, "claims");
    need(out, "out");
    *out = new p2p_settlement{settle_uniform_with_self(*graph->g, claims->c, deductible, self_contribution, dbar)};
  });
}

p2p_status p2p_settle_personalized(const p2p_engagement* eng, const p2p_claims* claims, double deductible,
                                   p2p_settlement** out) {
  return guard([&] {
    need(eng, "engagement");
    need(claims, "claims");
    need(out, "out");
    const auto& e = eng->sol.engagement;
    *out = new p2p_settlement{settle_personalized(e.graph(), e, claims->c, deductible)};
  });
}

p2p_status p2p_settle_two_layer(const p2p_engagement* eng1, const p2p_engagement* eng2, const p2p_claims* claims,
                                double deductible, double self_contribution, p2p_settlement** out) {
  return guard([&] {
    need(eng1, "eng1");
    need(eng2, "eng2");
    need(claims, "claims");
    need(out, "out");
    const auto& a = eng1->sol.engagement;
    const auto& b = eng2->sol.engagement;
    *out = new p2p_settlement{settle_two_layer(a.graph(), a, b.graph(), b, claims->c, deductible, self_contribution)};
  });
}

p2p_status p2p_settle_linear(const p2p_qp_shares* shares, const p2p_graph* graph, const p2p_claims* claims,
                             p2p_settlement** out) {
  return guard([&] {
    need(shares, "shares");
    need(graph, "graph");
    need(claims, "claims");
    need(out, "out");
    *out = new p2p_settlement{settle_linear(*graph->g, shares->q.self_share, shares->q.edge_share, claims->c)};
  });
}

int p2p_settlement_size(const p2p_settlement* result) { return result ? static_cast<int>(result->r.xi.size()) : 0; }

p2p_status p2p_settlement_xi(const p2p_settlement* result, double* out) {
  return guard([&] {
    need(result, "result");
    copy_out(result->r.xi, out);
  });
}

p2p_status p2p_settlement_layer(const p2p_settlement* result, p2p_layer layer, double* out) {
  return guard([&] {
    need(result, "result");
    const auto& L = result->r.layers;
    switch (layer) {
      case P2P_LAYER_SELF_FIRST:
        return copy_out(L.self_first, out);
      case P2P_LAYER_FRIENDS_RECEIVED:
        return copy_out(L.friends_received, out);
      case P2P_LAYER_FRIENDS_PAID:
        return copy_out(L.friends_paid, out);
      case P2P_LAYER_FOF_RECEIVED:
        return copy_out(L.fof_received, out);
      case P2P_LAYER_FOF_PAID:
        return copy_out(L.fof_paid, out);
      case P2P_LAYER_RESIDUAL_SELF:
        return copy_out(L.residual_self, out);
    }
    fail(ErrorCode::invalid_argument, "unknown layer");
  });
}

double p2p_settlement_total_in(const p2p_settlement* result) { return result ? result->r.total_in : 0.0; }

p2p_status p2p_settlement_save(const p2p_settlement* result, const char* path) {
  return guard([&] {
    need(result, "result");
    need(path, "path");
    write_text_file(path, settlement_to_json(result->r));
  });
}

void p2p_settlement_free(p2p_settlement* result) { delete result; }

p2p_status p2p_fairness_exact(int dbar, double p, p2p_fairness* out) {
  return guard([&] {
    need(out, "out");
    const auto r = fairness_exact(dbar, p);
    *out = {r.p_zero, r.p_full, r.p_strict, r.p_weak};
  });
}

static p2p_report* make_report(const SweepConfig& cfg, int workers) {
  auto rows = run_sweep(cfg, workers);
  auto* rep = new p2p_report{std::move(rows), {}};
  rep->csv = sweep_csv(rep->rows, csv_comment_header(cfg.echo()));
  return rep;
}

p2p_status p2p_sweep_run(const char* config_text, int workers, p2p_report** out) {
  return guard([&] {
    need(config_text, "config");
    need(out, "out");
    *out = make_report(SweepConfig::parse(config_text), workers);
  });
}

p2p_status p2p_sweep_run_file(const char* config_path, int workers, p2p_report** out) {
  return guard([&] {
    need(config_path, "config path");
    need(out, "out");
    *out = make_report(SweepConfig::load(config_path), workers);
  });
}

p2p_status p2p_simulate(const p2p_graph* graph, const p2p_loss_model* model, const char* mechanism,
                        const char* gamma_rule, double dbar, int min_reps, int max_reps, double rel_se, uint64_t seed,
                        p2p_report** out) {
  return guard([&] {
    need(graph, "graph");
    need(mechanism, "mechanism");
    need(gamma_rule, "gamma rule");
    need(out, "out");
    const LossModel loss = to_model(model);
    const Mechanism mech = Mechanism::parse(mechanism);
    const GammaRule rule = GammaRule::parse(gamma_rule);
    const auto plan = plan_mechanism(mech, graph->g, loss.deductible, rule, dbar);
    auto row = simulate(plan, loss, {min_reps, max_reps, rel_se}, {seed, 1});
    const std::string echo = "mechanism = " + mech.to_string() + "\np = " + format_double(loss.claim_probability) +
                             "\nseverity = " + loss.severity.to_string() + "\ns = " + format_double(loss.deductible) +
                             "\ngamma = " + rule.to_string() + "\nseed = " + std::to_string(seed) + "\n";
    auto* rep = new p2p_report{{row}, {}};
    rep->csv = sweep_csv(rep->rows, csv_comment_header(echo));
    *out = rep;
  });
}

p2p_status p2p_simulate_claims(const p2p_graph* graph, const p2p_claims* claims, const char* mechanism,
                               const char* gamma_rule, double dbar, p2p_settlement** out) {
  return guard([&] {
    need(graph, "graph");
    need(claims, "claims");
    need(mechanism, "mechanism");
    need(gamma_rule, "gamma rule");
    need(out, "out");
    const auto plan = plan_mechanism(Mechanism::parse(mechanism), graph->g, claims->c.deductible,
                                     GammaRule::parse(gamma_rule), dbar);
    *out = new p2p_settlement{plan.settle(claims->c)};
  });
}

size_t p2p_report_rows(const p2p_report* report) { return report ? report->rows.size() : 0; }

p2p_status p2p_report_stdev_ratio(const p2p_report* report, size_t row, double* out) {
  return guard([&] {
    need(report, "report");
    need(out, "out");
    require(row < report->rows.size(), "row out of range");
    *out = report->rows[row].stdev_ratio;
  });
}

p2p_status p2p_report_replications(const p2p_report* report, size_t row, int* out) {
  return guard([&] {
    need(report, "report");
    need(out, "out");
    require(row < report->rows.size(), "row out of range");
    *out = report->rows[row].replications;
  });
}

const char* p2p_report_csv(const p2p_report* report) { return report ? report->csv.c_str() : ""; }

p2p_status p2p_report_write_csv(const p2p_report* report, const char* path) {
  return guard([&] {
    need(report, "report");
    need(path, "path");
    write_text_file(path, report->csv);
  });
}

void p2p_report_free(p2p_report* report) { delete report; }

p2p_status p2p_share_matrix_create(const double* entries, size_t n, p2p_share_matrix** out) {
  return guard([&] {
    need(entries, "entries");
    need(out, "out");
    std::vector<std::vector<double>> rows(n);
    for (size_t i = 0; i < n; ++i) rows[i].assign(entries + i * n, entries + (i + 1) * n);
    *out = new p2p_share_matrix{ShareMatrix(std::move(rows))};
  });
}

p2p_status p2p_share_matrix_load(const char* path, p2p_share_matrix** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new p2p_share_matrix{ShareMatrix(matrix_from_json(read_text_file(path)))};
  });
}

p2p_status p2p_share_matrix_clique(const int* sizes, size_t count, p2p_share_matrix** out) {
  return guard([&] {
    need(sizes, "sizes");
    need(out, "out");
    *out = new p2p_share_matrix{clique_share_matrix(std::span<const int>(sizes, count))};
  });
}

size_t p2p_share_matrix_size(const p2p_share_matrix* m) { return m ? m->m.size() : 0; }

const char* p2p_share_matrix_classify(const p2p_share_matrix* m, double tol) {
  if (m == nullptr) {
    last_error = "matrix must not be NULL";
    return nullptr;
  }
  switch (classify_matrix(m->m, tol)) {
    case MatrixClass::doubly_stochastic:
      return "doubly_stochastic";
    case MatrixClass::column_stochastic:
      return "column_stochastic";
    case MatrixClass::neither:
      return "neither";
  }
  return nullptr;
}

p2p_status p2p_share_matrix_apply(const p2p_share_matrix* m, const double* x, double* out) {
  return guard([&] {
    need(m, "matrix");
    need(x, "x");
    copy_out(apply_share(m->m, std::span<const double>(x, m->m.size())), out);
  });
}

p2p_status p2p_share_matrix_trace_variance(const p2p_share_matrix* m, const double* sigma, double* out) {
  return guard([&] {
    need(m, "matrix");
    need(sigma, "sigma");
    need(out, "out");
    const std::size_t n = m->m.size();
    std::vector<std::vector<double>> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i].assign(sigma + i * n, sigma + (i + 1) * n);
    *out = trace_variance(m->m, s);
  });
}

void p2p_share_matrix_free(p2p_share_matrix* m) { delete m; }

p2p_status p2p_convex_order_compare(const double* xv, const double* xp, size_t xn, const double* yv, const double* yp,
                                    size_t yn, double tol, const char** out) {
  static const char* const names[] = {"equal", "X_below", "Y_below", "incomparable", "means_differ"};
  return guard([&] {
    need(xv, "x values");
    need(xp, "x probabilities");
    need(yv, "y values");
    need(yp, "y probabilities");
    need(out, "out");
    std::vector<std::pair<double, double>> xa, ya;
    for (size_t k = 0; k < xn; ++k) xa.emplace_back(xv[k], xp[k]);
    for (size_t k = 0; k < yn; ++k) ya.emplace_back(yv[k], yp[k]);
    *out = names[static_cast<int>(convex_order_compare(DiscreteDist(xa), DiscreteDist(ya), tol))];
  });
}

p2p_status p2p_majorizes(const double* x, const double* y, size_t n, double tol, int* out) {
  return guard([&] {
    need(x, "x");
    need(y, "y");
    need(out, "out");
    *out = majorizes(std::span<const double>(x, n), std::span<const double>(y, n), tol) ? 1 : 0;
  });
}

}  // extern "C"
