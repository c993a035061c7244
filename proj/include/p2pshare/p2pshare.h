#ifndef P2PSHARE_P2PSHARE_H
#define P2PSHARE_P2PSHARE_H

#include <stddef.h>
#include <stdint.h>

#if defined(P2PSHARE_BUILDING_LIBRARY)
#define P2P_API __attribute__((visibility("default")))
#else
#define P2P_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum p2p_status {
  P2P_OK = 0,
  P2P_INVALID_ARGUMENT = 1,
  P2P_DOMAIN = 2,
  P2P_NOT_GRAPHICAL = 3,
  P2P_CAPACITY = 4,
  P2P_IO = 5,
  P2P_PARSE = 6,
  P2P_NUMERIC = 7,
  P2P_INTERNAL = 8
} p2p_status;

/* Message for the last failing call on this thread; empty after success. */
P2P_API const char* p2p_last_error(void);
P2P_API const char* p2p_status_string(p2p_status status);
P2P_API const char* p2p_version(void);

typedef struct p2p_graph p2p_graph;
typedef struct p2p_claims p2p_claims;
typedef struct p2p_engagement p2p_engagement;
typedef struct p2p_settlement p2p_settlement;
typedef struct p2p_qp_shares p2p_qp_shares;
typedef struct p2p_share_matrix p2p_share_matrix;
typedef struct p2p_report p2p_report;

/* ---- graphs ---- */

typedef struct p2p_degree_spec {
  double mean_degree;
  double degree_sd;
  int min_degree;
} p2p_degree_spec;

P2P_API void p2p_degree_spec_init(p2p_degree_spec* spec);
P2P_API p2p_status p2p_degree_sequence_sample(const p2p_degree_spec* spec, int n, uint64_t seed, int* out_degrees);
/* On P2P_NOT_GRAPHICAL, *out_prefix (if given) receives the 1-based
 * Erdos-Gallai prefix, or 0 for an odd sum. */
P2P_API p2p_status p2p_graph_realize(const int* degrees, int n, uint64_t seed, int64_t shuffle_swaps,
                                     p2p_graph** out, size_t* out_prefix);
P2P_API p2p_status p2p_graph_generate(const p2p_degree_spec* spec, int n, uint64_t seed, p2p_graph** out);
/* edges: 2 * edge_count ints, pairs (u, v). */
P2P_API p2p_status p2p_graph_from_edges(int n, const int* edges, size_t edge_count, p2p_graph** out);
P2P_API p2p_status p2p_graph_load(const char* path, p2p_graph** out);
P2P_API p2p_status p2p_graph_save(const p2p_graph* graph, const char* path);
P2P_API int p2p_graph_node_count(const p2p_graph* graph);
P2P_API size_t p2p_graph_edge_count(const p2p_graph* graph);
P2P_API p2p_status p2p_graph_degrees(const p2p_graph* graph, int* out_degrees);
/* out_edges: room for 2 * edge_count ints, sorted pairs with u < v. */
P2P_API p2p_status p2p_graph_edges(const p2p_graph* graph, int* out_edges);
P2P_API p2p_status p2p_graph_friends_of_friends(const p2p_graph* graph, const int* eligible, size_t count,
                                                p2p_graph** out);
P2P_API void p2p_graph_free(p2p_graph* graph);

/* ---- loss model ---- */

typedef enum p2p_severity_kind { P2P_SEVERITY_POINT = 0, P2P_SEVERITY_UNIFORM = 1, P2P_SEVERITY_GAMMA = 2 } p2p_severity_kind;

/* param: point {c}, uniform {a, b}, gamma {shift, mean, sd}. */
typedef struct p2p_loss_model {
  double claim_probability;
  p2p_severity_kind kind;
  double param[3];
  double deductible;
} p2p_loss_model;

/* Parses `point:c`, `uniform:a,b` or `gamma:shift,mean,sd`. */
P2P_API p2p_status p2p_loss_model_init(p2p_loss_model* model, double p, const char* severity, double deductible);
P2P_API p2p_status p2p_loss_moments(const p2p_loss_model* model, double* mean, double* stdev);
P2P_API p2p_status p2p_below_deductible_fraction(const p2p_loss_model* model, double* out);
P2P_API p2p_status p2p_claims_sample(const p2p_loss_model* model, int n, uint64_t seed, p2p_claims** out);
/* z: 0/1 indicators, y: severities. */
P2P_API p2p_status p2p_claims_from_losses(const uint8_t* z, const double* y, int n, double deductible,
                                          p2p_claims** out);
P2P_API int p2p_claims_size(const p2p_claims* claims);
P2P_API p2p_status p2p_claims_x(const p2p_claims* claims, double* out);
P2P_API void p2p_claims_free(p2p_claims* claims);

/* ---- optimize ---- */

P2P_API p2p_status p2p_optimize_lp(const p2p_graph* graph, double deductible, double gamma, p2p_engagement** out);
P2P_API p2p_status p2p_optimize_sparse(const p2p_graph* graph, double deductible, double gamma, size_t max_edges,
                                       p2p_engagement** out);
/* Writes the stage-1 map, the friends-of-friends graph and the stage-2 map. */
P2P_API p2p_status p2p_optimize_two_stage(const p2p_graph* graph, double deductible, double gamma1, double gamma2,
                                          double self_contribution, p2p_engagement** stage1, p2p_graph** fof_graph,
                                          p2p_engagement** stage2);
P2P_API p2p_status p2p_optimize_qp(const p2p_graph* graph, double deductible, double gamma, p2p_qp_shares** out);

/* triples: 3 * count doubles (u, v, gamma); endpoints must be integral. */
P2P_API p2p_status p2p_engagement_from_triples(const p2p_graph* graph, const double* triples, size_t count,
                                               p2p_engagement** out);
P2P_API p2p_status p2p_engagement_load(const p2p_graph* graph, const char* path, p2p_engagement** out);
P2P_API p2p_status p2p_engagement_save(const p2p_engagement* eng, const char* path);
P2P_API double p2p_engagement_objective(const p2p_engagement* eng);
P2P_API int p2p_engagement_exact(const p2p_engagement* eng);
/* out: one magnitude per graph edge, in p2p_graph_edges order. */
P2P_API p2p_status p2p_engagement_magnitudes(const p2p_engagement* eng, double* out);
P2P_API p2p_status p2p_engagement_coverage(const p2p_engagement* eng, int node, double* out);
P2P_API void p2p_engagement_free(p2p_engagement* eng);

P2P_API double p2p_qp_objective(const p2p_qp_shares* shares);
P2P_API p2p_status p2p_qp_self_shares(const p2p_qp_shares* shares, double* out);
P2P_API p2p_status p2p_qp_edge_shares(const p2p_qp_shares* shares, double* out);
P2P_API p2p_status p2p_qp_save(const p2p_qp_shares* shares, const p2p_graph* graph, const char* path);
P2P_API void p2p_qp_free(p2p_qp_shares* shares);

/* ---- settlement ---- */

P2P_API p2p_status p2p_settle_uniform(const p2p_graph* graph, const p2p_claims* claims, double deductible, double gamma,
                                      p2p_settlement** out);
/* dbar <= 0 uses the graph's mean degree. */
P2P_API p2p_status p2p_settle_uniform_self(const p2p_graph* graph, const p2p_claims* claims, double deductible,
                                           double self_contribution, double dbar, p2p_settlement** out);
P2P_API p2p_status p2p_settle_personalized(const p2p_engagement* eng, const p2p_claims* claims, double deductible,
                                           p2p_settlement** out);
P2P_API p2p_status p2p_settle_two_layer(const p2p_engagement* eng1, const p2p_engagement* eng2, const p2p_claims* claims,
                                        double deductible, double self_contribution, p2p_settlement** out);
P2P_API p2p_status p2p_settle_linear(const p2p_qp_shares* shares, const p2p_graph* graph, const p2p_claims* claims,
                                     p2p_settlement** out);

typedef enum p2p_layer {
  P2P_LAYER_SELF_FIRST = 0,
  P2P_LAYER_FRIENDS_RECEIVED = 1,
  P2P_LAYER_FRIENDS_PAID = 2,
  P2P_LAYER_FOF_RECEIVED = 3,
  P2P_LAYER_FOF_PAID = 4,
  P2P_LAYER_RESIDUAL_SELF = 5
} p2p_layer;

P2P_API int p2p_settlement_size(const p2p_settlement* result);
P2P_API p2p_status p2p_settlement_xi(const p2p_settlement* result, double* out);
P2P_API p2p_status p2p_settlement_layer(const p2p_settlement* result, p2p_layer layer, double* out);
P2P_API double p2p_settlement_total_in(const p2p_settlement* result);
P2P_API p2p_status p2p_settlement_save(const p2p_settlement* result, const char* path);
P2P_API void p2p_settlement_free(p2p_settlement* result);

/* ---- analytics ---- */

typedef struct p2p_fairness {
  double p_zero;
  double p_full;
  double p_strict;
  double p_weak;
} p2p_fairness;

P2P_API p2p_status p2p_fairness_exact(int dbar, double p, p2p_fairness* out);

/* Runs a sweep from `key = value` config text; workers <= 0 uses the config
 * value or the hardware. */
P2P_API p2p_status p2p_sweep_run(const char* config_text, int workers, p2p_report** out);
P2P_API p2p_status p2p_sweep_run_file(const char* config_path, int workers, p2p_report** out);

/* Replicated simulation of one mechanism (`none`, `uniform`, `uniform_self(z)`,
 * `lp`, `lp(z)`, `qp`, `fof(g1,g2[,z])`) on a fixed graph. gamma_rule is
 * `nominal` (s / dbar), `empirical` or a number. */
P2P_API p2p_status p2p_simulate(const p2p_graph* graph, const p2p_loss_model* model, const char* mechanism,
                                const char* gamma_rule, double dbar, int min_reps, int max_reps, double rel_se,
                                uint64_t seed, p2p_report** out);
/* Single settlement of given claims under a mechanism. */
P2P_API p2p_status p2p_simulate_claims(const p2p_graph* graph, const p2p_claims* claims, const char* mechanism,
                                       const char* gamma_rule, double dbar, p2p_settlement** out);

P2P_API size_t p2p_report_rows(const p2p_report* report);
P2P_API p2p_status p2p_report_stdev_ratio(const p2p_report* report, size_t row, double* out);
P2P_API p2p_status p2p_report_replications(const p2p_report* report, size_t row, int* out);
/* Full CSV including the comment header. Valid until the report is freed. */
P2P_API const char* p2p_report_csv(const p2p_report* report);
P2P_API p2p_status p2p_report_write_csv(const p2p_report* report, const char* path);
P2P_API void p2p_report_free(p2p_report* report);

/* ---- ordering ---- */

/* Row-major n x n. */
P2P_API p2p_status p2p_share_matrix_create(const double* entries, size_t n, p2p_share_matrix** out);
P2P_API p2p_status p2p_share_matrix_load(const char* path, p2p_share_matrix** out);
P2P_API p2p_status p2p_share_matrix_clique(const int* sizes, size_t count, p2p_share_matrix** out);
P2P_API size_t p2p_share_matrix_size(const p2p_share_matrix* m);
/* "doubly_stochastic", "column_stochastic" or "neither"; NULL on error. */
P2P_API const char* p2p_share_matrix_classify(const p2p_share_matrix* m, double tol);
P2P_API p2p_status p2p_share_matrix_apply(const p2p_share_matrix* m, const double* x, double* out);
P2P_API p2p_status p2p_share_matrix_trace_variance(const p2p_share_matrix* m, const double* sigma, double* out);
P2P_API void p2p_share_matrix_free(p2p_share_matrix* m);

/* Distributions are given as parallel value/probability arrays. Result is
 * "equal", "X_below", "Y_below", "incomparable" or "means_differ". */
P2P_API p2p_status p2p_convex_order_compare(const double* xv, const double* xp, size_t xn, const double* yv,
                                            const double* yp, size_t yn, double tol, const char** out);
P2P_API p2p_status p2p_majorizes(const double* x, const double* y, size_t n, double tol, int* out);

#ifdef __cplusplus
}
#endif

#endif
