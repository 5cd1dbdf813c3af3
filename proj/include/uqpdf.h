/*
 * uqpdf — density estimation for scalar outputs of an elliptic problem with a
 * log-normal random coefficient.
 *
 * C interface of the shared library. All state lives behind opaque handles;
 * every fallible call returns a uqpdf_status and leaves a human-readable
 * message in uqpdf_last_error() (thread local). Handles are destroyed with
 * the matching *_destroy function; destroy functions accept NULL.
 */
#ifndef UQPDF_H
#define UQPDF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define UQPDF_API __declspec(dllexport)
#else
#define UQPDF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uqpdf_status {
  UQPDF_OK = 0,
  UQPDF_ERR_CONFIG = 1,      /* bad parameter, guard violated, malformed config */
  UQPDF_ERR_DIMENSION = 2,   /* size mismatch between objects */
  UQPDF_ERR_NUMERIC = 3,     /* solver breakdown, overflow, lost exactness */
  UQPDF_ERR_COERCIVITY = 4,  /* coefficient or operator not positive */
  UQPDF_ERR_DEGENERATE = 5,  /* zero-variance input */
  UQPDF_ERR_UNSUPPORTED = 6, /* operation not representable by the method */
  UQPDF_ERR_IO = 7,
  UQPDF_ERR_INTERNAL = 8
} uqpdf_status;

typedef enum uqpdf_qoi_kind {
  UQPDF_QOI_AVERAGE = 0,
  UQPDF_QOI_INTEGRAL_SQUARE = 1,
  UQPDF_QOI_MAX = 2
} uqpdf_qoi_kind;

typedef enum uqpdf_series_kind {
  UQPDF_SERIES_GC = 0,
  UQPDF_SERIES_ED = 1
} uqpdf_series_kind;

typedef enum uqpdf_projection_method {
  UQPDF_PROJECTION_QUADRATURE = 0,
  UQPDF_PROJECTION_CLOSED_FORM = 1
} uqpdf_projection_method;

typedef struct uqpdf_mesh uqpdf_mesh;
typedef struct uqpdf_kl_field uqpdf_kl_field;
typedef struct uqpdf_sg_solution uqpdf_sg_solution;
typedef struct uqpdf_qoi_poly uqpdf_qoi_poly;
typedef struct uqpdf_sample_set uqpdf_sample_set;
typedef struct uqpdf_series uqpdf_series;
typedef struct uqpdf_histogram uqpdf_histogram;
typedef struct uqpdf_selection_report uqpdf_selection_report;

UQPDF_API const char* uqpdf_version(void);
UQPDF_API const char* uqpdf_last_error(void);

/* ---- mesh ---------------------------------------------------------- */

UQPDF_API uqpdf_status uqpdf_mesh_create(int refinement_level, uqpdf_mesh** out);
UQPDF_API void uqpdf_mesh_destroy(uqpdf_mesh* mesh);
UQPDF_API int uqpdf_mesh_node_count(const uqpdf_mesh* mesh);
UQPDF_API int uqpdf_mesh_element_count(const uqpdf_mesh* mesh);

/* ---- truncated Karhunen-Loeve coefficient field -------------------- */

UQPDF_API uqpdf_status uqpdf_kl_create(const uqpdf_mesh* mesh, double sigma_gamma,
                                       double corr_length, int n_terms,
                                       double a_min, double mu_gamma,
                                       uqpdf_kl_field** out);
/* Loads from cache_path when the parameter header matches (cache_hit = 1 and
 * the file is left untouched); otherwise computes and writes the cache. */
UQPDF_API uqpdf_status uqpdf_kl_create_cached(const uqpdf_mesh* mesh,
                                              double sigma_gamma, double corr_length,
                                              int n_terms, double a_min,
                                              double mu_gamma, const char* cache_path,
                                              int* cache_hit, uqpdf_kl_field** out);
UQPDF_API void uqpdf_kl_destroy(uqpdf_kl_field* kl);
UQPDF_API int uqpdf_kl_term_count(const uqpdf_kl_field* kl);
UQPDF_API double uqpdf_kl_eigenvalue(const uqpdf_kl_field* kl, int n);
UQPDF_API uqpdf_status uqpdf_kl_eigenfunction(const uqpdf_kl_field* kl, int n,
                                              double* values, size_t len);
UQPDF_API uqpdf_status uqpdf_kl_save(const uqpdf_kl_field* kl, const char* path);

/* ---- Monte Carlo sampling ------------------------------------------ */

/* threads <= 0 uses the hardware concurrency. */
UQPDF_API uqpdf_status uqpdf_mc_run(const uqpdf_mesh* mesh, const uqpdf_kl_field* kl,
                                    uqpdf_qoi_kind kind, int sample_count,
                                    uint64_t seed, int threads,
                                    uqpdf_sample_set** out);

UQPDF_API void uqpdf_sample_destroy(uqpdf_sample_set* set);
UQPDF_API int uqpdf_sample_count(const uqpdf_sample_set* set);
UQPDF_API uqpdf_status uqpdf_sample_values(const uqpdf_sample_set* set, double* out,
                                           size_t len);
/* m and std_err must hold l_max entries each (std_err may be NULL). */
UQPDF_API uqpdf_status uqpdf_sample_moments(const uqpdf_sample_set* set, int l_max,
                                            double* m, double* std_err);
/* New set with values (x - shift) / scale. */
UQPDF_API uqpdf_status uqpdf_sample_standardize(const uqpdf_sample_set* set,
                                                double shift, double scale,
                                                uqpdf_sample_set** out);
UQPDF_API uqpdf_status uqpdf_sample_save(const uqpdf_sample_set* set, const char* path);
UQPDF_API uqpdf_status uqpdf_sample_load(const char* path, uqpdf_sample_set** out);

/* ---- stochastic Galerkin solve -------------------------------------- */

/* projection_points <= 0 selects the default (20 per dimension). */
UQPDF_API uqpdf_status uqpdf_sg_solve(const uqpdf_mesh* mesh, const uqpdf_kl_field* kl,
                                      int p, int q,
                                      uqpdf_projection_method projection,
                                      int projection_points, double forcing,
                                      uqpdf_sg_solution** out);
UQPDF_API void uqpdf_sg_destroy(uqpdf_sg_solution* solution);
UQPDF_API double uqpdf_sg_residual(const uqpdf_sg_solution* solution);
/* 0 when the coupled operator turned out indefinite (large input variance);
 * the solution is still residual-checked. */
UQPDF_API int uqpdf_sg_coercive(const uqpdf_sg_solution* solution);

/* strict_square != 0 keeps the cross terms of the squared solution instead of
 * the diagonal form; it only applies to the integral-square kind. */
UQPDF_API uqpdf_status uqpdf_sg_qoi_polynomial(const uqpdf_sg_solution* solution,
                                               const uqpdf_mesh* mesh,
                                               uqpdf_qoi_kind kind, int strict_square,
                                               uqpdf_qoi_poly** out);
UQPDF_API void uqpdf_qoi_poly_destroy(uqpdf_qoi_poly* poly);
UQPDF_API int uqpdf_qoi_poly_term_count(const uqpdf_qoi_poly* poly);
UQPDF_API int uqpdf_qoi_poly_dimension(const uqpdf_qoi_poly* poly);
UQPDF_API uqpdf_status uqpdf_qoi_poly_term(const uqpdf_qoi_poly* poly, int term,
                                           int* index_out, double* beta_out);
UQPDF_API uqpdf_status uqpdf_qoi_poly_moments(const uqpdf_qoi_poly* poly, int l_max,
                                              double* m_out);
UQPDF_API uqpdf_status uqpdf_qoi_poly_sample(const uqpdf_qoi_poly* poly,
                                             int sample_count, uint64_t seed,
                                             double sigma_gamma,
                                             uqpdf_sample_set** out);
UQPDF_API uqpdf_status uqpdf_qoi_poly_save(const uqpdf_qoi_poly* poly,
                                           double sigma_gamma, const char* path);
UQPDF_API uqpdf_status uqpdf_qoi_poly_load(const char* path, uqpdf_qoi_poly** out);

/* ---- moment / cumulant algebra -------------------------------------- */

UQPDF_API uqpdf_status uqpdf_moments_to_cumulants(const double* m, int len,
                                                  double* kappa_out);
UQPDF_API uqpdf_status uqpdf_standardize_moments(const double* m, int len,
                                                 double* m_std_out);

/* ---- truncated series ------------------------------------------------ */

/* kappa_std holds standardized cumulants kappa_1..kappa_len. Gram-Charlier
 * orders are 3..6 (len >= order), Edgeworth orders 1..4 (len >= order + 2). */
UQPDF_API uqpdf_status uqpdf_series_create(uqpdf_series_kind kind,
                                           const double* kappa_std, int len,
                                           int order, uqpdf_series** out);
UQPDF_API void uqpdf_series_destroy(uqpdf_series* series);
UQPDF_API double uqpdf_series_eval(const uqpdf_series* series, double x);
UQPDF_API uqpdf_status uqpdf_series_eval_batch(const uqpdf_series* series,
                                               const double* x, double* f, size_t n);

/* ---- histogram / kernel estimator ------------------------------------ */

UQPDF_API uqpdf_status uqpdf_histogram_create(const uqpdf_sample_set* set, int bins,
                                              uqpdf_histogram** out);
UQPDF_API void uqpdf_histogram_destroy(uqpdf_histogram* histogram);
UQPDF_API int uqpdf_histogram_bins(const uqpdf_histogram* histogram);
UQPDF_API uqpdf_status uqpdf_histogram_data(const uqpdf_histogram* histogram,
                                            double* edges /* bins+1 */,
                                            double* densities /* bins */);
UQPDF_API uqpdf_status uqpdf_kde_eval_batch(const uqpdf_sample_set* set,
                                            double bandwidth, const double* x,
                                            double* f, size_t n);

/* ---- truncation-order selection --------------------------------------- */

/* raw_moments holds m_1..m_len of the unstandardized QoI (len >= 6 covers
 * every admissible order). bins/grid_points <= 0 select the defaults
 * (50 bins, 201 grid points). */
UQPDF_API uqpdf_status uqpdf_select_order(const double* raw_moments, int len,
                                          uqpdf_series_kind kind,
                                          const uqpdf_sample_set* crude, double tol,
                                          int l_max, int bins, int grid_points,
                                          uqpdf_selection_report** out);
UQPDF_API void uqpdf_report_destroy(uqpdf_selection_report* report);
UQPDF_API int uqpdf_report_chosen_order(const uqpdf_selection_report* report);
/* 0 = convergent, 1 = divergent */
UQPDF_API int uqpdf_report_branch(const uqpdf_selection_report* report);
UQPDF_API int uqpdf_report_order_count(const uqpdf_selection_report* report);
/* successive_l2 / histogram_distance entries are NaN where not computed. */
UQPDF_API uqpdf_status uqpdf_report_row(const uqpdf_selection_report* report, int i,
                                        int* order, double* successive_l2,
                                        double* histogram_distance);
UQPDF_API int uqpdf_report_grid_size(const uqpdf_selection_report* report);
UQPDF_API uqpdf_status uqpdf_report_grid(const uqpdf_selection_report* report,
                                         double* out, size_t len);
UQPDF_API uqpdf_status uqpdf_report_standardization(const uqpdf_selection_report* report,
                                                    double* mean, double* stddev);
UQPDF_API int uqpdf_report_low_sample_warning(const uqpdf_selection_report* report);
UQPDF_API uqpdf_status uqpdf_report_save(const uqpdf_selection_report* report,
                                         uqpdf_series_kind kind, double tol,
                                         const char* path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* UQPDF_H */
