#include "uqpdf.h"

#include <cstring>
#include <limits>
#include <vector>
#include <string>

#include "uqpdf/csv.hpp"
#include "uqpdf/density.hpp"
#include "uqpdf/errors.hpp"
#include "uqpdf/fem.hpp"
#include "uqpdf/kl.hpp"
#include "uqpdf/mc.hpp"
#include "uqpdf/mesh.hpp"
#include "uqpdf/rng.hpp"
#include "uqpdf/series.hpp"
#include "uqpdf/sg.hpp"

struct uqpdf_mesh {
  uqpdf::StructuredQuadMesh mesh;
};
struct uqpdf_kl_field {
  uqpdf::KLField field;
};
struct uqpdf_sg_solution {
  uqpdf::SGSolution solution;
};
struct uqpdf_qoi_poly {
  uqpdf::QoIPolynomial poly;
  double sigma_gamma = 0.0;
};
struct uqpdf_sample_set {
  uqpdf::SampleSet set;
};
struct uqpdf_series {
  uqpdf::TruncatedSeries series;
};
struct uqpdf_histogram {
  uqpdf::Histogram histogram;
};
struct uqpdf_selection_report {
  uqpdf::OrderSelectionReport report;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
uqpdf_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return UQPDF_OK;
  } catch (const uqpdf::CoercivityError& e) {
    g_last_error = e.what();
    return UQPDF_ERR_COERCIVITY;
  } catch (const uqpdf::ConfigError& e) {
    g_last_error = e.what();
    return UQPDF_ERR_CONFIG;
  } catch (const uqpdf::DimensionError& e) {
    g_last_error = e.what();
    return UQPDF_ERR_DIMENSION;
  } catch (const uqpdf::NumericError& e) {
    g_last_error = e.what();
    return UQPDF_ERR_NUMERIC;
  } catch (const uqpdf::DegenerateDistributionError& e) {
    g_last_error = e.what();
    return UQPDF_ERR_DEGENERATE;
  } catch (const uqpdf::UnsupportedError& e) {
    g_last_error = e.what();
    return UQPDF_ERR_UNSUPPORTED;
  } catch (const uqpdf::IoError& e) {
    g_last_error = e.what();
    return UQPDF_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return UQPDF_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return UQPDF_ERR_INTERNAL;
  }
}

uqpdf_status require(bool condition, const char* message) {
  if (condition) return UQPDF_OK;
  g_last_error = message;
  return UQPDF_ERR_CONFIG;
}

uqpdf::QoiKind to_kind(uqpdf_qoi_kind kind) {
  switch (kind) {
    case UQPDF_QOI_AVERAGE: return uqpdf::QoiKind::average;
    case UQPDF_QOI_INTEGRAL_SQUARE: return uqpdf::QoiKind::integral_square;
    default: return uqpdf::QoiKind::max;
  }
}

uqpdf::SeriesKind to_kind(uqpdf_series_kind kind) {
  return kind == UQPDF_SERIES_GC ? uqpdf::SeriesKind::gram_charlier
                                 : uqpdf::SeriesKind::edgeworth;
}

}  // namespace

extern "C" {

const char* uqpdf_version(void) { return uqpdf::csv::kVersionString; }

const char* uqpdf_last_error(void) { return g_last_error.c_str(); }

/* ---- mesh ---------------------------------------------------------- */

uqpdf_status uqpdf_mesh_create(int refinement_level, uqpdf_mesh** out) {
  if (auto s = require(out != nullptr, "null output handle")) return s;
  return guarded([&] { *out = new uqpdf_mesh{uqpdf::build_mesh(refinement_level)}; });
}

void uqpdf_mesh_destroy(uqpdf_mesh* mesh) { delete mesh; }

int uqpdf_mesh_node_count(const uqpdf_mesh* mesh) {
  return mesh ? mesh->mesh.node_count() : 0;
}

int uqpdf_mesh_element_count(const uqpdf_mesh* mesh) {
  return mesh ? mesh->mesh.element_count() : 0;
}

/* ---- KL field ------------------------------------------------------- */

uqpdf_status uqpdf_kl_create(const uqpdf_mesh* mesh, double sigma_gamma,
                             double corr_length, int n_terms, double a_min,
                             double mu_gamma, uqpdf_kl_field** out) {
  if (auto s = require(mesh && out, "null handle")) return s;
  return guarded([&] {
    *out = new uqpdf_kl_field{uqpdf::build_kl_field(
        mesh->mesh, {sigma_gamma, corr_length}, n_terms, a_min, mu_gamma)};
  });
}

uqpdf_status uqpdf_kl_create_cached(const uqpdf_mesh* mesh, double sigma_gamma,
                                    double corr_length, int n_terms, double a_min,
                                    double mu_gamma, const char* cache_path,
                                    int* cache_hit, uqpdf_kl_field** out) {
  if (auto s = require(mesh && out && cache_path, "null handle")) return s;
  return guarded([&] {
    if (uqpdf::csv::kl_cache_matches(cache_path, mesh->mesh.refinement_level,
                                     sigma_gamma, corr_length, n_terms, a_min,
                                     mu_gamma)) {
      auto field = uqpdf::csv::load_kl(cache_path);
      if (field.node_count() != mesh->mesh.node_count()) {
        throw uqpdf::IoError("cache node count does not match the mesh");
      }
      *out = new uqpdf_kl_field{std::move(field)};
      if (cache_hit) *cache_hit = 1;
      return;
    }
    auto field = uqpdf::build_kl_field(mesh->mesh, {sigma_gamma, corr_length},
                                       n_terms, a_min, mu_gamma);
    uqpdf::csv::save_kl(field, cache_path);
    *out = new uqpdf_kl_field{std::move(field)};
    if (cache_hit) *cache_hit = 0;
  });
}

void uqpdf_kl_destroy(uqpdf_kl_field* kl) { delete kl; }

int uqpdf_kl_term_count(const uqpdf_kl_field* kl) {
  return kl ? kl->field.term_count() : 0;
}

double uqpdf_kl_eigenvalue(const uqpdf_kl_field* kl, int n) {
  if (!kl || n < 0 || n >= kl->field.term_count()) return -1.0;
  return kl->field.eigenvalues(n);
}

uqpdf_status uqpdf_kl_eigenfunction(const uqpdf_kl_field* kl, int n, double* values,
                                    size_t len) {
  if (auto s = require(kl && values, "null handle")) return s;
  return guarded([&] {
    if (n < 0 || n >= kl->field.term_count()) {
      throw uqpdf::ConfigError("eigenfunction index out of range");
    }
    if (len < static_cast<size_t>(kl->field.node_count())) {
      throw uqpdf::DimensionError("output buffer too small");
    }
    for (int j = 0; j < kl->field.node_count(); ++j) {
      values[j] = kl->field.eigenfunctions(j, n);
    }
  });
}

uqpdf_status uqpdf_kl_save(const uqpdf_kl_field* kl, const char* path) {
  if (auto s = require(kl && path, "null handle")) return s;
  return guarded([&] { uqpdf::csv::save_kl(kl->field, path); });
}

/* ---- Monte Carlo ----------------------------------------------------- */

uqpdf_status uqpdf_mc_run(const uqpdf_mesh* mesh, const uqpdf_kl_field* kl,
                          uqpdf_qoi_kind kind, int sample_count, uint64_t seed,
                          int threads, uqpdf_sample_set** out) {
  if (auto s = require(mesh && kl && out, "null handle")) return s;
  return guarded([&] {
    const Eigen::MatrixXd samples =
        uqpdf::sample_parameters(sample_count, kl->field.term_count(), seed);
    uqpdf::McOptions options;
    options.threads = threads;
    auto set = uqpdf::run_mc(mesh->mesh, kl->field, to_kind(kind), samples, options);
    set.seed = seed;
    *out = new uqpdf_sample_set{std::move(set)};
  });
}

void uqpdf_sample_destroy(uqpdf_sample_set* set) { delete set; }

int uqpdf_sample_count(const uqpdf_sample_set* set) {
  return set ? set->set.count() : 0;
}

uqpdf_status uqpdf_sample_values(const uqpdf_sample_set* set, double* out, size_t len) {
  if (auto s = require(set && out, "null handle")) return s;
  return guarded([&] {
    if (len < set->set.values.size()) {
      throw uqpdf::DimensionError("output buffer too small");
    }
    std::memcpy(out, set->set.values.data(), set->set.values.size() * sizeof(double));
  });
}

uqpdf_status uqpdf_sample_moments(const uqpdf_sample_set* set, int l_max, double* m,
                                  double* std_err) {
  if (auto s = require(set && m, "null handle")) return s;
  return guarded([&] {
    const auto estimate = uqpdf::mc_moments(set->set, l_max);
    for (int l = 0; l < l_max; ++l) {
      m[l] = estimate.moments.values[static_cast<size_t>(l)];
      if (std_err) std_err[l] = estimate.std_error[static_cast<size_t>(l)];
    }
  });
}

uqpdf_status uqpdf_sample_standardize(const uqpdf_sample_set* set, double shift,
                                      double scale, uqpdf_sample_set** out) {
  if (auto s = require(set && out, "null handle")) return s;
  return guarded([&] {
    if (!(scale > 0.0)) {
      throw uqpdf::DegenerateDistributionError("standardization scale must be positive");
    }
    auto copy = set->set;
    for (auto& v : copy.values) v = (v - shift) / scale;
    *out = new uqpdf_sample_set{std::move(copy)};
  });
}

uqpdf_status uqpdf_sample_save(const uqpdf_sample_set* set, const char* path) {
  if (auto s = require(set && path, "null handle")) return s;
  return guarded([&] { uqpdf::csv::save_samples(set->set, path); });
}

uqpdf_status uqpdf_sample_load(const char* path, uqpdf_sample_set** out) {
  if (auto s = require(path && out, "null handle")) return s;
  return guarded([&] { *out = new uqpdf_sample_set{uqpdf::csv::load_samples(path)}; });
}

/* ---- stochastic Galerkin --------------------------------------------- */

uqpdf_status uqpdf_sg_solve(const uqpdf_mesh* mesh, const uqpdf_kl_field* kl, int p,
                            int q, uqpdf_projection_method projection,
                            int projection_points, double forcing,
                            uqpdf_sg_solution** out) {
  if (auto s = require(mesh && kl && out, "null handle")) return s;
  return guarded([&] {
    const auto method = projection == UQPDF_PROJECTION_CLOSED_FORM
                            ? uqpdf::ProjectionMethod::closed_form
                            : uqpdf::ProjectionMethod::quadrature;
    const int points =
        projection_points > 0 ? projection_points : uqpdf::kDefaultProjectionPoints;
    const auto expansion = uqpdf::project_coefficient(kl->field, q, method, points);
    const auto basis = uqpdf::multi_index_set(kl->field.term_count(), p);
    const auto system = uqpdf::assemble_sg_system(mesh->mesh, expansion, basis, forcing);
    *out = new uqpdf_sg_solution{uqpdf::solve_sg(system)};
  });
}

void uqpdf_sg_destroy(uqpdf_sg_solution* solution) { delete solution; }

double uqpdf_sg_residual(const uqpdf_sg_solution* solution) {
  return solution ? solution->solution.relative_residual : -1.0;
}

int uqpdf_sg_coercive(const uqpdf_sg_solution* solution) {
  return solution && solution->solution.coercive ? 1 : 0;
}

uqpdf_status uqpdf_sg_qoi_polynomial(const uqpdf_sg_solution* solution,
                                     const uqpdf_mesh* mesh, uqpdf_qoi_kind kind,
                                     int strict_square, uqpdf_qoi_poly** out) {
  if (auto s = require(solution && mesh && out, "null handle")) return s;
  return guarded([&] {
    auto poly =
        (strict_square && kind == UQPDF_QOI_INTEGRAL_SQUARE)
            ? uqpdf::qoi_polynomial_integral_square_projected(solution->solution,
                                                              mesh->mesh)
            : uqpdf::qoi_polynomial(solution->solution, to_kind(kind), mesh->mesh);
    *out = new uqpdf_qoi_poly{std::move(poly), 0.0};
  });
}

void uqpdf_qoi_poly_destroy(uqpdf_qoi_poly* poly) { delete poly; }

int uqpdf_qoi_poly_term_count(const uqpdf_qoi_poly* poly) {
  return poly ? poly->poly.index_set.size() : 0;
}

int uqpdf_qoi_poly_dimension(const uqpdf_qoi_poly* poly) {
  return poly ? poly->poly.index_set.dim : 0;
}

uqpdf_status uqpdf_qoi_poly_term(const uqpdf_qoi_poly* poly, int term, int* index_out,
                                 double* beta_out) {
  if (auto s = require(poly && index_out && beta_out, "null handle")) return s;
  return guarded([&] {
    if (term < 0 || term >= poly->poly.index_set.size()) {
      throw uqpdf::ConfigError("term index out of range");
    }
    for (int d = 0; d < poly->poly.index_set.dim; ++d) {
      index_out[d] = poly->poly.index_set[term][static_cast<size_t>(d)];
    }
    *beta_out = poly->poly.beta(term);
  });
}

uqpdf_status uqpdf_qoi_poly_moments(const uqpdf_qoi_poly* poly, int l_max,
                                    double* m_out) {
  if (auto s = require(poly && m_out, "null handle")) return s;
  return guarded([&] {
    const auto moments = uqpdf::exact_moments(poly->poly, l_max);
    for (int l = 0; l < l_max; ++l) m_out[l] = moments.values[static_cast<size_t>(l)];
  });
}

uqpdf_status uqpdf_qoi_poly_sample(const uqpdf_qoi_poly* poly, int sample_count,
                                   uint64_t seed, double sigma_gamma,
                                   uqpdf_sample_set** out) {
  if (auto s = require(poly && out, "null handle")) return s;
  return guarded([&] {
    auto set = uqpdf::sample_qoi_polynomial(poly->poly, sample_count, seed);
    set.sigma_gamma = sigma_gamma;
    *out = new uqpdf_sample_set{std::move(set)};
  });
}

uqpdf_status uqpdf_qoi_poly_save(const uqpdf_qoi_poly* poly, double sigma_gamma,
                                 const char* path) {
  if (auto s = require(poly && path, "null handle")) return s;
  return guarded([&] { uqpdf::csv::save_qoi_polynomial(poly->poly, sigma_gamma, path); });
}

uqpdf_status uqpdf_qoi_poly_load(const char* path, uqpdf_qoi_poly** out) {
  if (auto s = require(path && out, "null handle")) return s;
  return guarded([&] {
    *out = new uqpdf_qoi_poly{uqpdf::csv::load_qoi_polynomial(path), 0.0};
  });
}

/* ---- moment / cumulant algebra ---------------------------------------- */

uqpdf_status uqpdf_moments_to_cumulants(const double* m, int len, double* kappa_out) {
  if (auto s = require(m && kappa_out, "null pointer")) return s;
  return guarded([&] {
    const auto kappa = uqpdf::moments_to_cumulants(
        uqpdf::MomentVector{std::vector<double>(m, m + len)});
    for (int l = 0; l < len; ++l) kappa_out[l] = kappa.values[static_cast<size_t>(l)];
  });
}

uqpdf_status uqpdf_standardize_moments(const double* m, int len, double* m_std_out) {
  if (auto s = require(m && m_std_out, "null pointer")) return s;
  return guarded([&] {
    const auto std_m = uqpdf::standardize_moments(
        uqpdf::MomentVector{std::vector<double>(m, m + len)});
    for (int l = 0; l < len; ++l) m_std_out[l] = std_m.values[static_cast<size_t>(l)];
  });
}

/* ---- truncated series -------------------------------------------------- */

uqpdf_status uqpdf_series_create(uqpdf_series_kind kind, const double* kappa_std,
                                 int len, int order, uqpdf_series** out) {
  if (auto s = require(kappa_std && out, "null pointer")) return s;
  return guarded([&] {
    uqpdf::CumulantVector kappa;
    kappa.values.assign(kappa_std, kappa_std + len);
    auto series = kind == UQPDF_SERIES_GC ? uqpdf::gc_series(kappa, order)
                                          : uqpdf::ed_series(kappa, order);
    *out = new uqpdf_series{std::move(series)};
  });
}

void uqpdf_series_destroy(uqpdf_series* series) { delete series; }

double uqpdf_series_eval(const uqpdf_series* series, double x) {
  return series ? series->series(x) : 0.0;
}

uqpdf_status uqpdf_series_eval_batch(const uqpdf_series* series, const double* x,
                                     double* f, size_t n) {
  if (auto s = require(series && x && f, "null pointer")) return s;
  return guarded([&] {
    for (size_t i = 0; i < n; ++i) f[i] = series->series(x[i]);
  });
}

/* ---- histogram / KDE ---------------------------------------------------- */

uqpdf_status uqpdf_histogram_create(const uqpdf_sample_set* set, int bins,
                                    uqpdf_histogram** out) {
  if (auto s = require(set && out, "null handle")) return s;
  return guarded([&] {
    *out = new uqpdf_histogram{uqpdf::build_histogram(set->set, bins)};
  });
}

void uqpdf_histogram_destroy(uqpdf_histogram* histogram) { delete histogram; }

int uqpdf_histogram_bins(const uqpdf_histogram* histogram) {
  return histogram ? histogram->histogram.bins() : 0;
}

uqpdf_status uqpdf_histogram_data(const uqpdf_histogram* histogram, double* edges,
                                  double* densities) {
  if (auto s = require(histogram && edges && densities, "null handle")) return s;
  return guarded([&] {
    const auto& h = histogram->histogram;
    std::memcpy(edges, h.edges.data(), h.edges.size() * sizeof(double));
    std::memcpy(densities, h.densities.data(), h.densities.size() * sizeof(double));
  });
}

uqpdf_status uqpdf_kde_eval_batch(const uqpdf_sample_set* set, double bandwidth,
                                  const double* x, double* f, size_t n) {
  if (auto s = require(set && x && f, "null handle")) return s;
  return guarded([&] {
    for (size_t i = 0; i < n; ++i) {
      f[i] = uqpdf::kde_evaluate(set->set, bandwidth, x[i]);
    }
  });
}

/* ---- order selection ------------------------------------------------------ */

uqpdf_status uqpdf_select_order(const double* raw_moments, int len,
                                uqpdf_series_kind kind, const uqpdf_sample_set* crude,
                                double tol, int l_max, int bins, int grid_points,
                                uqpdf_selection_report** out) {
  if (auto s = require(raw_moments && crude && out, "null handle")) return s;
  return guarded([&] {
    const std::vector<double> m(raw_moments, raw_moments + len);
    const auto provider = [&m](int l) {
      if (l > static_cast<int>(m.size())) {
        throw uqpdf::DimensionError("selection needs " + std::to_string(l) +
                                    " moments, got " + std::to_string(m.size()));
      }
      return uqpdf::MomentVector{std::vector<double>(m.begin(), m.begin() + l)};
    };
    uqpdf::SelectionOptions options;
    if (bins > 0) options.bins = bins;
    if (grid_points > 0) options.grid_points = grid_points;
    auto report = uqpdf::select_order(provider, to_kind(kind), crude->set, tol,
                                      l_max, options);
    *out = new uqpdf_selection_report{std::move(report)};
  });
}

void uqpdf_report_destroy(uqpdf_selection_report* report) { delete report; }

int uqpdf_report_chosen_order(const uqpdf_selection_report* report) {
  return report ? report->report.chosen_order : -1;
}

int uqpdf_report_branch(const uqpdf_selection_report* report) {
  if (!report) return -1;
  return report->report.branch == uqpdf::SelectionBranch::convergent ? 0 : 1;
}

int uqpdf_report_order_count(const uqpdf_selection_report* report) {
  return report ? static_cast<int>(report->report.orders.size()) : 0;
}

uqpdf_status uqpdf_report_row(const uqpdf_selection_report* report, int i, int* order,
                              double* successive_l2, double* histogram_distance) {
  if (auto s = require(report != nullptr, "null handle")) return s;
  return guarded([&] {
    const auto& r = report->report;
    if (i < 0 || i >= static_cast<int>(r.orders.size())) {
      throw uqpdf::ConfigError("report row out of range");
    }
    if (order) *order = r.orders[static_cast<size_t>(i)];
    if (successive_l2) *successive_l2 = r.successive_l2[static_cast<size_t>(i)];
    if (histogram_distance) {
      *histogram_distance = i < static_cast<int>(r.histogram_distance.size())
                                ? r.histogram_distance[static_cast<size_t>(i)]
                                : std::numeric_limits<double>::quiet_NaN();
    }
  });
}

int uqpdf_report_grid_size(const uqpdf_selection_report* report) {
  return report ? static_cast<int>(report->report.grid.size()) : 0;
}

uqpdf_status uqpdf_report_grid(const uqpdf_selection_report* report, double* out,
                               size_t len) {
  if (auto s = require(report && out, "null handle")) return s;
  return guarded([&] {
    if (len < report->report.grid.size()) {
      throw uqpdf::DimensionError("output buffer too small");
    }
    std::memcpy(out, report->report.grid.data(),
                report->report.grid.size() * sizeof(double));
  });
}

uqpdf_status uqpdf_report_standardization(const uqpdf_selection_report* report,
                                          double* mean, double* stddev) {
  if (auto s = require(report != nullptr, "null handle")) return s;
  if (mean) *mean = report->report.standardization_mean;
  if (stddev) *stddev = report->report.standardization_stddev;
  return UQPDF_OK;
}

int uqpdf_report_low_sample_warning(const uqpdf_selection_report* report) {
  return report && report->report.low_sample_warning ? 1 : 0;
}

uqpdf_status uqpdf_report_save(const uqpdf_selection_report* report,
                               uqpdf_series_kind kind, double tol, const char* path) {
  if (auto s = require(report && path, "null handle")) return s;
  return guarded([&] {
    uqpdf::csv::save_selection_report(report->report, to_kind(kind), tol, path);
  });
}

} /* extern "C" */
