// Exercises the shared-library surface end to end: handles, error codes,
// persistence formats and the pipeline wiring, at coarse settings.
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "uqpdf.h"

namespace {

std::string temp_path(const char* name) {
  const auto dir = std::filesystem::temp_directory_path() / "uqpdf_capi_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

struct Fixture {
  uqpdf_mesh* mesh = nullptr;
  uqpdf_kl_field* kl = nullptr;

  Fixture(int level = 1, double sigma = 0.4) {
    REQUIRE(uqpdf_mesh_create(level, &mesh) == UQPDF_OK);
    REQUIRE(uqpdf_kl_create(mesh, sigma, 0.1, 2, 0.01, 0.0, &kl) == UQPDF_OK);
  }
  ~Fixture() {
    uqpdf_kl_destroy(kl);
    uqpdf_mesh_destroy(mesh);
  }
};

}  // namespace

TEST_SUITE_BEGIN("capi");

TEST_CASE("version and error text are always available") {
  CHECK(uqpdf_version() != nullptr);
  CHECK(std::strlen(uqpdf_version()) > 0);
  CHECK(uqpdf_last_error() != nullptr);
}

TEST_CASE("mesh creation, counts and failure codes") {
  uqpdf_mesh* mesh = nullptr;
  REQUIRE(uqpdf_mesh_create(1, &mesh) == UQPDF_OK);
  CHECK(uqpdf_mesh_node_count(mesh) == 81);
  CHECK(uqpdf_mesh_element_count(mesh) == 16);
  uqpdf_mesh_destroy(mesh);

  uqpdf_mesh* bad = nullptr;
  CHECK(uqpdf_mesh_create(9, &bad) == UQPDF_ERR_CONFIG);
  CHECK(bad == nullptr);
  CHECK(std::strlen(uqpdf_last_error()) > 0);
  uqpdf_mesh_destroy(nullptr);  // must be a no-op
}

TEST_CASE("kl field handles, the scaling law and the cache") {
  Fixture fx;
  CHECK(uqpdf_kl_term_count(fx.kl) == 2);
  const double l1 = uqpdf_kl_eigenvalue(fx.kl, 0);
  const double l2 = uqpdf_kl_eigenvalue(fx.kl, 1);
  CHECK(l1 >= l2);
  CHECK(l2 > 0.0);

  uqpdf_kl_field* doubled = nullptr;
  REQUIRE(uqpdf_kl_create(fx.mesh, 0.8, 0.1, 2, 0.01, 0.0, &doubled) == UQPDF_OK);
  CHECK(uqpdf_kl_eigenvalue(doubled, 0) == doctest::Approx(4.0 * l1).epsilon(1e-10));
  uqpdf_kl_destroy(doubled);

  std::vector<double> values(static_cast<size_t>(uqpdf_mesh_node_count(fx.mesh)));
  REQUIRE(uqpdf_kl_eigenfunction(fx.kl, 0, values.data(), values.size()) == UQPDF_OK);
  CHECK(uqpdf_kl_eigenfunction(fx.kl, 5, values.data(), values.size()) ==
        UQPDF_ERR_CONFIG);
  CHECK(uqpdf_kl_eigenfunction(fx.kl, 0, values.data(), 3) == UQPDF_ERR_DIMENSION);

  // cache round trip: first call computes and writes, second call loads
  const std::string cache = temp_path("kl_cache.csv");
  std::filesystem::remove(cache);
  uqpdf_kl_field* first = nullptr;
  int hit = -1;
  REQUIRE(uqpdf_kl_create_cached(fx.mesh, 0.4, 0.1, 2, 0.01, 0.0, cache.c_str(), &hit,
                                 &first) == UQPDF_OK);
  CHECK(hit == 0);
  const auto stamp = std::filesystem::last_write_time(cache);

  uqpdf_kl_field* second = nullptr;
  REQUIRE(uqpdf_kl_create_cached(fx.mesh, 0.4, 0.1, 2, 0.01, 0.0, cache.c_str(), &hit,
                                 &second) == UQPDF_OK);
  CHECK(hit == 1);
  CHECK(std::filesystem::last_write_time(cache) == stamp);  // untouched on a hit
  CHECK(uqpdf_kl_eigenvalue(second, 0) ==
        doctest::Approx(uqpdf_kl_eigenvalue(first, 0)).epsilon(1e-15));

  // different parameters: recompute and rewrite
  uqpdf_kl_field* third = nullptr;
  REQUIRE(uqpdf_kl_create_cached(fx.mesh, 0.5, 0.1, 2, 0.01, 0.0, cache.c_str(), &hit,
                                 &third) == UQPDF_OK);
  CHECK(hit == 0);
  uqpdf_kl_destroy(first);
  uqpdf_kl_destroy(second);
  uqpdf_kl_destroy(third);
}

TEST_CASE("sampling solver and sample-set persistence") {
  Fixture fx;
  uqpdf_sample_set* set = nullptr;
  REQUIRE(uqpdf_mc_run(fx.mesh, fx.kl, UQPDF_QOI_AVERAGE, 64, 11, 2, &set) == UQPDF_OK);
  CHECK(uqpdf_sample_count(set) == 64);

  std::vector<double> values(64);
  REQUIRE(uqpdf_sample_values(set, values.data(), values.size()) == UQPDF_OK);
  double m[2], se[2];
  REQUIRE(uqpdf_sample_moments(set, 2, m, se) == UQPDF_OK);
  CHECK(m[1] >= m[0] * m[0]);
  CHECK(se[0] > 0.0);

  const std::string path = temp_path("samples.csv");
  REQUIRE(uqpdf_sample_save(set, path.c_str()) == UQPDF_OK);
  uqpdf_sample_set* loaded = nullptr;
  REQUIRE(uqpdf_sample_load(path.c_str(), &loaded) == UQPDF_OK);
  REQUIRE(uqpdf_sample_count(loaded) == 64);
  std::vector<double> reloaded(64);
  REQUIRE(uqpdf_sample_values(loaded, reloaded.data(), reloaded.size()) == UQPDF_OK);
  for (int i = 0; i < 64; ++i) CHECK(reloaded[static_cast<size_t>(i)] == values[static_cast<size_t>(i)]);

  uqpdf_sample_set* missing = nullptr;
  CHECK(uqpdf_sample_load(temp_path("nope.csv").c_str(), &missing) == UQPDF_ERR_IO);

  uqpdf_sample_destroy(loaded);
  uqpdf_sample_destroy(set);
}

TEST_CASE("spectral solve, polynomial access, moments and persistence") {
  Fixture fx;
  uqpdf_sg_solution* solution = nullptr;
  REQUIRE(uqpdf_sg_solve(fx.mesh, fx.kl, 3, 4, UQPDF_PROJECTION_QUADRATURE, 0, -1.0,
                         &solution) == UQPDF_OK);
  CHECK(uqpdf_sg_residual(solution) < 1e-8);
  CHECK(uqpdf_sg_coercive(solution) == 1);

  uqpdf_qoi_poly* poly = nullptr;
  REQUIRE(uqpdf_sg_qoi_polynomial(solution, fx.mesh, UQPDF_QOI_AVERAGE, 0, &poly) ==
          UQPDF_OK);
  CHECK(uqpdf_qoi_poly_term_count(poly) == 10);  // binomial(3+2, 2)
  CHECK(uqpdf_qoi_poly_dimension(poly) == 2);

  int index[2];
  double beta = 0.0;
  REQUIRE(uqpdf_qoi_poly_term(poly, 0, index, &beta) == UQPDF_OK);
  CHECK(index[0] == 0);
  CHECK(index[1] == 0);
  CHECK(beta < 0.0);  // mean of the nonpositive solution

  double moments[6];
  REQUIRE(uqpdf_qoi_poly_moments(poly, 6, moments) == UQPDF_OK);
  CHECK(moments[0] == doctest::Approx(beta).epsilon(1e-9));

  const std::string path = temp_path("qoi_poly.csv");
  REQUIRE(uqpdf_qoi_poly_save(poly, 0.4, path.c_str()) == UQPDF_OK);
  uqpdf_qoi_poly* reloaded = nullptr;
  REQUIRE(uqpdf_qoi_poly_load(path.c_str(), &reloaded) == UQPDF_OK);
  double moments2[6];
  REQUIRE(uqpdf_qoi_poly_moments(reloaded, 6, moments2) == UQPDF_OK);
  for (int l = 0; l < 6; ++l) CHECK(moments2[l] == moments[l]);

  // max is not representable in the spectral basis
  uqpdf_qoi_poly* bad = nullptr;
  CHECK(uqpdf_sg_qoi_polynomial(solution, fx.mesh, UQPDF_QOI_MAX, 0, &bad) ==
        UQPDF_ERR_UNSUPPORTED);

  uqpdf_sample_set* crude = nullptr;
  REQUIRE(uqpdf_qoi_poly_sample(poly, 500, 99, 0.4, &crude) == UQPDF_OK);
  CHECK(uqpdf_sample_count(crude) == 500);

  uqpdf_sample_destroy(crude);
  uqpdf_qoi_poly_destroy(reloaded);
  uqpdf_qoi_poly_destroy(poly);
  uqpdf_sg_destroy(solution);
}

TEST_CASE("moment algebra and series through the C surface") {
  const double gauss[6] = {0.0, 1.0, 0.0, 3.0, 0.0, 15.0};
  double kappa[6];
  REQUIRE(uqpdf_moments_to_cumulants(gauss, 6, kappa) == UQPDF_OK);
  CHECK(std::abs(kappa[2]) < 1e-14);
  CHECK(kappa[1] == doctest::Approx(1.0));

  double std_m[6];
  REQUIRE(uqpdf_standardize_moments(gauss, 6, std_m) == UQPDF_OK);
  CHECK(std_m[0] == doctest::Approx(0.0));
  CHECK(std_m[1] == doctest::Approx(1.0));

  const double degenerate[2] = {1.0, 1.0};
  CHECK(uqpdf_standardize_moments(degenerate, 2, std_m) == UQPDF_ERR_DEGENERATE);

  uqpdf_series* gc3 = nullptr;
  REQUIRE(uqpdf_series_create(UQPDF_SERIES_GC, kappa, 6, 3, &gc3) == UQPDF_OK);
  uqpdf_series* ed1 = nullptr;
  REQUIRE(uqpdf_series_create(UQPDF_SERIES_ED, kappa, 6, 1, &ed1) == UQPDF_OK);
  for (double x = -4.0; x <= 4.0; x += 0.5) {
    CHECK(uqpdf_series_eval(gc3, x) == doctest::Approx(uqpdf_series_eval(ed1, x)));
  }
  const double grid[3] = {-1.0, 0.0, 1.0};
  double out[3];
  REQUIRE(uqpdf_series_eval_batch(gc3, grid, out, 3) == UQPDF_OK);
  CHECK(out[1] == doctest::Approx(uqpdf_series_eval(gc3, 0.0)));

  uqpdf_series* bad = nullptr;
  CHECK(uqpdf_series_create(UQPDF_SERIES_ED, kappa, 6, 5, &bad) == UQPDF_ERR_UNSUPPORTED);
  CHECK(uqpdf_series_create(UQPDF_SERIES_GC, kappa, 6, 2, &bad) == UQPDF_ERR_CONFIG);

  uqpdf_series_destroy(gc3);
  uqpdf_series_destroy(ed1);
}

TEST_CASE("histogram, kernel estimator and order selection") {
  Fixture fx;
  uqpdf_sg_solution* solution = nullptr;
  REQUIRE(uqpdf_sg_solve(fx.mesh, fx.kl, 4, 5, UQPDF_PROJECTION_QUADRATURE, 0, -1.0,
                         &solution) == UQPDF_OK);
  uqpdf_qoi_poly* poly = nullptr;
  REQUIRE(uqpdf_sg_qoi_polynomial(solution, fx.mesh, UQPDF_QOI_AVERAGE, 0, &poly) ==
          UQPDF_OK);
  double m[6];
  REQUIRE(uqpdf_qoi_poly_moments(poly, 6, m) == UQPDF_OK);
  uqpdf_sample_set* crude = nullptr;
  REQUIRE(uqpdf_qoi_poly_sample(poly, 4000, 3, 0.4, &crude) == UQPDF_OK);

  uqpdf_selection_report* report = nullptr;
  REQUIRE(uqpdf_select_order(m, 6, UQPDF_SERIES_ED, crude, 1e-3, 4, 0, 0, &report) ==
          UQPDF_OK);
  CHECK(uqpdf_report_chosen_order(report) >= 1);
  CHECK(uqpdf_report_order_count(report) >= 2);
  int order;
  double diff, dist;
  REQUIRE(uqpdf_report_row(report, 1, &order, &diff, &dist) == UQPDF_OK);
  CHECK(order == 2);
  CHECK(std::isfinite(diff));
  CHECK(uqpdf_report_grid_size(report) == 201);
  std::vector<double> grid(201);
  REQUIRE(uqpdf_report_grid(report, grid.data(), grid.size()) == UQPDF_OK);
  double mean = 0.0, stddev = 0.0;
  REQUIRE(uqpdf_report_standardization(report, &mean, &stddev) == UQPDF_OK);
  CHECK(stddev > 0.0);
  const std::string report_path = temp_path("report.csv");
  REQUIRE(uqpdf_report_save(report, UQPDF_SERIES_ED, 1e-3, report_path.c_str()) ==
          UQPDF_OK);
  CHECK(std::filesystem::file_size(report_path) > 0);

  // standardized samples feed the histogram and the kernel estimator
  uqpdf_sample_set* standardized = nullptr;
  REQUIRE(uqpdf_sample_standardize(crude, mean, stddev, &standardized) == UQPDF_OK);
  uqpdf_histogram* histogram = nullptr;
  REQUIRE(uqpdf_histogram_create(standardized, 40, &histogram) == UQPDF_OK);
  REQUIRE(uqpdf_histogram_bins(histogram) == 40);
  std::vector<double> edges(41), densities(40);
  REQUIRE(uqpdf_histogram_data(histogram, edges.data(), densities.data()) == UQPDF_OK);
  double mass = 0.0;
  for (int b = 0; b < 40; ++b) {
    mass += densities[static_cast<size_t>(b)] *
            (edges[static_cast<size_t>(b) + 1] - edges[static_cast<size_t>(b)]);
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));

  double kde[3];
  REQUIRE(uqpdf_kde_eval_batch(standardized, edges[1] - edges[0], grid.data(), kde, 3) ==
          UQPDF_OK);
  CHECK(std::isfinite(kde[0]));
  CHECK(uqpdf_kde_eval_batch(standardized, 0.0, grid.data(), kde, 3) ==
        UQPDF_ERR_CONFIG);

  uqpdf_histogram_destroy(histogram);
  uqpdf_sample_destroy(standardized);
  uqpdf_report_destroy(report);
  uqpdf_sample_destroy(crude);
  uqpdf_qoi_poly_destroy(poly);
  uqpdf_sg_destroy(solution);
}

TEST_SUITE_END();
