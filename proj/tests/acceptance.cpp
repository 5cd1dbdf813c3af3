// Acceptance suite: one line per criterion, checked at the stated tolerance.
// Exit code is the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "test_oracles.hpp"
#include "uqpdf/cumulants.hpp"
#include "uqpdf/density.hpp"
#include "uqpdf/errors.hpp"
#include "uqpdf/fem.hpp"
#include "uqpdf/kl.hpp"
#include "uqpdf/mc.hpp"
#include "uqpdf/mesh.hpp"
#include "uqpdf/rng.hpp"
#include "uqpdf/series.hpp"
#include "uqpdf/sg.hpp"

using namespace uqpdf;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

// Agreement in the first three significant digits: |a - b| within half a unit
// of b's third significant digit.
bool sig3(double a, double b) {
  const double scale = std::pow(10.0, std::floor(std::log10(std::abs(b))));
  return std::abs(a - b) <= 0.5 * 1e-2 * scale * (1.0 + 1e-9);
}

bool within_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::abs(b);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Pipeline {
  KLField kl;
  SGSolution solution;

  Pipeline(const StructuredQuadMesh& mesh, double sigma, int p, int q)
      : kl(build_kl_field(mesh, {sigma, 0.1}, 2, 0.01, 0.0)),
        solution(solve_sg(
            assemble_sg_system(mesh, project_coefficient(kl, q), multi_index_set(2, p),
                               -1.0))) {}
};

CumulantVector standardized_cumulants(const MomentVector& raw) {
  return moments_to_cumulants(standardize_moments(raw));
}

}  // namespace

int main() {
  const auto t_start = std::chrono::steady_clock::now();
  const int threads = std::max(2u, std::thread::hardware_concurrency());
  const auto mesh3 = build_mesh(3);

  // ---- criterion 1: reference moment table at sigma = 0.08 --------------
  MomentVector sg008_moments;
  try {
    Pipeline run(mesh3, 0.08, 4, 5);
    const auto qoi = qoi_polynomial(run.solution, QoiKind::average, mesh3);
    sg008_moments = exact_moments(qoi, 6);
    const double table1[6] = {-3.4798e-02, 1.2110e-03, -4.2152e-05,
                              1.4673e-06,  -5.1084e-08, 1.7787e-09};
    bool pass = true;
    std::string detail = "spectral moments";
    for (int l = 1; l <= 6; ++l) {
      const bool ok = sig3(sg008_moments.m(l), table1[l - 1]);
      pass = pass && ok;
      detail += " m" + std::to_string(l) + "=" + fmt(sg008_moments.m(l));
    }

    const auto samples = sample_parameters(100000, 2, 20200323);
    McOptions options;
    options.threads = threads;
    const auto set = run_mc(mesh3, run.kl, QoiKind::average, samples, options);
    const auto estimate = mc_moments(set, 2);
    for (int l = 1; l <= 2; ++l) {
      const double diff = std::abs(estimate.moments.m(l) - sg008_moments.m(l));
      const double limit = 3.0 * estimate.std_error[static_cast<size_t>(l) - 1];
      pass = pass && (diff <= limit);
      detail += " | mc m" + std::to_string(l) + " off by " + fmt(diff) + " (3se=" +
                fmt(limit) + ")";
    }
    report(1, pass, detail);
  } catch (const std::exception& e) {
    report(1, false, std::string("exception: ") + e.what());
  }

  // ---- criterion 2: standardized cumulants at sigma = 1.6 --------------
  CumulantVector kappa16;
  MomentVector raw16;
  try {
    Pipeline run(mesh3, 1.6, 4, 5);
    const auto qoi = qoi_polynomial(run.solution, QoiKind::average, mesh3);
    raw16 = exact_moments(qoi, 6);
    kappa16 = standardized_cumulants(raw16);
    const double table2[4] = {-0.79329, 1.16802, -2.55194, 7.44632};
    bool pass = true;
    std::string detail;
    for (int l = 3; l <= 6; ++l) {
      pass = pass && within_rel(kappa16.kappa(l), table2[l - 3], 0.02);
      detail += " k" + std::to_string(l) + "=" + fmt(kappa16.kappa(l));
    }
    report(2, pass, "sigma=1.6 average:" + detail);
  } catch (const std::exception& e) {
    report(2, false, std::string("exception: ") + e.what());
  }

  // ---- criterion 3: integral-square table row at sigma = 2.7 -----------
  // Faithful run at the stated settings (refinement 3, N=2, p=4, q=5, the
  // squared QoI in its printed diagonal form). The coupled operator is
  // indefinite at this input variance; the converged algebraic solution puts
  // the standardized cumulants far from the reference row, so this criterion
  // records an honest failure. Even-degree coefficient truncations restore
  // coercivity and bracket the reference values; they are printed below as
  // diagnostics, not as the criterion.
  try {
    Pipeline run(mesh3, 2.7, 4, 5);
    const auto qoi = qoi_polynomial(run.solution, QoiKind::integral_square, mesh3);
    const auto kappa = standardized_cumulants(exact_moments(qoi, 6));
    const bool pass = within_rel(kappa.kappa(3), 0.53517, 0.02) &&
                      within_rel(kappa.kappa(4), 0.51856, 0.02);
    std::string detail = "sigma=2.7 integral-square (p=4,q=5): k3=" +
                         fmt(kappa.kappa(3)) + " k4=" + fmt(kappa.kappa(4)) +
                         " vs 0.53517/0.51856";
    if (!run.solution.coercive) {
      detail += " [coupled operator indefinite at these settings; reference row is "
                "not reproducible by a converged solve]";
    }
    report(3, pass, detail);

    for (const auto& [dp, dq] : {std::pair{4, 6}, std::pair{5, 6}, std::pair{6, 6}}) {
      Pipeline even(mesh3, 2.7, dp, dq);
      const auto even_kappa = standardized_cumulants(
          exact_moments(qoi_polynomial(even.solution, QoiKind::integral_square, mesh3), 6));
      std::printf("       diagnostic (coercive, p=%d q=%d): k3=%s k4=%s\n", dp, dq,
                  fmt(even_kappa.kappa(3)).c_str(), fmt(even_kappa.kappa(4)).c_str());
    }
  } catch (const std::exception& e) {
    report(3, false, std::string("exception: ") + e.what());
  }

  // ---- criterion 4: third Gram-Charlier equals first Edgeworth ----------
  try {
    std::vector<CumulantVector> cases;
    if (kappa16.order() >= 6) cases.push_back(kappa16);
    std::mt19937_64 gen(404);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
      CumulantVector kappa;
      kappa.values = {0.0, 1.0, dist(gen), dist(gen), dist(gen), dist(gen)};
      cases.push_back(kappa);
    }
    double worst = 0.0;
    for (const auto& kappa : cases) {
      const auto gc3 = gc_series(kappa, 3);
      const auto ed1 = ed_series(kappa, 1);
      for (int i = 0; i <= 1000; ++i) {
        const double x = -6.0 + 12.0 * i / 1000.0;
        worst = std::max(worst, std::abs(gc3(x) - ed1(x)));
      }
    }
    report(4, worst < 1e-12,
           "max |GC3 - ED1| over " + std::to_string(cases.size()) +
               " cumulant sets = " + fmt(worst));
  } catch (const std::exception& e) {
    report(4, false, std::string("exception: ") + e.what());
  }

  // ---- criterion 5: Gaussian fixed point --------------------------------
  try {
    const MomentVector gauss{{0.0, 1.0, 0.0, 3.0, 0.0, 15.0}};
    const auto kappa = moments_to_cumulants(gauss);
    bool pass = std::abs(kappa.kappa(1)) <= 1e-14 &&
                std::abs(kappa.kappa(2) - 1.0) <= 1e-14;
    for (int l = 3; l <= 6; ++l) pass = pass && std::abs(kappa.kappa(l)) <= 1e-14;

    double worst = 0.0;
    for (int order = 3; order <= 6; ++order) {
      const auto series = gc_series(kappa, order);
      for (int i = 0; i <= 800; ++i) {
        const double x = -8.0 + 16.0 * i / 800.0;
        worst = std::max(worst, std::abs(series(x) - gaussian_pdf(x)));
      }
    }
    for (int order = 1; order <= 4; ++order) {
      const auto series = ed_series(kappa, order);
      for (int i = 0; i <= 800; ++i) {
        const double x = -8.0 + 16.0 * i / 800.0;
        worst = std::max(worst, std::abs(series(x) - gaussian_pdf(x)));
      }
    }
    pass = pass && worst <= 1e-14;
    report(5, pass, "cumulant residual and kernel deviation " + fmt(worst));
  } catch (const std::exception& e) {
    report(5, false, std::string("exception: ") + e.what());
  }

  // ---- criterion 6: every emitted estimator integrates to one ----------
  try {
    bool pass = true;
    std::string detail;
    // the truncated series emitted by the sigma = 1.6 run
    std::vector<TruncatedSeries> emitted;
    for (int order = 3; order <= 6; ++order) emitted.push_back(gc_series(kappa16, order));
    for (int order = 1; order <= 4; ++order) emitted.push_back(ed_series(kappa16, order));
    double worst_series = 0.0;
    for (const auto& series : emitted) {
      const double mass =
          oracle::integrate([&](double x) { return series(x); }, -20.0, 20.0, 400);
      worst_series = std::max(worst_series, std::abs(mass - 1.0));
    }
    pass = pass && worst_series <= 1e-8;
    detail += "series mass off by " + fmt(worst_series);

    // histogram and kernel estimator of the standardized crude samples
    Pipeline run(mesh3, 1.6, 4, 5);
    const auto qoi = qoi_polynomial(run.solution, QoiKind::average, mesh3);
    auto crude = sample_qoi_polynomial(qoi, 10000, 20200323);
    const double mean = raw16.m(1);
    const double stddev = std::sqrt(raw16.m(2) - mean * mean);
    for (auto& v : crude.values) v = (v - mean) / stddev;

    const auto histogram = build_histogram(crude, 50);
    double hist_mass = 0.0;
    for (int b = 0; b < histogram.bins(); ++b) {
      hist_mass += histogram.densities[static_cast<size_t>(b)] * histogram.bin_width();
    }
    pass = pass && std::abs(hist_mass - 1.0) <= 1e-6;
    detail += ", histogram " + fmt(std::abs(hist_mass - 1.0));

    const double h = histogram.bin_width();
    const double lo = histogram.edges.front() - 10.0 * h;
    const double hi = histogram.edges.back() + 10.0 * h;
    const double kde_mass = oracle::integrate(
        [&](double x) { return kde_evaluate(crude, h, x); }, lo, hi, 400);
    pass = pass && std::abs(kde_mass - 1.0) <= 1e-6;
    detail += ", kde " + fmt(std::abs(kde_mass - 1.0));
    report(6, pass, detail);
  } catch (const std::exception& e) {
    report(6, false, std::string("exception: ") + e.what());
  }

  // ---- criterion 7: quadrature exactness and basis orthonormality -------
  try {
    bool pass = true;
    double worst = 0.0;
    for (int n = 1; n <= 13; ++n) {
      const auto rule = gauss_hermite(n);
      for (int k = 0; k <= 2 * n - 1; ++k) {
        double sum = 0.0;
        double scale = 0.0;  // absolute-moment scale: odd powers cancel to zero
        for (int i = 0; i < n; ++i) {
          sum += rule.weights(i) * std::pow(rule.nodes(i), k);
          scale += rule.weights(i) * std::pow(std::abs(rule.nodes(i)), k);
        }
        const double exact = oracle::gaussian_moment(k);
        worst = std::max(worst, std::abs(sum - exact) / std::max(scale, 1.0));
      }
    }
    pass = pass && worst < 1e-11;

    const auto rule = gauss_hermite(12);
    double worst_pair = 0.0;
    for (int i = 0; i <= 10; ++i) {
      for (int j = 0; j <= 10; ++j) {
        double sum = 0.0;
        for (int g = 0; g < 12; ++g) {
          sum += rule.weights(g) * hermite_orthonormal(i, rule.nodes(g)) *
                 hermite_orthonormal(j, rule.nodes(g));
        }
        worst_pair = std::max(worst_pair, std::abs(sum - (i == j ? 1.0 : 0.0)));
      }
    }
    pass = pass && worst_pair <= 1e-11;
    report(7, pass,
           "monomial error " + fmt(worst) + ", pair deviation " + fmt(worst_pair));
  } catch (const std::exception& e) {
    report(7, false, std::string("exception: ") + e.what());
  }

  // ---- criterion 8: eigenpair contracts ---------------------------------
  try {
    const auto field = build_kl_field(mesh3, {0.08, 0.1}, 2, 0.01, 0.0);
    const SpMat mass = assemble_mass(mesh3);
    double worst = 0.0;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const double inner =
            field.eigenfunctions.col(a).dot(mass * field.eigenfunctions.col(b));
        worst = std::max(worst, std::abs(inner - (a == b ? 1.0 : 0.0)));
      }
    }
    bool pass = worst <= 1e-10;

    const auto scaled = build_kl_field(mesh3, {0.16, 0.1}, 2, 0.01, 0.0);
    double worst_scale = 0.0;
    for (int n = 0; n < 2; ++n) {
      worst_scale = std::max(worst_scale,
                             std::abs(scaled.eigenvalues(n) - 4.0 * field.eigenvalues(n)) /
                                 (4.0 * field.eigenvalues(n)));
    }
    pass = pass && worst_scale <= 1e-10;

    const auto mesh2 = build_mesh(2);
    const auto coarse = build_kl_field(mesh2, {0.08, 0.1}, 2, 0.01, 0.0);
    const double drift =
        std::abs(coarse.eigenvalues(0) - field.eigenvalues(0)) / field.eigenvalues(0);
    pass = pass && drift <= 0.02;
    report(8, pass,
           "orthonormality " + fmt(worst) + ", scaling " + fmt(worst_scale) +
               ", level-2 vs level-3 lambda_1 drift " + fmt(drift));
    if (drift > 0.02) {
      // The drift is quadrature error of the default element-pair Gauss rule
      // on the kinked kernel, not an eigensolver defect: the kink-split
      // assembly converges at level 2 already (but shifts the leading
      // eigenvalues off the discretization the reference tables encode).
      const SpMat mass2 = assemble_mass(mesh2);
      const auto split2 = solve_kl_eigenproblem(
          assemble_covariance_matrix(mesh2, {0.08, 0.1},
                                     CovarianceQuadrature::tensor_kink_split),
          mass2, 2);
      const auto split3 = solve_kl_eigenproblem(
          assemble_covariance_matrix(mesh3, {0.08, 0.1},
                                     CovarianceQuadrature::tensor_kink_split),
          mass, 2);
      std::printf("       diagnostic (kink-split assembly): lambda_1 drift %s\n",
                  fmt(std::abs(split2.first(0) - split3.first(0)) / split3.first(0))
                      .c_str());
    }
  } catch (const std::exception& e) {
    report(8, false, std::string("exception: ") + e.what());
  }

  // ---- criterion 9: projection routes agree -----------------------------
  try {
    const auto field = build_kl_field(mesh3, {1.6, 0.1}, 2, 0.01, 0.0);
    const auto quad = project_coefficient(field, 5, ProjectionMethod::quadrature, 20);
    const auto closed = project_coefficient(field, 5, ProjectionMethod::closed_form);
    double worst = 0.0;
    for (int k = 0; k < quad.index_set.size(); ++k) {
      worst = std::max(worst, (quad.fields.col(k) - closed.fields.col(k)).norm() /
                                  closed.fields.col(k).norm());
    }
    report(9, worst <= 1e-8, "max per-index relative deviation " + fmt(worst));
  } catch (const std::exception& e) {
    report(9, false, std::string("exception: ") + e.what());
  }

  // ---- criterion 10: degenerate paths ------------------------------------
  try {
    const auto field = build_kl_field(mesh3, {1e-9, 0.1}, 2, 0.01, 0.0);
    const auto solution = solve_sg(assemble_sg_system(
        mesh3, project_coefficient(field, 5), multi_index_set(2, 4), -1.0));
    const auto deterministic =
        solve_poisson(mesh3, [](const Eigen::Vector2d&) { return 1.01; }, -1.0);
    double off = 0.0;
    for (int p = 1; p < solution.index_set.size(); ++p) {
      off = std::max(off, solution.fields.col(p).cwiseAbs().maxCoeff());
    }
    const double mean_diff =
        (solution.fields.col(0) - deterministic).cwiseAbs().maxCoeff();
    bool pass = off < 1e-10 && mean_diff < 1e-10;

    bool threw = false;
    try {
      standardize_moments(MomentVector{{2.0, 4.0, 8.0, 16.0, 32.0, 64.0}});
    } catch (const DegenerateDistributionError&) {
      threw = true;
    }
    pass = pass && threw;
    report(10, pass,
           "off-mean blocks " + fmt(off) + ", mean-block drift " + fmt(mean_diff) +
               ", degenerate error " + (threw ? "raised" : "MISSING"));
  } catch (const std::exception& e) {
    report(10, false, std::string("exception: ") + e.what());
  }

  // ---- criterion 11: order selection and the offline/online cost split ---
  try {
    Pipeline run(mesh3, 1.6, 4, 5);
    const auto qoi = qoi_polynomial(run.solution, QoiKind::average, mesh3);
    const MomentProvider provider = [&](int l) { return exact_moments(qoi, l); };
    const auto crude = sample_qoi_polynomial(qoi, 10000, 20200323);

    const auto ed = select_order(provider, SeriesKind::edgeworth, crude, 1e-3, 4);
    const auto gc = select_order(provider, SeriesKind::gram_charlier, crude, 1e-3, 6);
    const bool ed_ok = ed.branch == SelectionBranch::divergent && ed.chosen_order == 2;
    const bool gc_ok = gc.branch == SelectionBranch::divergent && gc.chosen_order == 3;
    bool pass = ed_ok && gc_ok;

    // offline/online split: a series evaluation must be at least 10x cheaper
    // per point than a kernel-density evaluation over 1e6 samples.
    const auto kernel_samples = sample_qoi_polynomial(qoi, 1000000, 7);
    const auto series = gc_series(standardized_cumulants(exact_moments(qoi, 6)), 3);

    double sink = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 200000; ++i) sink += series(-3.0 + 6.0 * i / 200000.0);
    const auto t1 = std::chrono::steady_clock::now();
    for (int i = 0; i < 20; ++i) {
      sink += kde_evaluate(kernel_samples, 0.05, -3.0 + 6.0 * i / 20.0);
    }
    const auto t2 = std::chrono::steady_clock::now();
    const double series_per_point =
        std::chrono::duration<double>(t1 - t0).count() / 200000.0;
    const double kde_per_point = std::chrono::duration<double>(t2 - t1).count() / 20.0;
    const double speedup = kde_per_point / series_per_point;
    pass = pass && speedup >= 10.0 && std::isfinite(sink);
    report(11, pass,
           "ed chose " + std::to_string(ed.chosen_order) + ", gc chose " +
               std::to_string(gc.chosen_order) + ", series vs kde speedup " +
               fmt(speedup) + "x");
    if (!ed_ok) {
      // The crude-histogram distances rank the fourth truncation closest, and
      // the ranking persists as the crude sample count grows, so it reflects
      // the true standardized density rather than histogram noise; the
      // reference preference for order 2 was a visual judgment the RMS
      // metric does not reproduce.
      std::string dists;
      for (const double d : ed.histogram_distance) dists += " " + fmt(d);
      std::printf("       diagnostic (ed histogram distances, orders 1..4):%s\n",
                  dists.c_str());
    }
  } catch (const std::exception& e) {
    report(11, false, std::string("exception: ") + e.what());
  }

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  std::printf("%d of 11 criteria passed (%.1f s)\n", 11 - g_failures, elapsed);
  return g_failures;
}
