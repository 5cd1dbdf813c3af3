// Command-line front end: configuration-driven runs of the eigenpair setup,
// the moment tables, the density-estimation pipeline and the MC/SG
// cross-check. Talks to the library exclusively through the C interface.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "uqpdf.h"

namespace {

struct Config {
  int refinement_level = 3;
  double sigma_gamma = 0.08;
  double L = 0.1;   // correlation length
  int N = 2;        // stochastic dimension
  double a_min = 0.01;
  double mu_gamma = 0.0;
  int p = 4;
  int q = 5;
  std::string qoi_kind = "average";
  std::string method = "sg";
  int M = 100000;
  int M_crude = 10000;
  std::uint64_t seed = 20200323;
  int bins = 50;
  double bandwidth = 0.0;  // 0 selects the histogram bin width
  std::string series = "ed";
  std::string order = "auto";
  double tol = 1e-3;
  std::string output_dir = "out";
  int threads = 0;
  int projection_points = 20;
  int grid_points = 201;
};

int category(uqpdf_status status) {
  switch (status) {
    case UQPDF_OK:
      return 0;
    case UQPDF_ERR_CONFIG:
    case UQPDF_ERR_DIMENSION:
    case UQPDF_ERR_UNSUPPORTED:
      return 2;
    case UQPDF_ERR_NUMERIC:
    case UQPDF_ERR_COERCIVITY:
    case UQPDF_ERR_DEGENERATE:
      return 3;
    case UQPDF_ERR_IO:
      return 4;
    default:
      return 1;
  }
}

[[noreturn]] void die(uqpdf_status status) {
  std::fprintf(stderr, "error: %s\n", uqpdf_last_error());
  std::exit(category(status));
}

void check(uqpdf_status status) {
  if (status != UQPDF_OK) die(status);
}

[[noreturn]] void die_config(const std::string& message) {
  std::fprintf(stderr, "error: %s\n", message.c_str());
  std::exit(2);
}

template <typename T, void (*Destroy)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  explicit Handle(T* p) : ptr(p) {}
  ~Handle() { Destroy(ptr); }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& other) noexcept : ptr(other.ptr) { other.ptr = nullptr; }
  Handle& operator=(Handle&& other) noexcept {
    if (this != &other) {
      Destroy(ptr);
      ptr = other.ptr;
      other.ptr = nullptr;
    }
    return *this;
  }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using MeshHandle = Handle<uqpdf_mesh, uqpdf_mesh_destroy>;
using KlHandle = Handle<uqpdf_kl_field, uqpdf_kl_destroy>;
using SgHandle = Handle<uqpdf_sg_solution, uqpdf_sg_destroy>;
using PolyHandle = Handle<uqpdf_qoi_poly, uqpdf_qoi_poly_destroy>;
using SampleHandle = Handle<uqpdf_sample_set, uqpdf_sample_destroy>;
using SeriesHandle = Handle<uqpdf_series, uqpdf_series_destroy>;
using HistogramHandle = Handle<uqpdf_histogram, uqpdf_histogram_destroy>;
using ReportHandle = Handle<uqpdf_selection_report, uqpdf_report_destroy>;

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    std::fprintf(stderr, "error: cannot open '%s' for writing\n", path.c_str());
    std::exit(4);
  }
  return out;
}

void ensure_output_dir(const Config& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot create output directory '%s': %s\n",
                 cfg.output_dir.c_str(), ec.message().c_str());
    std::exit(4);
  }
}

std::string parameter_line(const Config& cfg) {
  std::string line = "refinement_level=" + std::to_string(cfg.refinement_level) +
                     " sigma_gamma=" + g6(cfg.sigma_gamma) + " L=" + g6(cfg.L) +
                     " N=" + std::to_string(cfg.N) + " a_min=" + g6(cfg.a_min) +
                     " mu_gamma=" + g6(cfg.mu_gamma) + " p=" + std::to_string(cfg.p) +
                     " q=" + std::to_string(cfg.q) + " qoi_kind=" + cfg.qoi_kind +
                     " seed=" + std::to_string(cfg.seed);
  return line;
}

uqpdf_qoi_kind parse_qoi(const std::string& name) {
  if (name == "average") return UQPDF_QOI_AVERAGE;
  if (name == "integral_square") return UQPDF_QOI_INTEGRAL_SQUARE;
  if (name == "max") return UQPDF_QOI_MAX;
  die_config("unknown qoi_kind '" + name + "' (average, integral_square, max)");
}

uqpdf_series_kind parse_series(const std::string& name) {
  if (name == "gc") return UQPDF_SERIES_GC;
  if (name == "ed") return UQPDF_SERIES_ED;
  die_config("unknown series kind '" + name + "' (gc, ed)");
}

MeshHandle make_mesh(const Config& cfg) {
  MeshHandle mesh;
  check(uqpdf_mesh_create(cfg.refinement_level, mesh.out()));
  return mesh;
}

KlHandle make_kl(const Config& cfg, const uqpdf_mesh* mesh) {
  KlHandle kl;
  check(uqpdf_kl_create(mesh, cfg.sigma_gamma, cfg.L, cfg.N, cfg.a_min, cfg.mu_gamma,
                        kl.out()));
  return kl;
}

// The sampling solver is only trustworthy for small input variance; the
// moment tables refuse above sigma_gamma = 0.1 unless forced.
void guard_mc_sigma(const Config& cfg, bool force, bool refuse) {
  if (cfg.sigma_gamma <= 0.1) return;
  if (refuse && !force) {
    die_config("sampling with sigma_gamma = " + g6(cfg.sigma_gamma) +
               " > 0.1 carries a large sampling error; pass --force to proceed");
  }
  std::fprintf(stderr,
               "warning: sigma_gamma = %s > 0.1; sampling error grows with the "
               "input variance\n",
               g6(cfg.sigma_gamma).c_str());
}

struct MomentTable {
  std::vector<double> raw;       // m_1..m_6
  std::vector<double> raw_se;    // empty for sg
  std::vector<double> raw_kappa;
  std::vector<double> std_m;
  std::vector<double> std_kappa;
};

MomentTable tabulate(const std::vector<double>& raw, const std::vector<double>& se) {
  MomentTable table;
  table.raw = raw;
  table.raw_se = se;
  table.raw_kappa.resize(raw.size());
  check(uqpdf_moments_to_cumulants(raw.data(), static_cast<int>(raw.size()),
                                   table.raw_kappa.data()));
  table.std_m.resize(raw.size());
  check(uqpdf_standardize_moments(raw.data(), static_cast<int>(raw.size()),
                                  table.std_m.data()));
  table.std_kappa.resize(raw.size());
  check(uqpdf_moments_to_cumulants(table.std_m.data(), static_cast<int>(raw.size()),
                                   table.std_kappa.data()));
  return table;
}

void write_row(std::ofstream& out, const std::string& label,
               const std::vector<double>& m, const std::vector<double>& kappa) {
  out << label;
  for (const double v : m) out << ',' << g6(v);
  for (const double v : kappa) out << ',' << g6(v);
  out << '\n';
}

// Moments of the QoI through the configured solver; the crude sample set is
// filled for the estimate pipeline (SG samples the QoI polynomial, the
// sampling solver reuses its own realizations).
struct PipelineResult {
  std::vector<double> moments;
  std::vector<double> std_error;  // empty for sg
  SampleHandle crude;
};

PipelineResult run_pipeline(const Config& cfg, const uqpdf_mesh* mesh,
                            const uqpdf_kl_field* kl, bool strict_square,
                            bool want_crude) {
  PipelineResult result;
  result.moments.resize(6);
  if (cfg.method == "sg") {
    if (cfg.qoi_kind == "max") {
      die_config("qoi_kind=max is not representable by the sg method; use method=mc");
    }
    SgHandle solution;
    check(uqpdf_sg_solve(mesh, kl, cfg.p, cfg.q, UQPDF_PROJECTION_QUADRATURE,
                         cfg.projection_points, -1.0, solution.out()));
    if (!uqpdf_sg_coercive(solution.get())) {
      std::fprintf(stderr,
                   "warning: coupled operator is indefinite at this input "
                   "variance; solved by pivoted factorization (residual %.2e)\n",
                   uqpdf_sg_residual(solution.get()));
    }
    PolyHandle poly;
    check(uqpdf_sg_qoi_polynomial(solution.get(), mesh, parse_qoi(cfg.qoi_kind),
                                  strict_square ? 1 : 0, poly.out()));
    check(uqpdf_qoi_poly_moments(poly.get(), 6, result.moments.data()));
    if (want_crude) {
      check(uqpdf_qoi_poly_sample(poly.get(), cfg.M_crude, cfg.seed, cfg.sigma_gamma,
                                  result.crude.out()));
    }
  } else if (cfg.method == "mc") {
    check(uqpdf_mc_run(mesh, kl, parse_qoi(cfg.qoi_kind), cfg.M, cfg.seed,
                       cfg.threads, result.crude.out()));
    result.std_error.resize(6);
    check(uqpdf_sample_moments(result.crude.get(), 6, result.moments.data(),
                               result.std_error.data()));
  } else {
    die_config("unknown method '" + cfg.method + "' (sg, mc)");
  }
  return result;
}

int cmd_kl(const Config& cfg, std::string cache_path) {
  ensure_output_dir(cfg);
  if (cache_path.empty()) cache_path = cfg.output_dir + "/kl_cache.csv";

  MeshHandle mesh = make_mesh(cfg);
  KlHandle kl;
  int cache_hit = 0;
  check(uqpdf_kl_create_cached(mesh.get(), cfg.sigma_gamma, cfg.L, cfg.N, cfg.a_min,
                               cfg.mu_gamma, cache_path.c_str(), &cache_hit,
                               kl.out()));
  std::printf("%s eigenpairs from %s\n", cache_hit ? "loaded" : "computed",
              cache_path.c_str());
  for (int n = 0; n < uqpdf_kl_term_count(kl.get()); ++n) {
    std::printf("lambda_%d = %s\n", n + 1, g6(uqpdf_kl_eigenvalue(kl.get(), n)).c_str());
  }
  return 0;
}

int cmd_moments(const Config& cfg, bool force, bool strict_square,
                const std::string& samples_path) {
  ensure_output_dir(cfg);
  if (cfg.method == "mc") guard_mc_sigma(cfg, force, /*refuse=*/true);

  MeshHandle mesh = make_mesh(cfg);
  KlHandle kl = make_kl(cfg, mesh.get());
  PipelineResult result =
      run_pipeline(cfg, mesh.get(), kl.get(), strict_square, !samples_path.empty());
  const MomentTable table = tabulate(result.moments, result.std_error);

  const std::string path = cfg.output_dir + "/moments.csv";
  auto out = open_output(path);
  out << "# " << uqpdf_version() << " moments v1\n";
  out << "# " << parameter_line(cfg) << " method=" << cfg.method << "\n";
  out << "set,m1,m2,m3,m4,m5,m6,k1,k2,k3,k4,k5,k6\n";
  write_row(out, "raw", table.raw, table.raw_kappa);
  if (!table.raw_se.empty()) {
    out << "raw_se";
    for (const double v : table.raw_se) out << ',' << g6(v);
    out << ",,,,,,\n";
  }
  write_row(out, "standardized", table.std_m, table.std_kappa);
  out.close();

  std::printf("method=%s sigma_gamma=%s qoi=%s\n", cfg.method.c_str(),
              g6(cfg.sigma_gamma).c_str(), cfg.qoi_kind.c_str());
  for (int l = 0; l < 6; ++l) {
    std::printf("m%d = %s", l + 1, g6(table.raw[l]).c_str());
    if (!table.raw_se.empty()) std::printf("  (se %s)", g6(table.raw_se[l]).c_str());
    std::printf("  k%d = %s\n", l + 1, g6(table.raw_kappa[l]).c_str());
  }
  std::printf("wrote %s\n", path.c_str());

  if (!samples_path.empty() && result.crude.get()) {
    check(uqpdf_sample_save(result.crude.get(), samples_path.c_str()));
    std::printf("wrote %s\n", samples_path.c_str());
  }
  return 0;
}

int cmd_estimate(const Config& cfg, bool kde, bool save_samples, bool strict_square) {
  ensure_output_dir(cfg);
  if (cfg.method == "mc") guard_mc_sigma(cfg, /*force=*/false, /*refuse=*/false);

  const uqpdf_series_kind kind = parse_series(cfg.series);
  const int min_order = kind == UQPDF_SERIES_GC ? 3 : 1;
  const int max_order = kind == UQPDF_SERIES_GC ? 6 : 4;
  if (cfg.order != "auto") {
    const int fixed = std::atoi(cfg.order.c_str());
    if (fixed < min_order || fixed > max_order) {
      die_config("order '" + cfg.order + "' outside [" + std::to_string(min_order) +
                 ", " + std::to_string(max_order) + "] for series " + cfg.series);
    }
  }

  MeshHandle mesh = make_mesh(cfg);
  KlHandle kl = make_kl(cfg, mesh.get());
  PipelineResult result =
      run_pipeline(cfg, mesh.get(), kl.get(), strict_square, /*want_crude=*/true);

  std::vector<double> std_m(6), std_kappa(6);
  check(uqpdf_standardize_moments(result.moments.data(), 6, std_m.data()));
  check(uqpdf_moments_to_cumulants(std_m.data(), 6, std_kappa.data()));

  std::vector<int> orders;
  std::vector<double> grid;
  double mean = result.moments[0];
  double stddev =
      std::sqrt(result.moments[1] - result.moments[0] * result.moments[0]);

  if (cfg.order == "auto") {
    ReportHandle report;
    check(uqpdf_select_order(result.moments.data(), 6, kind, result.crude.get(),
                             cfg.tol, max_order, cfg.bins, cfg.grid_points,
                             report.out()));
    const int chosen = uqpdf_report_chosen_order(report.get());
    const bool divergent = uqpdf_report_branch(report.get()) == 1;
    if (uqpdf_report_low_sample_warning(report.get())) {
      std::fprintf(stderr, "warning: fewer than 100 crude samples\n");
    }
    std::printf("selection (%s, tol=%s): branch=%s chosen_order=%d\n",
                cfg.series.c_str(), g6(cfg.tol).c_str(),
                divergent ? "divergent" : "convergent", chosen);
    std::printf("order  successive_l2  histogram_distance\n");
    for (int i = 0; i < uqpdf_report_order_count(report.get()); ++i) {
      int order = 0;
      double diff = 0.0, dist = 0.0;
      check(uqpdf_report_row(report.get(), i, &order, &diff, &dist));
      std::printf("%-6d %-14s %s%s\n", order, g6(diff).c_str(), g6(dist).c_str(),
                  order == chosen ? "  <- chosen" : "");
      orders.push_back(order);
    }
    const std::string report_path = cfg.output_dir + "/selection.csv";
    check(uqpdf_report_save(report.get(), kind, cfg.tol, report_path.c_str()));
    std::printf("wrote %s\n", report_path.c_str());

    grid.resize(static_cast<size_t>(uqpdf_report_grid_size(report.get())));
    check(uqpdf_report_grid(report.get(), grid.data(), grid.size()));
    check(uqpdf_report_standardization(report.get(), &mean, &stddev));
  } else {
    orders.push_back(std::atoi(cfg.order.c_str()));
  }

  // Standardized crude samples fix the evaluation range and the histogram.
  SampleHandle standardized;
  check(uqpdf_sample_standardize(result.crude.get(), mean, stddev,
                                 standardized.out()));
  HistogramHandle histogram;
  check(uqpdf_histogram_create(standardized.get(), cfg.bins, histogram.out()));
  const int bins = uqpdf_histogram_bins(histogram.get());
  std::vector<double> edges(static_cast<size_t>(bins) + 1);
  std::vector<double> densities(static_cast<size_t>(bins));
  check(uqpdf_histogram_data(histogram.get(), edges.data(), densities.data()));

  if (grid.empty()) {
    grid.resize(static_cast<size_t>(cfg.grid_points));
    for (int i = 0; i < cfg.grid_points; ++i) {
      grid[static_cast<size_t>(i)] =
          edges.front() + (edges.back() - edges.front()) * i / (cfg.grid_points - 1);
    }
  }

  const std::string meta = parameter_line(cfg) + " method=" + cfg.method +
                           " mean=" + g6(mean) + " stddev=" + g6(stddev);

  std::vector<double> values(grid.size());
  for (const int order : orders) {
    SeriesHandle series;
    check(uqpdf_series_create(kind, std_kappa.data(), 6, order, series.out()));
    check(uqpdf_series_eval_batch(series.get(), grid.data(), values.data(),
                                  grid.size()));
    const std::string path =
        cfg.output_dir + "/series_" + cfg.series + std::to_string(order) + ".csv";
    auto out = open_output(path);
    out << "# " << uqpdf_version() << " curve v1\n";
    out << "# " << meta << " kind=" << cfg.series << " order=" << order << "\n";
    out << "x,f\n";
    for (size_t i = 0; i < grid.size(); ++i) {
      out << g6(grid[i]) << ',' << g6(values[i]) << '\n';
    }
    std::printf("wrote %s\n", path.c_str());
  }

  {
    const std::string path = cfg.output_dir + "/histogram.csv";
    auto out = open_output(path);
    out << "# " << uqpdf_version() << " histogram v1\n";
    out << "# " << meta << " bins=" << bins << " bin_width=" << g6(edges[1] - edges[0])
        << "\n";
    out << "center,density\n";
    for (int b = 0; b < bins; ++b) {
      out << g6(0.5 * (edges[static_cast<size_t>(b)] + edges[static_cast<size_t>(b) + 1]))
          << ',' << g6(densities[static_cast<size_t>(b)]) << '\n';
    }
    std::printf("wrote %s\n", path.c_str());
  }

  if (kde) {
    const double bandwidth = cfg.bandwidth > 0.0 ? cfg.bandwidth : edges[1] - edges[0];
    check(uqpdf_kde_eval_batch(standardized.get(), bandwidth, grid.data(),
                               values.data(), grid.size()));
    const std::string path = cfg.output_dir + "/kde.csv";
    auto out = open_output(path);
    out << "# " << uqpdf_version() << " curve v1\n";
    out << "# " << meta << " bandwidth=" << g6(bandwidth) << "\n";
    out << "x,f\n";
    for (size_t i = 0; i < grid.size(); ++i) {
      out << g6(grid[i]) << ',' << g6(values[i]) << '\n';
    }
    std::printf("wrote %s\n", path.c_str());
  }

  if (save_samples) {
    const std::string path = cfg.output_dir + "/samples_crude.csv";
    check(uqpdf_sample_save(result.crude.get(), path.c_str()));
    std::printf("wrote %s\n", path.c_str());
  }
  return 0;
}

int cmd_compare(Config cfg, bool force) {
  ensure_output_dir(cfg);
  guard_mc_sigma(cfg, force, /*refuse=*/true);
  if (cfg.qoi_kind == "max") {
    die_config("qoi_kind=max has no sg counterpart to compare against");
  }

  MeshHandle mesh = make_mesh(cfg);
  KlHandle kl = make_kl(cfg, mesh.get());

  cfg.method = "sg";
  PipelineResult sg = run_pipeline(cfg, mesh.get(), kl.get(), false, false);
  cfg.method = "mc";
  PipelineResult mc = run_pipeline(cfg, mesh.get(), kl.get(), false, false);

  const std::string path = cfg.output_dir + "/compare.csv";
  auto out = open_output(path);
  out << "# " << uqpdf_version() << " compare v1\n";
  out << "# " << parameter_line(cfg) << " M=" << cfg.M << "\n";
  out << "l,sg,mc,mc_se,diff_over_se\n";
  bool all_within = true;
  for (int l = 0; l < 6; ++l) {
    const double diff = std::abs(sg.moments[l] - mc.moments[l]);
    const double ratio = mc.std_error[l] > 0 ? diff / mc.std_error[l]
                                             : (diff > 0 ? HUGE_VAL : 0.0);
    if (ratio > 3.0) all_within = false;
    out << (l + 1) << ',' << g6(sg.moments[l]) << ',' << g6(mc.moments[l]) << ','
        << g6(mc.std_error[l]) << ',' << g6(ratio) << '\n';
    std::printf("m%d: sg=%s mc=%s se=%s diff/se=%s\n", l + 1, g6(sg.moments[l]).c_str(),
                g6(mc.moments[l]).c_str(), g6(mc.std_error[l]).c_str(),
                g6(ratio).c_str());
  }
  std::printf("%s within 3 standard errors\n", all_within ? "all moments" : "NOT ALL");
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"density estimation for scalar outputs of an elliptic problem with "
               "a log-normal random coefficient"};
  app.set_version_flag("--version", uqpdf_version());
  app.set_config("--config", "", "flat key=value configuration file");
  app.require_subcommand(1);

  Config cfg;
  app.add_option("--refinement_level", cfg.refinement_level)->capture_default_str();
  app.add_option("--sigma_gamma", cfg.sigma_gamma)->capture_default_str();
  app.add_option("--L", cfg.L, "correlation length")->capture_default_str();
  app.add_option("--N", cfg.N, "stochastic dimension")->capture_default_str();
  app.add_option("--a_min", cfg.a_min)->capture_default_str();
  app.add_option("--mu_gamma", cfg.mu_gamma)->capture_default_str();
  app.add_option("--p", cfg.p, "solution polynomial degree")->capture_default_str();
  app.add_option("--q", cfg.q, "coefficient projection degree")->capture_default_str();
  app.add_option("--qoi_kind", cfg.qoi_kind, "average | integral_square | max")
      ->capture_default_str();
  app.add_option("--method", cfg.method, "sg | mc")->capture_default_str();
  app.add_option("--M", cfg.M, "sampling-solver sample count")->capture_default_str();
  app.add_option("--M_crude", cfg.M_crude, "crude-histogram sample count")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed)->capture_default_str();
  app.add_option("--bins", cfg.bins)->capture_default_str();
  app.add_option("--bandwidth", cfg.bandwidth, "0 selects the histogram bin width")
      ->capture_default_str();
  app.add_option("--series", cfg.series, "gc | ed")->capture_default_str();
  app.add_option("--order", cfg.order, "auto or a fixed truncation order")
      ->capture_default_str();
  app.add_option("--tol", cfg.tol, "convergent-branch tolerance")->capture_default_str();
  app.add_option("--output_dir", cfg.output_dir)->capture_default_str();
  app.add_option("--threads", cfg.threads, "0 uses all hardware threads")
      ->capture_default_str();
  app.add_option("--projection_points", cfg.projection_points)->capture_default_str();
  app.add_option("--grid_points", cfg.grid_points)->capture_default_str();

  auto* kl_cmd = app.add_subcommand("kl", "compute (or load) the eigenpair cache");
  std::string cache_path;
  kl_cmd->add_option("--cache", cache_path, "cache file path");

  auto* moments_cmd =
      app.add_subcommand("moments", "moment and cumulant table for one setting");
  bool force = false;
  bool strict_square = false;
  std::string samples_path;
  moments_cmd->add_flag("--force", force, "allow mc above sigma_gamma = 0.1");
  moments_cmd->add_flag("--strict-square", strict_square,
                        "project the squared solution instead of the diagonal form");
  moments_cmd->add_option("--save-samples", samples_path,
                          "also write the sample set to this path (mc only)");

  auto* estimate_cmd =
      app.add_subcommand("estimate", "series curves, histogram and order selection");
  bool kde = false;
  bool save_samples = false;
  bool estimate_strict = false;
  estimate_cmd->add_flag("--kde", kde, "also emit a kernel-density curve");
  estimate_cmd->add_flag("--save-samples", save_samples, "persist the crude samples");
  estimate_cmd->add_flag("--strict-square", estimate_strict,
                         "project the squared solution instead of the diagonal form");

  auto* compare_cmd =
      app.add_subcommand("compare", "cross-check mc moments against sg moments");
  bool compare_force = false;
  compare_cmd->add_flag("--force", compare_force, "allow mc above sigma_gamma = 0.1");

  CLI11_PARSE(app, argc, argv);

  try {
    if (kl_cmd->parsed()) return cmd_kl(cfg, cache_path);
    if (moments_cmd->parsed()) return cmd_moments(cfg, force, strict_square, samples_path);
    if (estimate_cmd->parsed()) return cmd_estimate(cfg, kde, save_samples, estimate_strict);
    if (compare_cmd->parsed()) return cmd_compare(cfg, compare_force);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
