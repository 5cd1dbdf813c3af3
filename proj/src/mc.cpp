#include "uqpdf/mc.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "uqpdf/errors.hpp"
#include "uqpdf/rng.hpp"

namespace uqpdf {

namespace {

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double value) {
    const double y = value - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

SampleSet run_mc(const StructuredQuadMesh& mesh, const KLField& kl, QoiKind kind,
                 const Eigen::MatrixXd& samples, const McOptions& options) {
  if (kl.node_count() != mesh.node_count()) {
    throw DimensionError("field discretized on " + std::to_string(kl.node_count()) +
                         " nodes used with a mesh of " +
                         std::to_string(mesh.node_count()) + " nodes");
  }
  if (samples.cols() != kl.term_count()) {
    throw DimensionError("samples of dimension " + std::to_string(samples.cols()) +
                         " fed to a field with " + std::to_string(kl.term_count()) +
                         " terms");
  }
  const int n_samples = static_cast<int>(samples.rows());
  if (n_samples < 1) throw ConfigError("Monte Carlo needs at least one sample");

  const Q2Reference& ref = Q2Reference::instance();
  const int n_el = mesh.element_count();
  const int n_qp = Q2Reference::n_qp;
  const int n_terms = kl.term_count();

  // sqrt(lambda_n) b_n interpolated at every element quadrature point.
  Eigen::MatrixXd c_qp(n_el * n_qp, n_terms);
  {
    Eigen::Matrix<double, 9, Eigen::Dynamic> b_conn(9, n_terms);
    for (int e = 0; e < n_el; ++e) {
      const auto& conn = mesh.elements[e];
      for (int i = 0; i < 9; ++i) b_conn.row(i) = kl.eigenfunctions.row(conn[i]);
      c_qp.middleRows(static_cast<Eigen::Index>(e) * n_qp, n_qp) = ref.phi * b_conn;
    }
    for (int n = 0; n < n_terms; ++n) c_qp.col(n) *= std::sqrt(kl.eigenvalues(n));
  }

  const DirichletMap dirichlet(mesh);
  const SpMat mass = assemble_mass(mesh);
  const SpMat mass_int = dirichlet.restrict_matrix(mass);
  const Eigen::VectorXd mass_row_sum_int =
      dirichlet.restrict_vector(mass * Eigen::VectorXd::Ones(mesh.node_count()));
  const Eigen::VectorXd f_int =
      dirichlet.restrict_vector(assemble_load(mesh, options.forcing));
  const double f_norm = f_int.norm() > 0 ? f_int.norm() : 1.0;

  // Sparsity pattern shared by all samples.
  SpMat k_pattern;
  {
    std::vector<double> ones(static_cast<size_t>(n_el) * n_qp, 1.0);
    k_pattern = dirichlet.restrict_matrix(assemble_stiffness_qp(mesh, ones, true));
    k_pattern.makeCompressed();
  }

  // Value-array slots of each element entry in the compressed pattern.
  std::vector<int> slots(static_cast<size_t>(n_el) * 81, -1);
  {
    const int* outer = k_pattern.outerIndexPtr();
    const int* inner = k_pattern.innerIndexPtr();
    for (int e = 0; e < n_el; ++e) {
      const auto& conn = mesh.elements[e];
      for (int i = 0; i < 9; ++i) {
        const int ir = dirichlet.full_to_interior[conn[i]];
        if (ir < 0) continue;
        for (int j = 0; j < 9; ++j) {
          const int jc = dirichlet.full_to_interior[conn[j]];
          if (jc < 0) continue;
          const int* begin = inner + outer[jc];
          const int* end = inner + outer[jc + 1];
          const int* hit = std::lower_bound(begin, end, ir);
          slots[static_cast<size_t>(e) * 81 + i * 9 + j] =
              static_cast<int>(outer[jc] + (hit - begin));
        }
      }
    }
  }

  std::vector<double> results(static_cast<size_t>(n_samples),
                              std::numeric_limits<double>::quiet_NaN());
  std::atomic<int> next{0};
  std::atomic<bool> cancel{false};
  std::mutex failure_mutex;
  std::vector<std::int64_t> failed;
  std::string first_failure;

  auto record_failure = [&](std::int64_t index, const std::string& what) {
    std::lock_guard<std::mutex> lock(failure_mutex);
    failed.push_back(index);
    if (first_failure.empty()) {
      first_failure = "sample " + std::to_string(index) + ": " + what;
    }
    if (options.fail_fast) cancel.store(true);
  };

  auto worker = [&]() {
    SpMat k_local = k_pattern;
    Eigen::SimplicialLLT<SpMat> llt;
    llt.analyzePattern(k_local);
    Eigen::VectorXd eps(n_terms);
    std::vector<double> a(static_cast<size_t>(n_el) * n_qp);
    Matrix9d k_el;

    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= n_samples || cancel.load()) break;
      eps = samples.row(idx);

      bool ok = true;
      for (Eigen::Index g = 0; g < c_qp.rows() && ok; ++g) {
        const double gamma = kl.mu_gamma + c_qp.row(g).dot(eps);
        if (gamma > 700.0) {
          record_failure(idx, "exp overflow in the coefficient (gamma = " +
                                  std::to_string(gamma) + ")");
          ok = false;
          break;
        }
        const double value = kl.a_min + std::exp(gamma);
        if (!(value > 0.0)) {
          record_failure(idx, "coefficient not positive at a quadrature point");
          ok = false;
          break;
        }
        a[static_cast<size_t>(g)] = value;
      }
      if (!ok) continue;

      double* values = k_local.valuePtr();
      std::fill(values, values + k_local.nonZeros(), 0.0);
      for (int e = 0; e < n_el; ++e) {
        k_el.setZero();
        const double* ae = &a[static_cast<size_t>(e) * n_qp];
        for (int qp = 0; qp < n_qp; ++qp) k_el += ae[qp] * ref.stiff_kernel[qp];
        const int* slot = &slots[static_cast<size_t>(e) * 81];
        for (int i = 0; i < 9; ++i) {
          for (int j = 0; j < 9; ++j) {
            const int s = slot[i * 9 + j];
            if (s >= 0) values[s] += k_el(i, j);
          }
        }
      }

      llt.factorize(k_local);
      if (llt.info() != Eigen::Success) {
        record_failure(idx, "factorization failed (indefinite or singular system)");
        continue;
      }
      const Eigen::VectorXd u_int = llt.solve(f_int);
      const double residual = (k_local * u_int - f_int).norm() / f_norm;
      if (!(residual < 1e-10)) {
        record_failure(idx, "relative residual " + std::to_string(residual));
        continue;
      }

      double qoi = 0.0;
      switch (kind) {
        case QoiKind::average:
          qoi = mass_row_sum_int.dot(u_int);
          break;
        case QoiKind::integral_square:
          qoi = u_int.dot(mass_int * u_int);
          break;
        case QoiKind::max:
          // Boundary values are exactly zero and take part in the nodal max.
          qoi = std::max(0.0, u_int.maxCoeff());
          break;
      }
      results[static_cast<size_t>(idx)] = qoi;
    }
  };

  const int n_threads = std::min(resolve_threads(options.threads), n_samples);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  if (!failed.empty() && options.fail_fast) {
    throw NumericError("Monte Carlo aborted: " + first_failure);
  }

  SampleSet set;
  set.seed = 0;
  set.qoi_kind = kind;
  set.sigma_gamma = kl.sigma_gamma;
  if (failed.empty()) {
    set.values = std::move(results);
  } else {
    std::sort(failed.begin(), failed.end());
    set.skipped = failed;
    set.values.reserve(results.size() - failed.size());
    for (int i = 0; i < n_samples; ++i) {
      if (std::isfinite(results[static_cast<size_t>(i)])) {
        set.values.push_back(results[static_cast<size_t>(i)]);
      }
    }
    if (set.values.empty()) {
      throw NumericError("Monte Carlo produced no valid samples: " + first_failure);
    }
  }
  return set;
}

MomentEstimate mc_moments(const SampleSet& set, int l_max) {
  if (set.values.empty()) throw ConfigError("moment estimation on an empty sample set");
  if (l_max < 1 || l_max > kMaxMomentOrder) {
    throw ConfigError("moment order " + std::to_string(l_max) + " outside [1, " +
                      std::to_string(kMaxMomentOrder) + "]");
  }
  const auto count = static_cast<double>(set.values.size());

  std::vector<KahanSum> sums(static_cast<size_t>(l_max));
  for (const double v : set.values) {
    double power = 1.0;
    for (int l = 0; l < l_max; ++l) {
      power *= v;
      sums[static_cast<size_t>(l)].add(power);
    }
  }

  MomentEstimate estimate;
  estimate.sample_count = set.count();
  estimate.moments.values.resize(static_cast<size_t>(l_max));
  for (int l = 0; l < l_max; ++l) {
    estimate.moments.values[static_cast<size_t>(l)] = sums[static_cast<size_t>(l)].sum / count;
  }

  // Standard error of each mean, second pass around the estimate.
  estimate.std_error.resize(static_cast<size_t>(l_max));
  std::vector<KahanSum> sq(static_cast<size_t>(l_max));
  for (const double v : set.values) {
    double power = 1.0;
    for (int l = 0; l < l_max; ++l) {
      power *= v;
      const double d = power - estimate.moments.values[static_cast<size_t>(l)];
      sq[static_cast<size_t>(l)].add(d * d);
    }
  }
  for (int l = 0; l < l_max; ++l) {
    estimate.std_error[static_cast<size_t>(l)] =
        std::sqrt(std::max(0.0, sq[static_cast<size_t>(l)].sum) / count / count);
  }
  return estimate;
}

}  // namespace uqpdf
