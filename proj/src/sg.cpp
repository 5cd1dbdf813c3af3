#include "uqpdf/sg.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "uqpdf/errors.hpp"
#include "uqpdf/rng.hpp"

namespace uqpdf {

CoefficientExpansion project_coefficient(const KLField& kl, int q,
                                         ProjectionMethod method, int points_per_dim) {
  if (q < 0) throw ConfigError("projection degree must be nonnegative");
  const int dim = kl.term_count();
  const int nodes = kl.node_count();

  CoefficientExpansion expansion;
  expansion.index_set = multi_index_set(dim, q);
  const int n_idx = expansion.index_set.size();
  expansion.fields.resize(nodes, n_idx);

  // sqrt(lambda_n) b_n(x_j) per node.
  Eigen::MatrixXd c = kl.eigenfunctions;
  for (int n = 0; n < dim; ++n) c.col(n) *= std::sqrt(kl.eigenvalues(n));

  if (method == ProjectionMethod::closed_form) {
    for (int j = 0; j < nodes; ++j) {
      const double base = std::exp(kl.mu_gamma + 0.5 * c.row(j).squaredNorm());
      for (int k = 0; k < n_idx; ++k) {
        const auto& idx = expansion.index_set[k];
        double value = base;
        for (int n = 0; n < dim; ++n) {
          value *= std::pow(c(j, n), idx[static_cast<size_t>(n)]) /
                   std::sqrt(factorial(idx[static_cast<size_t>(n)]));
        }
        expansion.fields(j, k) = value;
      }
      expansion.fields(j, 0) += kl.a_min;
    }
    return expansion;
  }

  if (points_per_dim < q + 2) {
    throw ConfigError("projection quadrature with " + std::to_string(points_per_dim) +
                      " points per dimension is below the required " +
                      std::to_string(q + 2) + " for degree " + std::to_string(q));
  }

  const QuadratureRule rule = tensor_rule(points_per_dim, dim);
  const int n_nodes = rule.node_count();

  // Orthonormal Hermite products at every rule node for every index.
  Eigen::MatrixXd hermite(n_nodes, n_idx);
  {
    std::vector<std::vector<double>> per_dim(static_cast<size_t>(dim));
    for (int i = 0; i < n_nodes; ++i) {
      for (int n = 0; n < dim; ++n) {
        hermite_orthonormal_all(q, rule.nodes(i, n), per_dim[static_cast<size_t>(n)]);
      }
      for (int k = 0; k < n_idx; ++k) {
        const auto& idx = expansion.index_set[k];
        double value = 1.0;
        for (int n = 0; n < dim; ++n) {
          value *= per_dim[static_cast<size_t>(n)][static_cast<size_t>(idx[static_cast<size_t>(n)])];
        }
        hermite(i, k) = value;
      }
    }
  }

  Eigen::VectorXd a_at_nodes(n_nodes);
  for (int j = 0; j < nodes; ++j) {
    for (int i = 0; i < n_nodes; ++i) {
      const double gamma = kl.mu_gamma + c.row(j).dot(rule.nodes.row(i));
      if (gamma > 700.0) {
        throw NumericError("exp overflow during coefficient projection at node " +
                           std::to_string(j));
      }
      a_at_nodes(i) = kl.a_min + std::exp(gamma);
    }
    expansion.fields.row(j) = (hermite.transpose() * rule.weights.cwiseProduct(a_at_nodes)).transpose();
  }
  return expansion;
}

Eigen::VectorXd SgSystem::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
  for (const auto& entry : couplings) {
    y.segment(static_cast<Eigen::Index>(entry.p1) * n_interior, n_interior).noalias() +=
        entry.g * (coeff_blocks[static_cast<size_t>(entry.q)] *
                   x.segment(static_cast<Eigen::Index>(entry.p2) * n_interior, n_interior));
  }
  return y;
}

SgSystem assemble_sg_system(const StructuredQuadMesh& mesh,
                            const CoefficientExpansion& coeff,
                            const MultiIndexSet& basis_p, double f) {
  if (coeff.fields.rows() != mesh.node_count()) {
    throw DimensionError("coefficient expansion on " +
                         std::to_string(coeff.fields.rows()) +
                         " nodes used with a mesh of " +
                         std::to_string(mesh.node_count()) + " nodes");
  }
  if (coeff.index_set.dim != basis_p.dim) {
    throw DimensionError("coefficient and basis index sets have different dimensions");
  }

  const Q2Reference& ref = Q2Reference::instance();
  const DirichletMap dirichlet(mesh);
  const int n_el = mesh.element_count();
  const int n_qp = Q2Reference::n_qp;

  SgSystem system;
  system.basis_set = basis_p;
  system.coeff_set = coeff.index_set;
  system.n_interior = dirichlet.interior_count();
  system.n_blocks = basis_p.size();
  system.node_count = mesh.node_count();
  system.interior = dirichlet.interior;

  // One stiffness block per coefficient index, nodal field interpolated at
  // the element quadrature points.
  system.coeff_blocks.reserve(static_cast<size_t>(coeff.index_set.size()));
  std::vector<double> at_qp(static_cast<size_t>(n_el) * n_qp);
  Eigen::Matrix<double, 9, 1> field_conn;
  for (int k = 0; k < coeff.index_set.size(); ++k) {
    for (int e = 0; e < n_el; ++e) {
      const auto& conn = mesh.elements[e];
      for (int i = 0; i < 9; ++i) field_conn(i) = coeff.fields(conn[i], k);
      const Eigen::Matrix<double, 9, 1> vals = ref.phi * field_conn;
      for (int qp = 0; qp < n_qp; ++qp) at_qp[static_cast<size_t>(e) * n_qp + qp] = vals(qp);
    }
    system.coeff_blocks.push_back(
        dirichlet.restrict_matrix(assemble_stiffness_qp(mesh, at_qp, false)));
  }

  // Stochastic couplings <He_q He_p1 He_p2> as products of 1d triple integrals.
  const TripleProductTable table = hermite_triple_products(
      coeff.index_set.max_degree, basis_p.max_degree, basis_p.max_degree);
  for (int q = 0; q < coeff.index_set.size(); ++q) {
    for (int p1 = 0; p1 < basis_p.size(); ++p1) {
      for (int p2 = 0; p2 < basis_p.size(); ++p2) {
        double g = 1.0;
        for (int n = 0; n < basis_p.dim; ++n) {
          g *= table(coeff.index_set[q][static_cast<size_t>(n)],
                     basis_p[p1][static_cast<size_t>(n)],
                     basis_p[p2][static_cast<size_t>(n)]);
        }
        if (g != 0.0) system.couplings.push_back({q, p1, p2, g});
      }
    }
  }

  // Only the mean test block is loaded: <He_p 1> = delta_p0.
  system.rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(system.n_interior) *
                                     system.n_blocks);
  system.rhs.head(system.n_interior) =
      dirichlet.restrict_vector(assemble_load(mesh, f));
  return system;
}

Eigen::MatrixXd sg_dense_block(const SgSystem& system, int p1, int p2) {
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(system.n_interior, system.n_interior);
  for (const auto& entry : system.couplings) {
    if (entry.p1 == p1 && entry.p2 == p2) {
      block += entry.g * Eigen::MatrixXd(system.coeff_blocks[static_cast<size_t>(entry.q)]);
    }
  }
  return block;
}

namespace {

SGSolution finish_solution(const SgSystem& system, const Eigen::VectorXd& x,
                           std::vector<double> history, bool coercive) {
  const double rhs_norm = system.rhs.norm() > 0 ? system.rhs.norm() : 1.0;
  const double residual = (system.apply(x) - system.rhs).norm() / rhs_norm;
  if (!(residual < 1e-8)) {
    throw NumericError("coupled solve ended with relative residual " +
                       std::to_string(residual));
  }

  SGSolution solution;
  solution.index_set = system.basis_set;
  solution.relative_residual = residual;
  solution.residual_history = std::move(history);
  solution.coercive = coercive;
  solution.fields = Eigen::MatrixXd::Zero(system.node_count, system.n_blocks);
  for (int p = 0; p < system.n_blocks; ++p) {
    const auto seg = x.segment(static_cast<Eigen::Index>(p) * system.n_interior,
                               system.n_interior);
    for (int i = 0; i < system.n_interior; ++i) {
      solution.fields(system.interior[static_cast<size_t>(i)], p) = seg(i);
    }
  }
  return solution;
}

std::pair<Eigen::VectorXd, bool> solve_direct(const SgSystem& system) {
  const Eigen::Index total = system.rhs.size();
  std::vector<Eigen::Triplet<double>> triplets;
  size_t nnz = 0;
  for (const auto& entry : system.couplings) {
    nnz += static_cast<size_t>(system.coeff_blocks[static_cast<size_t>(entry.q)].nonZeros());
  }
  triplets.reserve(nnz);
  for (const auto& entry : system.couplings) {
    const SpMat& block = system.coeff_blocks[static_cast<size_t>(entry.q)];
    const Eigen::Index row0 = static_cast<Eigen::Index>(entry.p1) * system.n_interior;
    const Eigen::Index col0 = static_cast<Eigen::Index>(entry.p2) * system.n_interior;
    for (int col = 0; col < block.outerSize(); ++col) {
      for (SpMat::InnerIterator it(block, col); it; ++it) {
        triplets.emplace_back(row0 + it.row(), col0 + col, entry.g * it.value());
      }
    }
  }
  SpMat big(total, total);
  big.setFromTriplets(triplets.begin(), triplets.end());

  {
    Eigen::SimplicialLDLT<SpMat> ldlt(big);
    if (ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 0.0) {
      return {ldlt.solve(system.rhs), true};
    }
  }
  // Indefinite: large input variance makes the truncated coefficient
  // expansion change sign, yet the Galerkin system stays nonsingular. Solve
  // with a pivoted factorization and let the residual check vouch for it.
  big.makeCompressed();
  Eigen::SparseLU<SpMat> lu(big);
  if (lu.info() != Eigen::Success) {
    throw CoercivityError("coupled operator is indefinite and its pivoted "
                          "factorization failed; the truncated coefficient "
                          "expansion has lost coercivity");
  }
  return {lu.solve(system.rhs), false};
}

Eigen::VectorXd solve_cg(const SgSystem& system, const SgSolverOptions& options,
                         std::vector<double>& history) {
  // Block-Jacobi preconditioner from the mean-coefficient block (its diagonal
  // coupling is exactly one by orthonormality).
  Eigen::SimplicialLLT<SpMat> mean_block(system.coeff_blocks[0]);
  if (mean_block.info() != Eigen::Success) {
    throw CoercivityError("mean-coefficient block is not positive definite");
  }
  const auto precondition = [&](const Eigen::VectorXd& r) {
    Eigen::VectorXd z(r.size());
    for (int p = 0; p < system.n_blocks; ++p) {
      z.segment(static_cast<Eigen::Index>(p) * system.n_interior, system.n_interior) =
          mean_block.solve(
              r.segment(static_cast<Eigen::Index>(p) * system.n_interior,
                        system.n_interior));
    }
    return z;
  };

  const double rhs_norm = system.rhs.norm() > 0 ? system.rhs.norm() : 1.0;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(system.rhs.size());
  Eigen::VectorXd r = system.rhs;
  Eigen::VectorXd z = precondition(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  history.clear();
  history.push_back(r.norm() / rhs_norm);

  for (int it = 0; it < options.cg_max_iterations; ++it) {
    const Eigen::VectorXd ap = system.apply(p);
    const double pap = p.dot(ap);
    if (pap <= 0.0) {
      throw CoercivityError("conjugate gradients met a nonpositive curvature "
                            "direction; the coupled operator is indefinite");
    }
    const double alpha = rz / pap;
    x += alpha * p;
    r -= alpha * ap;
    const double rel = r.norm() / rhs_norm;
    history.push_back(rel);
    if (rel < options.cg_tol) break;
    z = precondition(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  return x;
}

}  // namespace

SGSolution solve_sg(const SgSystem& system, const SgSolverOptions& options) {
  using Method = SgSolverOptions::Method;
  Method method = options.method;
  if (method == Method::automatic) {
    method = (system.rhs.size() <= options.direct_size_limit) ? Method::direct
                                                              : Method::cg;
  }
  if (method == Method::direct) {
    auto [x, coercive] = solve_direct(system);
    return finish_solution(system, x, {}, coercive);
  }
  std::vector<double> history;
  Eigen::VectorXd x = solve_cg(system, options, history);
  return finish_solution(system, x, std::move(history), true);
}

double QoIPolynomial::evaluate(const Eigen::VectorXd& eps) const {
  if (eps.size() != index_set.dim) {
    throw DimensionError("point of dimension " + std::to_string(eps.size()) +
                         " fed to a polynomial over " + std::to_string(index_set.dim) +
                         " variables");
  }
  std::vector<std::vector<double>> per_dim(static_cast<size_t>(index_set.dim));
  for (int n = 0; n < index_set.dim; ++n) {
    hermite_orthonormal_all(index_set.max_degree, eps(n), per_dim[static_cast<size_t>(n)]);
  }
  double value = 0.0;
  for (int k = 0; k < index_set.size(); ++k) {
    double term = beta(k);
    const auto& idx = index_set[k];
    for (int n = 0; n < index_set.dim; ++n) {
      term *= per_dim[static_cast<size_t>(n)][static_cast<size_t>(idx[static_cast<size_t>(n)])];
    }
    value += term;
  }
  return value;
}

QoIPolynomial qoi_polynomial(const SGSolution& solution, QoiKind kind,
                             const StructuredQuadMesh& mesh) {
  if (solution.fields.rows() != mesh.node_count()) {
    throw DimensionError("solution and mesh disagree on the node count");
  }
  if (kind == QoiKind::max) {
    throw UnsupportedError("the pointwise maximum is not a polynomial of the "
                           "stochastic variable; use the sampling solver for it");
  }

  QoIPolynomial qoi;
  qoi.index_set = solution.index_set;
  qoi.qoi_kind = kind;
  qoi.beta.resize(solution.index_set.size());

  const QoiEvaluator evaluator(mesh);
  for (int p = 0; p < solution.index_set.size(); ++p) {
    qoi.beta(p) = (kind == QoiKind::average)
                      ? evaluator.average(solution.fields.col(p))
                      : evaluator.integral_square(solution.fields.col(p));
  }
  return qoi;
}

QoIPolynomial qoi_polynomial_integral_square_projected(const SGSolution& solution,
                                                       const StructuredQuadMesh& mesh) {
  if (solution.fields.rows() != mesh.node_count()) {
    throw DimensionError("solution and mesh disagree on the node count");
  }
  const MultiIndexSet& set = solution.index_set;
  const int n = set.size();
  const QoiEvaluator evaluator(mesh);

  Eigen::MatrixXd gram(n, n);
  for (int p1 = 0; p1 < n; ++p1) {
    const Eigen::VectorXd mu = evaluator.mass() * solution.fields.col(p1);
    for (int p2 = 0; p2 <= p1; ++p2) {
      gram(p1, p2) = gram(p2, p1) = mu.dot(solution.fields.col(p2));
    }
  }

  const TripleProductTable table =
      hermite_triple_products(set.max_degree, set.max_degree, set.max_degree);

  QoIPolynomial qoi;
  qoi.index_set = set;
  qoi.qoi_kind = QoiKind::integral_square;
  qoi.beta = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < n; ++r) {
    double sum = 0.0;
    for (int p1 = 0; p1 < n; ++p1) {
      for (int p2 = 0; p2 < n; ++p2) {
        double g = 1.0;
        for (int d = 0; d < set.dim; ++d) {
          g *= table(set[p1][static_cast<size_t>(d)], set[p2][static_cast<size_t>(d)],
                     set[r][static_cast<size_t>(d)]);
        }
        sum += gram(p1, p2) * g;
      }
    }
    qoi.beta(r) = sum;
  }
  return qoi;
}

MomentVector exact_moments(const QoIPolynomial& qoi, int l_max) {
  if (l_max < 1 || l_max > kMaxMomentOrder) {
    throw ConfigError("moment order " + std::to_string(l_max) + " outside [1, " +
                      std::to_string(kMaxMomentOrder) + "]");
  }
  const int dim = qoi.index_set.dim;
  const int degree = qoi.index_set.max_degree;
  const int points = points_for_degree(l_max * degree);
  const QuadratureRule rule = tensor_rule(points, dim);

  MomentVector moments;
  moments.values.assign(static_cast<size_t>(l_max), 0.0);
  std::vector<std::vector<double>> per_dim(static_cast<size_t>(dim));
  for (int i = 0; i < rule.node_count(); ++i) {
    for (int n = 0; n < dim; ++n) {
      hermite_orthonormal_all(degree, rule.nodes(i, n), per_dim[static_cast<size_t>(n)]);
    }
    double value = 0.0;
    for (int k = 0; k < qoi.index_set.size(); ++k) {
      double term = qoi.beta(k);
      const auto& idx = qoi.index_set[k];
      for (int n = 0; n < dim; ++n) {
        term *= per_dim[static_cast<size_t>(n)][static_cast<size_t>(idx[static_cast<size_t>(n)])];
      }
      value += term;
    }
    double power = 1.0;
    for (int l = 0; l < l_max; ++l) {
      power *= value;
      moments.values[static_cast<size_t>(l)] += rule.weights(i) * power;
    }
  }
  return moments;
}

SampleSet sample_qoi_polynomial(const QoIPolynomial& qoi, int sample_count,
                                std::uint64_t seed) {
  if (sample_count < 1) throw ConfigError("sample count must be at least 1");
  const int dim = qoi.index_set.dim;
  const int degree = qoi.index_set.max_degree;

  SampleSet set;
  set.seed = seed;
  set.qoi_kind = qoi.qoi_kind;
  set.values.resize(static_cast<size_t>(sample_count));

  Eigen::VectorXd eps(dim);
  std::vector<std::vector<double>> per_dim(static_cast<size_t>(dim));
  for (int m = 0; m < sample_count; ++m) {
    rng::fill_gaussian(seed, m, eps);
    for (int n = 0; n < dim; ++n) {
      hermite_orthonormal_all(degree, eps(n), per_dim[static_cast<size_t>(n)]);
    }
    double value = 0.0;
    for (int k = 0; k < qoi.index_set.size(); ++k) {
      double term = qoi.beta(k);
      const auto& idx = qoi.index_set[k];
      for (int n = 0; n < dim; ++n) {
        term *= per_dim[static_cast<size_t>(n)][static_cast<size_t>(idx[static_cast<size_t>(n)])];
      }
      value += term;
    }
    set.values[static_cast<size_t>(m)] = value;
  }
  return set;
}

}  // namespace uqpdf
