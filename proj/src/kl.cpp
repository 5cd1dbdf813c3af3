#include "uqpdf/kl.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>
#include <vector>

#include "uqpdf/errors.hpp"

namespace uqpdf {

void validate(const CovarianceSpec& spec) {
  if (!(spec.sigma_gamma > 0.0)) {
    throw ConfigError("sigma_gamma must be positive, got " +
                      std::to_string(spec.sigma_gamma));
  }
  const double diameter = std::sqrt(2.0);
  if (!(spec.corr_length > 0.0)) {
    throw ConfigError("correlation length must be positive, got " +
                      std::to_string(spec.corr_length));
  }
  // Lengths beyond the domain diameter emulate the constant-kernel limit and
  // are accepted.
  (void)diameter;
}

double covariance(const Eigen::Vector2d& x, const Eigen::Vector2d& x_hat,
                  const CovarianceSpec& spec) {
  const double dist = std::abs(x.x() - x_hat.x()) + std::abs(x.y() - x_hat.y());
  return spec.sigma_gamma * spec.sigma_gamma * std::exp(-dist / spec.corr_length);
}

namespace {

// 1d quadratic Lagrange basis on [-1,1], nodes {-1, 0, 1}.
double lag1d(int j, double t) {
  switch (j) {
    case 0: return 0.5 * t * (t - 1.0);
    case 1: return 1.0 - t * t;
    default: return 0.5 * t * (t + 1.0);
  }
}

// 20-point Gauss-Legendre on [-1,1] via the recurrence matrix.
void gauss_legendre20(Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  constexpr int n = 20;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  nodes = solver.eigenvalues();
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    weights(i) = 2.0 * solver.eigenvectors()(0, i) * solver.eigenvectors()(0, i);
  }
}

// One-dimensional Galerkin covariance matrix for exp(-|s-t|/len) on a uniform
// grid of n quadratic intervals. Same-interval pair integrals are split at
// the s = t kink (Duffy map per triangle); separated pairs are smooth. By
// translation invariance only the interval distance matters.
Eigen::MatrixXd covariance_matrix_1d(int n, double len) {
  Eigen::VectorXd g, w;
  gauss_legendre20(g, w);
  const double h = 1.0 / n;

  std::vector<Eigen::Matrix3d> block(static_cast<size_t>(n), Eigen::Matrix3d::Zero());
  for (int d = 0; d < n; ++d) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    if (d == 0) {
      // twice the lower triangle t < s, with t = s q
      for (int i = 0; i < g.size(); ++i) {
        const double s = 0.5 * h * (g(i) + 1.0);
        for (int j = 0; j < g.size(); ++j) {
          const double q = 0.5 * (g(j) + 1.0);
          const double t = s * q;
          const double kernel = std::exp(-(s - t) / len);
          const double jac = 0.25 * h * w(i) * w(j) * s;
          for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
              m(a, b) += jac * kernel *
                         (lag1d(a, 2.0 * s / h - 1.0) * lag1d(b, 2.0 * t / h - 1.0) +
                          lag1d(a, 2.0 * t / h - 1.0) * lag1d(b, 2.0 * s / h - 1.0));
            }
          }
        }
      }
    } else {
      for (int i = 0; i < g.size(); ++i) {
        const double s = 0.5 * h * (g(i) + 1.0);
        for (int j = 0; j < g.size(); ++j) {
          const double t = d * h + 0.5 * h * (g(j) + 1.0);
          const double kernel = std::exp(-(t - s) / len);
          const double jac = 0.25 * h * h * w(i) * w(j);
          for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
              m(a, b) += jac * kernel * lag1d(a, 2.0 * s / h - 1.0) *
                         lag1d(b, 2.0 * (t - d * h) / h - 1.0);
            }
          }
        }
      }
    }
    block[static_cast<size_t>(d)] = m;
  }

  const int nodes = 2 * n + 1;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(nodes, nodes);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Eigen::Matrix3d& m = block[static_cast<size_t>(std::abs(j - i))];
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          c(2 * i + a, 2 * j + b) += (j >= i) ? m(a, b) : m(b, a);
        }
      }
    }
  }
  return c;
}

// Separable kernel on a tensor-product grid: C = sigma^2 (C1 (x) C1).
Eigen::MatrixXd assemble_covariance_tensor(const StructuredQuadMesh& mesh,
                                           const CovarianceSpec& spec) {
  const Eigen::MatrixXd c1 = covariance_matrix_1d(mesh.cells_per_side, spec.corr_length);
  const int nps = mesh.nodes_per_side;
  const double variance = spec.sigma_gamma * spec.sigma_gamma;
  Eigen::MatrixXd c(mesh.node_count(), mesh.node_count());
  for (int iy = 0; iy < nps; ++iy) {
    for (int ix = 0; ix < nps; ++ix) {
      for (int jy = 0; jy < nps; ++jy) {
        for (int jx = 0; jx < nps; ++jx) {
          c(iy * nps + ix, jy * nps + jx) = variance * c1(ix, jx) * c1(iy, jy);
        }
      }
    }
  }
  return c;
}

}  // namespace

Eigen::MatrixXd assemble_covariance_matrix(const StructuredQuadMesh& mesh,
                                           const CovarianceSpec& spec,
                                           CovarianceQuadrature quadrature) {
  validate(spec);
  if (quadrature == CovarianceQuadrature::tensor_kink_split) {
    return assemble_covariance_tensor(mesh, spec);
  }
  const Q2Reference& ref = Q2Reference::instance();
  const double h = mesh.spacing();
  const double jac = h * h / 4.0;
  const int n_el = mesh.element_count();
  const int n_qp = Q2Reference::n_qp;

  // Quadrature-weighted shape matrix, shared by all (congruent) elements:
  // the pair contribution is (W P)^T K (W P) with K the kernel values.
  Eigen::Matrix<double, 9, 9> wp = ref.phi;
  for (int qp = 0; qp < n_qp; ++qp) wp.row(qp) *= jac * ref.weight(qp);

  const auto qpoints = element_quadrature_points(mesh);
  const double variance = spec.sigma_gamma * spec.sigma_gamma;
  const double inv_len = 1.0 / spec.corr_length;

  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(mesh.node_count(), mesh.node_count());
  Eigen::Matrix<double, 9, 9> kernel, block;
  for (int e1 = 0; e1 < n_el; ++e1) {
    const Eigen::Vector2d* x1 = &qpoints[static_cast<size_t>(e1) * n_qp];
    for (int e2 = 0; e2 < n_el; ++e2) {
      const Eigen::Vector2d* x2 = &qpoints[static_cast<size_t>(e2) * n_qp];
      for (int g1 = 0; g1 < n_qp; ++g1) {
        for (int g2 = 0; g2 < n_qp; ++g2) {
          const double dist = std::abs(x1[g1].x() - x2[g2].x()) +
                              std::abs(x1[g1].y() - x2[g2].y());
          kernel(g1, g2) = variance * std::exp(-dist * inv_len);
        }
      }
      block.noalias() = wp.transpose() * kernel * wp;
      const auto& conn1 = mesh.elements[e1];
      const auto& conn2 = mesh.elements[e2];
      for (int i = 0; i < 9; ++i) {
        for (int j = 0; j < 9; ++j) {
          c(conn1[i], conn2[j]) += block(i, j);
        }
      }
    }
  }
  // Kill floating-point asymmetry from the accumulation order.
  c = 0.5 * (c + c.transpose()).eval();
  return c;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> solve_kl_eigenproblem(
    const Eigen::MatrixXd& c, const SpMat& m, int n_terms) {
  const int n = static_cast<int>(c.rows());
  if (n_terms < 1 || n_terms > n) {
    throw ConfigError("requested " + std::to_string(n_terms) +
                      " eigenpairs from a problem of size " + std::to_string(n));
  }

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      c, Eigen::MatrixXd(m), Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) {
    throw NumericError("generalized eigensolve failed");
  }

  // Eigen returns ascending eigenvalues with B-orthonormal vectors; take the
  // top block in descending order.
  Eigen::VectorXd values(n_terms);
  Eigen::MatrixXd vectors(n, n_terms);
  for (int k = 0; k < n_terms; ++k) {
    values(k) = solver.eigenvalues()(n - 1 - k);
    vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  if (!(values(n_terms - 1) > 0.0)) {
    throw NumericError("eigenvalue " + std::to_string(n_terms) + " is " +
                       std::to_string(values(n_terms - 1)) +
                       "; the covariance has lower numerical rank than requested");
  }

  for (int k = 0; k < n_terms; ++k) {
    // Exact L2 normalization plus a sign convention: the entry of largest
    // magnitude is positive.
    const double norm2 = vectors.col(k).dot(m * vectors.col(k));
    vectors.col(k) /= std::sqrt(norm2);
    Eigen::Index imax;
    vectors.col(k).cwiseAbs().maxCoeff(&imax);
    if (vectors(imax, k) < 0.0) vectors.col(k) = -vectors.col(k);
  }
  return {values, vectors};
}

double KLField::gamma(int node, const Eigen::VectorXd& eps) const {
  if (eps.size() != term_count()) {
    throw DimensionError("sample of dimension " + std::to_string(eps.size()) +
                         " fed to a field with " + std::to_string(term_count()) +
                         " terms");
  }
  double g = mu_gamma;
  for (int n = 0; n < term_count(); ++n) {
    g += std::sqrt(eigenvalues(n)) * eigenfunctions(node, n) * eps(n);
  }
  return g;
}

double KLField::coefficient(int node, const Eigen::VectorXd& eps) const {
  const double g = gamma(node, eps);
  if (g > 700.0) {
    throw NumericError("exp overflow: gamma = " + std::to_string(g) +
                       " at node " + std::to_string(node));
  }
  return a_min + std::exp(g);
}

KLField build_kl_field(const StructuredQuadMesh& mesh, const CovarianceSpec& spec,
                       int n_terms, double a_min, double mu_gamma) {
  if (a_min < 0.0) throw ConfigError("a_min must be nonnegative");
  const Eigen::MatrixXd c = assemble_covariance_matrix(mesh, spec);
  const SpMat m = assemble_mass(mesh);
  auto [values, vectors] = solve_kl_eigenproblem(c, m, n_terms);

  KLField field;
  field.a_min = a_min;
  field.mu_gamma = mu_gamma;
  field.sigma_gamma = spec.sigma_gamma;
  field.corr_length = spec.corr_length;
  field.refinement_level = mesh.refinement_level;
  field.eigenvalues = std::move(values);
  field.eigenfunctions = std::move(vectors);
  return field;
}

}  // namespace uqpdf
