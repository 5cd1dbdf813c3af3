#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

#include "uqpdf/cumulants.hpp"
#include "uqpdf/fem.hpp"
#include "uqpdf/hermite.hpp"
#include "uqpdf/kl.hpp"
#include "uqpdf/mc.hpp"
#include "uqpdf/mesh.hpp"

namespace uqpdf {

// Hermite expansion of the coefficient: one nodal field a_q per multi-index
// of total degree <= q.
struct CoefficientExpansion {
  MultiIndexSet index_set;
  Eigen::MatrixXd fields;  // J_h x |index_set|
};

enum class ProjectionMethod { quadrature, closed_form };

inline constexpr int kDefaultProjectionPoints = 20;

// a_q(x_j) = \int a(x_j, eps) He_q(eps) rho(eps) d eps. The quadrature method
// uses a tensor Gauss-Hermite rule (points_per_dim >= q + 2 required); the
// closed form uses the analytic Hermite coefficients of exp(sum c_n eps_n),
//   a_q(x) = exp(mu + 0.5 sum c_n^2) prod_n c_n^{q_n} / sqrt(q_n!),
// with a_min added to the zero index only.
CoefficientExpansion project_coefficient(const KLField& kl, int q,
                                         ProjectionMethod method = ProjectionMethod::quadrature,
                                         int points_per_dim = kDefaultProjectionPoints);

// Galerkin system coupling the physical blocks through the triple products
// <He_q He_p He_p'>, reduced to interior unknowns.
struct SgSystem {
  MultiIndexSet basis_set;   // J(p)
  MultiIndexSet coeff_set;   // J(q)
  std::vector<SpMat> coeff_blocks;  // interior stiffness of each a_q

  struct Coupling {
    int q, p1, p2;
    double g;
  };
  std::vector<Coupling> couplings;  // entries with g != 0

  Eigen::VectorXd rhs;  // stacked interior blocks; only the zero index loads
  int n_interior = 0;
  int n_blocks = 0;
  int node_count = 0;
  std::vector<int> interior;  // interior node ids

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
};

SgSystem assemble_sg_system(const StructuredQuadMesh& mesh,
                            const CoefficientExpansion& coeff,
                            const MultiIndexSet& basis_p, double f);

// Dense (p1,p2) block, mainly for diagnostics and tests.
Eigen::MatrixXd sg_dense_block(const SgSystem& system, int p1, int p2);

struct SgSolverOptions {
  enum class Method { automatic, direct, cg };
  Method method = Method::automatic;
  double cg_tol = 1e-12;
  int cg_max_iterations = 20000;
  int direct_size_limit = 100000;  // automatic: direct below, cg above
};

struct SGSolution {
  MultiIndexSet index_set;
  Eigen::MatrixXd fields;  // J_h x |J(p)|, boundary rows zero
  double relative_residual = 0.0;
  std::vector<double> residual_history;  // cg path only
  // False when the coupled operator turned out indefinite (the truncated
  // coefficient expansion can lose pointwise positivity at large input
  // variance); the system is then solved by a pivoted factorization and the
  // residual contract still holds.
  bool coercive = true;
};

SGSolution solve_sg(const SgSystem& system, const SgSolverOptions& options = {});

// Scalar QoI as a polynomial in the stochastic variable.
struct QoIPolynomial {
  MultiIndexSet index_set;
  Eigen::VectorXd beta;
  QoiKind qoi_kind = QoiKind::average;

  double evaluate(const Eigen::VectorXd& eps) const;
};

// beta_p = average of u_p for the spatial-average QoI, beta_p = u_p^T M u_p
// for the integral of the square (the diagonal form; see the projected
// variant below for the cross-term expansion). The pointwise maximum is not
// representable in this basis and raises UnsupportedError.
QoIPolynomial qoi_polynomial(const SGSolution& solution, QoiKind kind,
                             const StructuredQuadMesh& mesh);

// Galerkin projection of the squared solution onto the same basis,
// beta_r = sum_{p,p'} (u_p^T M u_p') <He_p He_p' He_r>, which keeps the
// cross terms the diagonal form drops.
QoIPolynomial qoi_polynomial_integral_square_projected(const SGSolution& solution,
                                                       const StructuredQuadMesh& mesh);

// Exact moments m_l = \int Q(eps)^l rho(eps) d eps for l = 1..l_max by a
// tensor Gauss-Hermite rule at the polynomial-exactness order
// ceil((l_max * p + 1)/2) per dimension.
MomentVector exact_moments(const QoIPolynomial& qoi, int l_max);

// Cheap realizations of the QoI polynomial (no PDE solves).
SampleSet sample_qoi_polynomial(const QoIPolynomial& qoi, int sample_count,
                                std::uint64_t seed);

}  // namespace uqpdf
