#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "uqpdf/mesh.hpp"

namespace uqpdf {

using SpMat = Eigen::SparseMatrix<double>;
using Matrix9d = Eigen::Matrix<double, 9, 9>;

// Reference bi-quadratic element tabulated at the 3x3 Gauss-Legendre rule.
struct Q2Reference {
  static constexpr int n_nodes = 9;
  static constexpr int n_qp = 9;

  Eigen::Matrix<double, n_qp, 2> qp;        // reference coordinates in [-1,1]^2
  Eigen::Matrix<double, n_qp, 1> weight;    // 2d Gauss weights
  Eigen::Matrix<double, n_qp, n_nodes> phi; // shape values at qp
  Eigen::Matrix<double, n_qp, n_nodes> dphi_dxi;
  Eigen::Matrix<double, n_qp, n_nodes> dphi_deta;
  Matrix9d ref_mass;                        // sum_qp w * phi phi^T
  std::array<Matrix9d, n_qp> stiff_kernel;  // w * (grad phi . grad phi^T), h-free

  static const Q2Reference& instance();
};

using CoeffFn = std::function<double(const Eigen::Vector2d&)>;

// Physical coordinates of every element quadrature point, element-major.
std::vector<Eigen::Vector2d> element_quadrature_points(const StructuredQuadMesh& mesh);

SpMat assemble_mass(const StructuredQuadMesh& mesh);

// Variable-coefficient stiffness. `coeff` is sampled at the 3x3 Gauss points of
// every element and must be strictly positive there.
SpMat assemble_stiffness(const StructuredQuadMesh& mesh, const CoeffFn& coeff);

// Low-level variant taking coefficient values already evaluated at the
// quadrature points (element-major, 9 per element). Positivity is enforced
// only when `require_positive` is set; the spectral-expansion blocks of the
// coupled solver legitimately change sign.
SpMat assemble_stiffness_qp(const StructuredQuadMesh& mesh,
                            const std::vector<double>& coeff_at_qp,
                            bool require_positive);

Eigen::VectorXd assemble_load(const StructuredQuadMesh& mesh, double f);

// Zero-Dirichlet bookkeeping: symmetric row/column elimination done by
// restricting to interior unknowns.
struct DirichletMap {
  explicit DirichletMap(const StructuredQuadMesh& mesh);

  std::vector<int> interior;          // interior node ids, ascending
  std::vector<int> full_to_interior;  // -1 for boundary nodes

  int interior_count() const { return static_cast<int>(interior.size()); }
  SpMat restrict_matrix(const SpMat& a) const;
  Eigen::VectorXd restrict_vector(const Eigen::VectorXd& v) const;
  Eigen::VectorXd prolong(const Eigen::VectorXd& v_interior, int full_size) const;
};

// Solves -div(a grad u) = f on the unit square with homogeneous Dirichlet
// conditions. The returned nodal field is exactly zero on the boundary and the
// constrained system is solved to a relative residual below 1e-10.
Eigen::VectorXd solve_poisson(const StructuredQuadMesh& mesh, const CoeffFn& coeff,
                              double f);

// Q2 interpolation of a nodal field at an arbitrary point of [0,1]^2.
double interpolate(const StructuredQuadMesh& mesh, const Eigen::VectorXd& nodal,
                   const Eigen::Vector2d& x);

enum class QoiKind { average, integral_square, max };

QoiKind qoi_kind_from_string(std::string_view name);
std::string to_string(QoiKind kind);

// Scalar functionals of one solution realization. The average is 1^T M u over
// the unit-measure domain, the integral of the square is u^T M u, and the
// maximum is taken over nodal values (the field is identified with its nodal
// interpolant, so element-interior extrema are not chased).
class QoiEvaluator {
public:
  explicit QoiEvaluator(const StructuredQuadMesh& mesh);

  double average(const Eigen::VectorXd& u) const;
  double integral_square(const Eigen::VectorXd& u) const;
  double max(const Eigen::VectorXd& u) const;
  double operator()(QoiKind kind, const Eigen::VectorXd& u) const;

  const SpMat& mass() const { return mass_; }
  const Eigen::VectorXd& mass_row_sum() const { return mass_row_sum_; }

private:
  void check(const Eigen::VectorXd& u) const;
  Eigen::Index n_ = 0;
  SpMat mass_;
  Eigen::VectorXd mass_row_sum_;  // M * 1
};

double qoi_average(const Eigen::VectorXd& u, const StructuredQuadMesh& mesh);
double qoi_integral_square(const Eigen::VectorXd& u, const StructuredQuadMesh& mesh);
double qoi_max(const Eigen::VectorXd& u, const StructuredQuadMesh& mesh);

}  // namespace uqpdf
