#include "uqpdf/fem.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <string>

#include "uqpdf/errors.hpp"

namespace uqpdf {

namespace {

// 1d quadratic Lagrange basis on [-1,1] with nodes {-1, 0, 1}.
inline double lag1d(int j, double x) {
  switch (j) {
    case 0: return 0.5 * x * (x - 1.0);
    case 1: return 1.0 - x * x;
    default: return 0.5 * x * (x + 1.0);
  }
}

inline double dlag1d(int j, double x) {
  switch (j) {
    case 0: return x - 0.5;
    case 1: return -2.0 * x;
    default: return x + 0.5;
  }
}

Q2Reference make_reference() {
  Q2Reference ref;
  const double g[3] = {-std::sqrt(3.0 / 5.0), 0.0, std::sqrt(3.0 / 5.0)};
  const double w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

  for (int qy = 0; qy < 3; ++qy) {
    for (int qx = 0; qx < 3; ++qx) {
      const int qp = 3 * qy + qx;
      ref.qp(qp, 0) = g[qx];
      ref.qp(qp, 1) = g[qy];
      ref.weight(qp) = w[qx] * w[qy];
      for (int jy = 0; jy < 3; ++jy) {
        for (int jx = 0; jx < 3; ++jx) {
          const int node = 3 * jy + jx;
          ref.phi(qp, node) = lag1d(jx, g[qx]) * lag1d(jy, g[qy]);
          ref.dphi_dxi(qp, node) = dlag1d(jx, g[qx]) * lag1d(jy, g[qy]);
          ref.dphi_deta(qp, node) = lag1d(jx, g[qx]) * dlag1d(jy, g[qy]);
        }
      }
    }
  }

  ref.ref_mass.setZero();
  for (int qp = 0; qp < Q2Reference::n_qp; ++qp) {
    ref.ref_mass += ref.weight(qp) * (ref.phi.row(qp).transpose() * ref.phi.row(qp));
    // On an axis-aligned square the Jacobian factors cancel in the stiffness
    // kernel (det J * J^-T J^-1 = identity scaling), so the kernel is h-free.
    ref.stiff_kernel[qp] =
        ref.weight(qp) * (ref.dphi_dxi.row(qp).transpose() * ref.dphi_dxi.row(qp) +
                          ref.dphi_deta.row(qp).transpose() * ref.dphi_deta.row(qp));
  }
  return ref;
}

}  // namespace

const Q2Reference& Q2Reference::instance() {
  static const Q2Reference ref = make_reference();
  return ref;
}

std::vector<Eigen::Vector2d> element_quadrature_points(const StructuredQuadMesh& mesh) {
  const Q2Reference& ref = Q2Reference::instance();
  const double h = mesh.spacing();
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<size_t>(mesh.element_count()) * Q2Reference::n_qp);
  for (int ey = 0; ey < mesh.cells_per_side; ++ey) {
    for (int ex = 0; ex < mesh.cells_per_side; ++ex) {
      const double x0 = ex * h;
      const double y0 = ey * h;
      for (int qp = 0; qp < Q2Reference::n_qp; ++qp) {
        pts.emplace_back(x0 + 0.5 * h * (ref.qp(qp, 0) + 1.0),
                         y0 + 0.5 * h * (ref.qp(qp, 1) + 1.0));
      }
    }
  }
  return pts;
}

SpMat assemble_mass(const StructuredQuadMesh& mesh) {
  const Q2Reference& ref = Q2Reference::instance();
  const double h = mesh.spacing();
  const double jac = h * h / 4.0;
  const Matrix9d m_el = jac * ref.ref_mass;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(mesh.element_count()) * 81);
  for (const auto& conn : mesh.elements) {
    for (int i = 0; i < 9; ++i) {
      for (int j = 0; j < 9; ++j) {
        triplets.emplace_back(conn[i], conn[j], m_el(i, j));
      }
    }
  }
  SpMat m(mesh.node_count(), mesh.node_count());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

SpMat assemble_stiffness_qp(const StructuredQuadMesh& mesh,
                            const std::vector<double>& coeff_at_qp,
                            bool require_positive) {
  const Q2Reference& ref = Q2Reference::instance();
  const size_t expected = static_cast<size_t>(mesh.element_count()) * Q2Reference::n_qp;
  if (coeff_at_qp.size() != expected) {
    throw DimensionError("coefficient values per quadrature point: got " +
                         std::to_string(coeff_at_qp.size()) + ", expected " +
                         std::to_string(expected));
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(expected * 9);
  Matrix9d k_el;
  for (int e = 0; e < mesh.element_count(); ++e) {
    k_el.setZero();
    for (int qp = 0; qp < Q2Reference::n_qp; ++qp) {
      const double a = coeff_at_qp[static_cast<size_t>(e) * Q2Reference::n_qp + qp];
      if (require_positive && !(a > 0.0)) {
        throw CoercivityError("coefficient is " + std::to_string(a) +
                              " at a quadrature point of element " + std::to_string(e) +
                              "; the problem requires a strictly positive coefficient");
      }
      k_el += a * ref.stiff_kernel[qp];
    }
    const auto& conn = mesh.elements[e];
    for (int i = 0; i < 9; ++i) {
      for (int j = 0; j < 9; ++j) {
        triplets.emplace_back(conn[i], conn[j], k_el(i, j));
      }
    }
  }
  SpMat k(mesh.node_count(), mesh.node_count());
  k.setFromTriplets(triplets.begin(), triplets.end());
  return k;
}

SpMat assemble_stiffness(const StructuredQuadMesh& mesh, const CoeffFn& coeff) {
  const auto pts = element_quadrature_points(mesh);
  std::vector<double> values(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) values[i] = coeff(pts[i]);
  return assemble_stiffness_qp(mesh, values, /*require_positive=*/true);
}

Eigen::VectorXd assemble_load(const StructuredQuadMesh& mesh, double f) {
  const Q2Reference& ref = Q2Reference::instance();
  const double h = mesh.spacing();
  const double jac = h * h / 4.0;

  Eigen::Matrix<double, 9, 1> f_el = Eigen::Matrix<double, 9, 1>::Zero();
  for (int qp = 0; qp < Q2Reference::n_qp; ++qp) {
    f_el += jac * f * ref.weight(qp) * ref.phi.row(qp).transpose();
  }

  Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.node_count());
  for (const auto& conn : mesh.elements) {
    for (int i = 0; i < 9; ++i) load(conn[i]) += f_el(i);
  }
  return load;
}

DirichletMap::DirichletMap(const StructuredQuadMesh& mesh)
    : full_to_interior(mesh.node_count(), -1) {
  interior.reserve(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i) {
    if (!mesh.is_boundary[i]) {
      full_to_interior[i] = static_cast<int>(interior.size());
      interior.push_back(i);
    }
  }
}

SpMat DirichletMap::restrict_matrix(const SpMat& a) const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(a.nonZeros());
  for (int col = 0; col < a.outerSize(); ++col) {
    const int jc = full_to_interior[col];
    if (jc < 0) continue;
    for (SpMat::InnerIterator it(a, col); it; ++it) {
      const int ir = full_to_interior[static_cast<int>(it.row())];
      if (ir < 0) continue;
      triplets.emplace_back(ir, jc, it.value());
    }
  }
  SpMat r(interior_count(), interior_count());
  r.setFromTriplets(triplets.begin(), triplets.end());
  return r;
}

Eigen::VectorXd DirichletMap::restrict_vector(const Eigen::VectorXd& v) const {
  Eigen::VectorXd r(interior_count());
  for (int i = 0; i < interior_count(); ++i) r(i) = v(interior[i]);
  return r;
}

Eigen::VectorXd DirichletMap::prolong(const Eigen::VectorXd& v_interior,
                                      int full_size) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(full_size);
  for (int i = 0; i < interior_count(); ++i) full(interior[i]) = v_interior(i);
  return full;
}

Eigen::VectorXd solve_poisson(const StructuredQuadMesh& mesh, const CoeffFn& coeff,
                              double f) {
  const SpMat k = assemble_stiffness(mesh, coeff);
  const Eigen::VectorXd load = assemble_load(mesh, f);

  const DirichletMap dirichlet(mesh);
  const SpMat k_int = dirichlet.restrict_matrix(k);
  const Eigen::VectorXd f_int = dirichlet.restrict_vector(load);

  Eigen::SimplicialLLT<SpMat> llt(k_int);
  if (llt.info() != Eigen::Success) {
    throw NumericError("sparse factorization of the constrained system failed");
  }
  const Eigen::VectorXd u_int = llt.solve(f_int);

  const double f_norm = f_int.norm();
  const double residual = (k_int * u_int - f_int).norm() / (f_norm > 0 ? f_norm : 1.0);
  if (!(residual < 1e-10)) {
    throw NumericError("linear solve did not converge: relative residual " +
                       std::to_string(residual));
  }
  return dirichlet.prolong(u_int, mesh.node_count());
}

double interpolate(const StructuredQuadMesh& mesh, const Eigen::VectorXd& nodal,
                   const Eigen::Vector2d& x) {
  if (nodal.size() != mesh.node_count()) {
    throw DimensionError("nodal field length does not match the mesh");
  }
  const double h = mesh.spacing();
  const int n = mesh.cells_per_side;
  const int ex = std::clamp(static_cast<int>(x.x() / h), 0, n - 1);
  const int ey = std::clamp(static_cast<int>(x.y() / h), 0, n - 1);
  const double xi = 2.0 * (x.x() - ex * h) / h - 1.0;
  const double eta = 2.0 * (x.y() - ey * h) / h - 1.0;

  const auto& conn = mesh.elements[static_cast<size_t>(ey) * n + ex];
  double value = 0.0;
  for (int jy = 0; jy < 3; ++jy) {
    for (int jx = 0; jx < 3; ++jx) {
      value += nodal(conn[3 * jy + jx]) * lag1d(jx, xi) * lag1d(jy, eta);
    }
  }
  return value;
}

QoiKind qoi_kind_from_string(std::string_view name) {
  if (name == "average") return QoiKind::average;
  if (name == "integral_square") return QoiKind::integral_square;
  if (name == "max") return QoiKind::max;
  throw ConfigError("unknown qoi kind '" + std::string(name) +
                    "' (expected average, integral_square or max)");
}

std::string to_string(QoiKind kind) {
  switch (kind) {
    case QoiKind::average: return "average";
    case QoiKind::integral_square: return "integral_square";
    default: return "max";
  }
}

QoiEvaluator::QoiEvaluator(const StructuredQuadMesh& mesh)
    : n_(mesh.node_count()), mass_(assemble_mass(mesh)) {
  mass_row_sum_ = mass_ * Eigen::VectorXd::Ones(n_);
}

void QoiEvaluator::check(const Eigen::VectorXd& u) const {
  if (u.size() != n_) {
    throw DimensionError("nodal field of length " + std::to_string(u.size()) +
                         " does not match mesh with " + std::to_string(n_) + " nodes");
  }
}

double QoiEvaluator::average(const Eigen::VectorXd& u) const {
  check(u);
  return mass_row_sum_.dot(u);  // |D| = 1
}

double QoiEvaluator::integral_square(const Eigen::VectorXd& u) const {
  check(u);
  return u.dot(mass_ * u);
}

double QoiEvaluator::max(const Eigen::VectorXd& u) const {
  check(u);
  return u.maxCoeff();
}

double QoiEvaluator::operator()(QoiKind kind, const Eigen::VectorXd& u) const {
  switch (kind) {
    case QoiKind::average: return average(u);
    case QoiKind::integral_square: return integral_square(u);
    default: return max(u);
  }
}

double qoi_average(const Eigen::VectorXd& u, const StructuredQuadMesh& mesh) {
  return QoiEvaluator(mesh).average(u);
}

double qoi_integral_square(const Eigen::VectorXd& u, const StructuredQuadMesh& mesh) {
  return QoiEvaluator(mesh).integral_square(u);
}

double qoi_max(const Eigen::VectorXd& u, const StructuredQuadMesh& mesh) {
  return QoiEvaluator(mesh).max(u);
}

}  // namespace uqpdf
