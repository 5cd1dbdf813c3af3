#include "uqpdf/hermite.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "uqpdf/errors.hpp"

namespace uqpdf {

namespace {

void check_degree(int n) {
  if (n < 0 || n > kMaxHermiteDegree) {
    throw ConfigError("Hermite degree " + std::to_string(n) + " outside [0, " +
                      std::to_string(kMaxHermiteDegree) + "]");
  }
}

}  // namespace

double hermite_he(int n, double x) {
  check_degree(n);
  if (n == 0) return 1.0;
  double prev = 1.0;  // He_0
  double cur = x;     // He_1
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

double hermite_orthonormal(int n, double x) {
  return hermite_he(n, x) / std::sqrt(factorial(n));
}

void hermite_orthonormal_all(int n, double x, std::vector<double>& out) {
  check_degree(n);
  out.resize(static_cast<size_t>(n) + 1);
  out[0] = 1.0;
  if (n == 0) return;
  // Orthonormal recurrence: H~_{k+1} = (x H~_k - sqrt(k) H~_{k-1}) / sqrt(k+1).
  out[1] = x;
  for (int k = 1; k < n; ++k) {
    out[k + 1] = (x * out[k] - std::sqrt(static_cast<double>(k)) * out[k - 1]) /
                 std::sqrt(static_cast<double>(k + 1));
  }
}

QuadratureRule1d gauss_hermite(int n) {
  if (n < 1 || n > kMaxHermiteDegree) {
    throw ConfigError("Gauss-Hermite point count " + std::to_string(n) +
                      " outside [1, " + std::to_string(kMaxHermiteDegree) + "]");
  }
  QuadratureRule1d rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes(0) = 0.0;
    rule.weights(0) = 1.0;
    return rule;
  }

  // Nodes are the eigenvalues of the symmetric tridiagonal recurrence matrix
  // with off-diagonal sqrt(k) (Golub-Welsch for the monic He family).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = std::sqrt(static_cast<double>(k));
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi,
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("Hermite node computation failed for n = " + std::to_string(n));
  }
  rule.nodes = solver.eigenvalues();  // ascending

  // Pair off mirrored roots to make the symmetry about the origin exact.
  for (int i = 0; i < n / 2; ++i) {
    const double r = 0.5 * (rule.nodes(n - 1 - i) - rule.nodes(i));
    rule.nodes(i) = -r;
    rule.nodes(n - 1 - i) = r;
  }
  if (n % 2 == 1) rule.nodes(n / 2) = 0.0;

  // w_i = (n-1)! / (n He_{n-1}(x_i)^2), evaluated through the orthonormal
  // values to keep the ratio well scaled.
  std::vector<double> values;
  for (int i = 0; i < n; ++i) {
    hermite_orthonormal_all(n - 1, rule.nodes(i), values);
    const double hn1 = values[static_cast<size_t>(n) - 1];
    rule.weights(i) = 1.0 / (n * hn1 * hn1);
  }
  return rule;
}

QuadratureRule tensor_rule(int points_per_dim, int dim) {
  if (points_per_dim < 1) throw ConfigError("tensor rule needs at least one point");
  if (dim < 1) throw ConfigError("tensor rule needs at least one dimension");

  double total = 1.0;
  for (int d = 0; d < dim; ++d) total *= points_per_dim;
  if (total > static_cast<double>(kMaxTensorNodes)) {
    throw ConfigError("tensor rule with " + std::to_string(points_per_dim) + "^" +
                      std::to_string(dim) + " nodes exceeds the memory guard");
  }

  const QuadratureRule1d rule1d = gauss_hermite(points_per_dim);
  const long n_nodes = static_cast<long>(total);

  QuadratureRule rule;
  rule.dim = dim;
  rule.nodes.resize(n_nodes, dim);
  rule.weights.resize(n_nodes);

  std::vector<int> counter(dim, 0);
  for (long i = 0; i < n_nodes; ++i) {
    double w = 1.0;
    for (int d = 0; d < dim; ++d) {
      rule.nodes(i, d) = rule1d.nodes(counter[d]);
      w *= rule1d.weights(counter[d]);
    }
    rule.weights(i) = w;
    for (int d = 0; d < dim; ++d) {
      if (++counter[d] < points_per_dim) break;
      counter[d] = 0;
    }
  }
  return rule;
}

int points_for_degree(int degree) {
  return degree / 2 + 1;  // ceil((degree + 1) / 2)
}

namespace {

void emit_indices(int dim, int pos, int remaining, std::vector<int>& current,
                  std::vector<std::vector<int>>& out) {
  if (pos == dim - 1) {
    current[pos] = remaining;
    out.push_back(current);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    current[pos] = k;
    emit_indices(dim, pos + 1, remaining - k, current, out);
  }
}

}  // namespace

MultiIndexSet multi_index_set(int dim, int max_degree) {
  if (dim < 1) throw ConfigError("multi-index set needs dimension >= 1");
  if (max_degree < 0) throw ConfigError("multi-index set needs degree >= 0");

  MultiIndexSet set;
  set.dim = dim;
  set.max_degree = max_degree;
  std::vector<int> current(dim, 0);
  for (int degree = 0; degree <= max_degree; ++degree) {
    emit_indices(dim, 0, degree, current, set.indices);
  }
  return set;
}

double eval_multivariate(const std::vector<int>& index, const Eigen::VectorXd& eps) {
  if (static_cast<int>(index.size()) != eps.size()) {
    throw DimensionError("multi-index of dimension " + std::to_string(index.size()) +
                         " applied to a point of dimension " + std::to_string(eps.size()));
  }
  double value = 1.0;
  for (size_t n = 0; n < index.size(); ++n) {
    value *= hermite_orthonormal(index[n], eps(static_cast<Eigen::Index>(n)));
  }
  return value;
}

TripleProductTable hermite_triple_products(int max_a, int max_b, int max_c) {
  TripleProductTable table;
  table.na = max_a + 1;
  table.nb = max_b + 1;
  table.nc = max_c + 1;
  table.data.assign(static_cast<size_t>(table.na) * table.nb * table.nc, 0.0);

  const int points = points_for_degree(max_a + max_b + max_c);
  const QuadratureRule1d rule = gauss_hermite(points);
  const int max_deg = std::max({max_a, max_b, max_c});

  std::vector<std::vector<double>> values(static_cast<size_t>(rule.nodes.size()));
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    hermite_orthonormal_all(max_deg, rule.nodes(i), values[static_cast<size_t>(i)]);
  }

  for (int a = 0; a <= max_a; ++a) {
    for (int b = 0; b <= max_b; ++b) {
      for (int c = 0; c <= max_c; ++c) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
          const auto& v = values[static_cast<size_t>(i)];
          sum += rule.weights(i) * v[a] * v[b] * v[c];
        }
        table.data[(static_cast<size_t>(a) * table.nb + b) * table.nc + c] =
            std::abs(sum) < 1e-14 ? 0.0 : sum;
      }
    }
  }
  return table;
}

}  // namespace uqpdf
