#pragma once

#include <Eigen/Dense>
#include <vector>

namespace uqpdf {

inline constexpr int kMaxHermiteDegree = 40;

// Probabilist Hermite polynomial He_n(x) by the three-term recurrence
// He_{n+1} = x He_n - n He_{n-1}.
double hermite_he(int n, double x);

// He_n(x) / sqrt(n!), orthonormal against the standard Gaussian weight.
double hermite_orthonormal(int n, double x);

// All orthonormal values He_0..He_n at once (recurrence, one pass).
void hermite_orthonormal_all(int n, double x, std::vector<double>& out);

double factorial(int n);
double binomial(int n, int k);

// One-dimensional Gauss-Hermite rule against the standard Gaussian density:
// nodes are the zeros of He_n, weights are (n-1)!/(n He_{n-1}(x_i)^2).
// Nodes are symmetric about the origin and the weights sum to one.
struct QuadratureRule1d {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

QuadratureRule1d gauss_hermite(int n);

// Tensor-product rule over `dim` dimensions, n^dim nodes.
struct QuadratureRule {
  int dim = 0;
  Eigen::MatrixXd nodes;   // n_nodes x dim
  Eigen::VectorXd weights; // n_nodes

  int node_count() const { return static_cast<int>(weights.size()); }
};

inline constexpr long kMaxTensorNodes = 1L << 24;

QuadratureRule tensor_rule(int points_per_dim, int dim);

// Points per dimension needed to integrate a polynomial of the given total
// degree exactly: ceil((degree + 1) / 2).
int points_for_degree(int degree);

// Multi-indices of total degree <= max_degree, in graded lexicographic order
// (degree ascending, then lexicographically descending entries), so the zero
// index always comes first. Cardinality is binomial(max_degree + dim, dim).
struct MultiIndexSet {
  int dim = 0;
  int max_degree = 0;
  std::vector<std::vector<int>> indices;

  int size() const { return static_cast<int>(indices.size()); }
  const std::vector<int>& operator[](int i) const { return indices[i]; }
};

MultiIndexSet multi_index_set(int dim, int max_degree);

// Product of orthonormal univariate values, prod_n He~_{idx[n]}(eps[n]).
double eval_multivariate(const std::vector<int>& index, const Eigen::VectorXd& eps);

// T[a][b][c] = <He~_a He~_b He~_c> for a <= max_a etc., computed by a
// Gauss-Hermite rule at the exactness order for degree max_a+max_b+max_c.
struct TripleProductTable {
  int na = 0, nb = 0, nc = 0;
  std::vector<double> data;
  double operator()(int a, int b, int c) const {
    return data[static_cast<size_t>((a * nb + b)) * nc + c];
  }
};

TripleProductTable hermite_triple_products(int max_a, int max_b, int max_c);

}  // namespace uqpdf
