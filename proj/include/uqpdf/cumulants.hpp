#pragma once

#include <span>
#include <vector>

namespace uqpdf {

inline constexpr int kMaxMomentOrder = 8;

// Raw moments m_1..m_L of a scalar random variable, L <= 8.
struct MomentVector {
  std::vector<double> values;  // values[l-1] = m_l

  MomentVector() = default;
  explicit MomentVector(std::vector<double> v) : values(std::move(v)) {}

  int order() const { return static_cast<int>(values.size()); }
  double m(int l) const { return values[l - 1]; }
};

// Cumulants kappa_1..kappa_L.
struct CumulantVector {
  std::vector<double> values;

  int order() const { return static_cast<int>(values.size()); }
  double kappa(int l) const { return values[l - 1]; }
};

// Complete Bell polynomial B_l(x_1..x_l) through the recurrence
// B_{l+1} = sum_k binomial(l,k) B_{l-k} x_{k+1}, B_0 = 1.
double bell_polynomial(int l, std::span<const double> x);

// Moment -> cumulant conversion. Orders up to six use the closed polynomial
// maps (kappa_2 = m_2 - m_1^2 and so on); orders seven and eight fall back to
// the recursive relation kappa_l = m_l - sum_j binomial(l-1,j-1) kappa_j m_{l-j}.
CumulantVector moments_to_cumulants(const MomentVector& m);

// Raw moments of the affine map (Q - m_1)/sqrt(m_2 - m_1^2), via binomial
// expansion of central moments. Throws DegenerateDistributionError when the
// variance vanishes.
MomentVector standardize_moments(const MomentVector& raw);

// Raw moments of a*Q + b from raw moments of Q (binomial expansion).
MomentVector affine_moments(const MomentVector& raw, double a, double b);

}  // namespace uqpdf
