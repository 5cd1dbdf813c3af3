#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "uqpdf/cumulants.hpp"

namespace uqpdf {

// Standard Gaussian density s(x).
double gaussian_pdf(double x);

inline constexpr int kMaxGaussianDerivative = 14;

// l-th derivative of s: D^(l) s(x) = (-1)^l He_l(x) s(x). l <= 14 (the
// fourth-order Edgeworth term reaches D^(12)).
double gaussian_pdf_derivative(int l, double x);

enum class SeriesKind { gram_charlier, edgeworth };

SeriesKind series_kind_from_string(std::string_view name);
std::string to_string(SeriesKind kind);

// Truncated expansion of a standardized density around the Gaussian kernel.
// Both families collapse to s(x) * sum_k a_k He_k(x) with a_0 = 1; the
// Hermite-coefficient form is what gets evaluated.
struct TruncatedSeries {
  SeriesKind kind = SeriesKind::gram_charlier;
  int order = 0;
  double scale_r = 1.0;              // Edgeworth r; 1 in all experiments
  std::vector<double> cumulants;     // standardized kappa_1.. as supplied
  std::vector<double> hermite_coeff; // a_0..a_K

  double operator()(double x) const;
};

inline constexpr int kMinGramCharlierOrder = 3;
inline constexpr int kMaxGramCharlierOrder = 6;
inline constexpr int kMinEdgeworthOrder = 1;
inline constexpr int kMaxEdgeworthOrder = 4;

// Gram-Charlier truncation of order 3..6 for a standardized variable
// (kappa_1 = 0, kappa_2 = 1 required):
//   s(x) (1 + sum_{l=3..order} B_l(0,0,kappa_3..kappa_l) He_l(x) / l!).
TruncatedSeries gc_series(const CumulantVector& standardized, int order);

// Edgeworth truncation of order 1..4 at scale r (r = 1 by default): partial
// sum of (-1)^l theta_l(x) / r^{l/2} with theta_0 = s,
// theta_1 = nu_3 D^(3)s / 3!, theta_2 = nu_4 D^(4)s / 4! + nu_3^2 D^(6)s / 72,
// and the printed third and fourth coefficient functions. nu_l are the
// standardized cumulants.
TruncatedSeries ed_series(const CumulantVector& standardized, int order,
                          double r = 1.0);

double evaluate_series(const TruncatedSeries& series, double x);

}  // namespace uqpdf
