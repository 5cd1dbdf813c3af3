// Reference computations used as independent checks: Fourier solution of the
// constant-coefficient problem, composite Gauss-Legendre integration, and
// exact standard-Gaussian moments. Everything here is implementation-free
// with respect to the library code paths it validates.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

// Average over [0,1]^2 of v solving -lap v = 1 with zero boundary values,
// from the double sine series: sum over odd m,n of 64 / (pi^6 m^2 n^2 (m^2+n^2)).
inline double poisson_unit_average(int terms = 399) {
  double sum = 0.0;
  const double pi6 = std::pow(std::numbers::pi, 6);
  for (int m = 1; m <= terms; m += 2) {
    for (int n = 1; n <= terms; n += 2) {
      sum += 64.0 / (pi6 * m * m * n * n * (m * m + n * n));
    }
  }
  return sum;
}

// v(1/2, 1/2) for the same problem.
inline double poisson_unit_center(int terms = 399) {
  double sum = 0.0;
  const double pi4 = std::pow(std::numbers::pi, 4);
  for (int m = 1; m <= terms; m += 2) {
    for (int n = 1; n <= terms; n += 2) {
      const double sign = (((m - 1) / 2 + (n - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
      sum += sign * 16.0 / (pi4 * m * n * (m * m + n * n));
    }
  }
  return sum;
}

// Composite Gauss-Legendre quadrature: `panels` equal subintervals of [a, b],
// ten points each (exact through degree 19 per panel).
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        int panels = 200) {
  static const double node[5] = {0.1488743389816312, 0.4333953941292472,
                                 0.6794095682990244, 0.8650633666889845,
                                 0.9739065285171717};
  static const double weight[5] = {0.2955242247147529, 0.2692667193099963,
                                   0.2190863625159820, 0.1494513491505806,
                                   0.0666713443086881};
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < 5; ++i) {
      sum += weight[i] * (f(mid + 0.5 * h * node[i]) + f(mid - 0.5 * h * node[i]));
    }
  }
  return sum * 0.5 * h;
}

// E[x^k] for the standard Gaussian: 0 for odd k, (k-1)!! for even k.
inline double gaussian_moment(int k) {
  if (k % 2 == 1) return 0.0;
  double value = 1.0;
  for (int j = k - 1; j > 1; j -= 2) value *= j;
  return value;
}

// int_0^1 int_0^1 exp(-|s-t|/len) ds dt via quadrature on the smooth
// triangle-split form 2 * int_0^1 int_0^1 t exp(-t(1-u)/len) du dt.
inline double exponential_kernel_double_integral(double len) {
  static const double node[5] = {0.1488743389816312, 0.4333953941292472,
                                 0.6794095682990244, 0.8650633666889845,
                                 0.9739065285171717};
  static const double weight[5] = {0.2955242247147529, 0.2692667193099963,
                                   0.2190863625159820, 0.1494513491505806,
                                   0.0666713443086881};
  const int panels = 32;
  const double h = 1.0 / panels;
  std::vector<double> pts, wts;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (int i = 0; i < 5; ++i) {
      pts.push_back(mid + 0.5 * h * node[i]);
      wts.push_back(0.5 * h * weight[i]);
      pts.push_back(mid - 0.5 * h * node[i]);
      wts.push_back(0.5 * h * weight[i]);
    }
  }
  double sum = 0.0;
  for (size_t a = 0; a < pts.size(); ++a) {
    for (size_t b = 0; b < pts.size(); ++b) {
      sum += wts[a] * wts[b] * pts[a] * std::exp(-pts[a] * (1.0 - pts[b]) / len);
    }
  }
  return 2.0 * sum;
}

}  // namespace oracle
