#include "uqpdf/cumulants.hpp"

#include <cmath>
#include <string>

#include "uqpdf/errors.hpp"
#include "uqpdf/hermite.hpp"

namespace uqpdf {

double bell_polynomial(int l, std::span<const double> x) {
  if (l < 0 || l > kMaxMomentOrder) {
    throw ConfigError("Bell polynomial order " + std::to_string(l) + " outside [0, " +
                      std::to_string(kMaxMomentOrder) + "]");
  }
  if (static_cast<int>(x.size()) < l) {
    throw DimensionError("Bell polynomial of order " + std::to_string(l) + " needs " +
                         std::to_string(l) + " arguments");
  }
  std::vector<double> b(static_cast<size_t>(l) + 1);
  b[0] = 1.0;
  for (int m = 0; m < l; ++m) {
    double sum = 0.0;
    for (int k = 0; k <= m; ++k) {
      sum += binomial(m, k) * b[static_cast<size_t>(m - k)] * x[static_cast<size_t>(k)];
    }
    b[static_cast<size_t>(m) + 1] = sum;
  }
  return b[static_cast<size_t>(l)];
}

namespace {

void check_order(int order) {
  if (order < 1 || order > kMaxMomentOrder) {
    throw ConfigError("moment order " + std::to_string(order) + " outside [1, " +
                      std::to_string(kMaxMomentOrder) + "]");
  }
}

}  // namespace

CumulantVector moments_to_cumulants(const MomentVector& m) {
  check_order(m.order());
  const int order = m.order();
  CumulantVector kappa;
  kappa.values.resize(static_cast<size_t>(order));

  const auto mv = [&](int l) { return m.m(l); };
  for (int l = 1; l <= std::min(order, 6); ++l) {
    double value = 0.0;
    const double m1 = mv(1);
    switch (l) {
      case 1:
        value = m1;
        break;
      case 2:
        value = mv(2) - m1 * m1;
        break;
      case 3:
        value = mv(3) + 2 * m1 * m1 * m1 - 3 * m1 * mv(2);
        break;
      case 4:
        value = mv(4) - 6 * std::pow(m1, 4) + 12 * m1 * m1 * mv(2) -
                3 * mv(2) * mv(2) - 4 * m1 * mv(3);
        break;
      case 5:
        value = mv(5) - 5 * mv(4) * m1 - 10 * mv(3) * mv(2) + 20 * mv(3) * m1 * m1 +
                30 * mv(2) * mv(2) * m1 - 60 * mv(2) * std::pow(m1, 3) +
                24 * std::pow(m1, 5);
        break;
      case 6:
        value = mv(6) - 6 * mv(5) * m1 - 15 * mv(4) * mv(2) + 30 * mv(4) * m1 * m1 -
                10 * mv(3) * mv(3) + 120 * mv(3) * mv(2) * m1 -
                120 * mv(3) * std::pow(m1, 3) + 30 * std::pow(mv(2), 3) -
                270 * mv(2) * mv(2) * m1 * m1 + 360 * mv(2) * std::pow(m1, 4) -
                120 * std::pow(m1, 6);
        break;
    }
    kappa.values[static_cast<size_t>(l) - 1] = value;
  }

  // Orders beyond the closed maps: kappa_l = m_l - sum_j C(l-1,j-1) kappa_j m_{l-j}.
  for (int l = 7; l <= order; ++l) {
    double sum = 0.0;
    for (int j = 1; j < l; ++j) {
      sum += binomial(l - 1, j - 1) * kappa.values[static_cast<size_t>(j) - 1] * mv(l - j);
    }
    kappa.values[static_cast<size_t>(l) - 1] = mv(l) - sum;
  }
  return kappa;
}

MomentVector affine_moments(const MomentVector& raw, double a, double b) {
  check_order(raw.order());
  const int order = raw.order();
  MomentVector out;
  out.values.resize(static_cast<size_t>(order));
  for (int l = 1; l <= order; ++l) {
    double sum = 0.0;
    for (int k = 0; k <= l; ++k) {
      const double mk = (k == 0) ? 1.0 : raw.m(k);
      sum += binomial(l, k) * std::pow(a, k) * std::pow(b, l - k) * mk;
    }
    out.values[static_cast<size_t>(l) - 1] = sum;
  }
  return out;
}

MomentVector standardize_moments(const MomentVector& raw) {
  check_order(raw.order());
  const double mean = raw.m(1);
  const double variance = raw.order() >= 2 ? raw.m(2) - mean * mean : 0.0;
  if (!(variance > 0.0)) {
    throw DegenerateDistributionError(
        "variance " + std::to_string(variance) +
        " is not positive; the standardized expansions are undefined");
  }
  return affine_moments(raw, 1.0 / std::sqrt(variance), -mean / std::sqrt(variance));
}

}  // namespace uqpdf
