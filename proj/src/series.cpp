#include "uqpdf/series.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "uqpdf/errors.hpp"
#include "uqpdf/hermite.hpp"

namespace uqpdf {

double gaussian_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double gaussian_pdf_derivative(int l, double x) {
  if (l < 0 || l > kMaxGaussianDerivative) {
    throw ConfigError("Gaussian derivative order " + std::to_string(l) +
                      " outside [0, " + std::to_string(kMaxGaussianDerivative) + "]");
  }
  const double sign = (l % 2 == 0) ? 1.0 : -1.0;
  return sign * hermite_he(l, x) * gaussian_pdf(x);
}

SeriesKind series_kind_from_string(std::string_view name) {
  if (name == "gc" || name == "gram_charlier") return SeriesKind::gram_charlier;
  if (name == "ed" || name == "edgeworth") return SeriesKind::edgeworth;
  throw ConfigError("unknown series kind '" + std::string(name) +
                    "' (expected gc or ed)");
}

std::string to_string(SeriesKind kind) {
  return kind == SeriesKind::gram_charlier ? "gc" : "ed";
}

namespace {

void check_standardized(const CumulantVector& kappa, int needed) {
  if (kappa.order() < needed) {
    throw DimensionError("series needs cumulants up to order " +
                         std::to_string(needed) + ", got " +
                         std::to_string(kappa.order()));
  }
  if (std::abs(kappa.kappa(1)) > 1e-12 || std::abs(kappa.kappa(2) - 1.0) > 1e-12) {
    throw ConfigError("series expects standardized cumulants (kappa_1 = 0, "
                      "kappa_2 = 1); got kappa_1 = " +
                      std::to_string(kappa.kappa(1)) + ", kappa_2 = " +
                      std::to_string(kappa.kappa(2)));
  }
}

void add_coeff(std::vector<double>& coeff, int degree, double value) {
  if (static_cast<int>(coeff.size()) <= degree) coeff.resize(degree + 1, 0.0);
  coeff[static_cast<size_t>(degree)] += value;
}

}  // namespace

TruncatedSeries gc_series(const CumulantVector& standardized, int order) {
  if (order < kMinGramCharlierOrder || order > kMaxGramCharlierOrder) {
    throw ConfigError("Gram-Charlier order " + std::to_string(order) + " outside [" +
                      std::to_string(kMinGramCharlierOrder) + ", " +
                      std::to_string(kMaxGramCharlierOrder) + "]");
  }
  check_standardized(standardized, order);

  TruncatedSeries series;
  series.kind = SeriesKind::gram_charlier;
  series.order = order;
  series.cumulants = standardized.values;
  series.hermite_coeff = {1.0};

  // s(x) (1 + sum_l B_l(0, 0, kappa_3..kappa_l) He_l(x) / l!); the sign of the
  // derivative operator cancels against D^(l)s = (-1)^l He_l s.
  std::vector<double> args;
  for (int l = 3; l <= order; ++l) {
    args.assign(static_cast<size_t>(l), 0.0);
    for (int j = 3; j <= l; ++j) {
      args[static_cast<size_t>(j) - 1] = standardized.kappa(j);
    }
    add_coeff(series.hermite_coeff, l, bell_polynomial(l, args) / factorial(l));
  }
  return series;
}

TruncatedSeries ed_series(const CumulantVector& standardized, int order, double r) {
  if (order < kMinEdgeworthOrder) {
    throw ConfigError("Edgeworth order " + std::to_string(order) + " below " +
                      std::to_string(kMinEdgeworthOrder));
  }
  if (order > kMaxEdgeworthOrder) {
    throw UnsupportedError("Edgeworth truncation beyond order " +
                           std::to_string(kMaxEdgeworthOrder) +
                           " is not available (coefficient functions stop there)");
  }
  if (!(r > 0.0)) throw ConfigError("Edgeworth scale r must be positive");
  check_standardized(standardized, order + 2);

  TruncatedSeries series;
  series.kind = SeriesKind::edgeworth;
  series.order = order;
  series.scale_r = r;
  series.cumulants = standardized.values;
  series.hermite_coeff = {1.0};

  const auto nu = [&](int l) { return standardized.kappa(l); };

  // Partial sum of (-1)^l theta_l(x) / r^(l/2); each D^(k)s contributes
  // (-1)^(l+k) He_k(x) s(x), and every printed term has l + k even.
  for (int l = 1; l <= order; ++l) {
    const double scale = std::pow(r, -0.5 * l);
    switch (l) {
      case 1:
        add_coeff(series.hermite_coeff, 3, scale * nu(3) / 6.0);
        break;
      case 2:
        add_coeff(series.hermite_coeff, 4, scale * nu(4) / 24.0);
        add_coeff(series.hermite_coeff, 6, scale * nu(3) * nu(3) / 72.0);
        break;
      case 3:
        add_coeff(series.hermite_coeff, 5, scale * nu(5) / 120.0);
        add_coeff(series.hermite_coeff, 7, scale * nu(3) * nu(4) / 144.0);
        add_coeff(series.hermite_coeff, 9, scale * std::pow(nu(3), 3) / 1296.0);
        break;
      case 4:
        add_coeff(series.hermite_coeff, 6, scale * nu(6) / 720.0);
        add_coeff(series.hermite_coeff, 8,
                  scale * (nu(4) * nu(4) / 1152.0 + nu(3) * nu(5) / 720.0));
        add_coeff(series.hermite_coeff, 10,
                  scale * nu(3) * nu(3) * nu(4) / 1728.0);
        add_coeff(series.hermite_coeff, 12, scale * std::pow(nu(3), 4) / 31104.0);
        break;
    }
  }
  return series;
}

double TruncatedSeries::operator()(double x) const {
  double he_prev = 1.0;  // He_0
  double he_cur = x;     // He_1
  double sum = hermite_coeff[0];
  const int max_degree = static_cast<int>(hermite_coeff.size()) - 1;
  for (int k = 1; k <= max_degree; ++k) {
    if (hermite_coeff[static_cast<size_t>(k)] != 0.0) {
      sum += hermite_coeff[static_cast<size_t>(k)] * he_cur;
    }
    const double he_next = x * he_cur - k * he_prev;
    he_prev = he_cur;
    he_cur = he_next;
  }
  return gaussian_pdf(x) * sum;
}

double evaluate_series(const TruncatedSeries& series, double x) {
  return series(x);
}

}  // namespace uqpdf
