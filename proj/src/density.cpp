#include "uqpdf/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "uqpdf/errors.hpp"

namespace uqpdf {

std::vector<double> Histogram::centers() const {
  std::vector<double> c(densities.size());
  for (size_t b = 0; b < densities.size(); ++b) {
    c[b] = 0.5 * (edges[b] + edges[b + 1]);
  }
  return c;
}

double Histogram::value(double x) const {
  if (x < edges.front() || x > edges.back()) return 0.0;
  const int b = std::min(static_cast<int>((x - edges.front()) / bin_width()),
                         bins() - 1);
  return densities[static_cast<size_t>(b)];
}

Histogram build_histogram(const SampleSet& samples, int bins) {
  if (bins < 2) throw ConfigError("histogram needs at least 2 bins");
  if (samples.values.empty()) throw ConfigError("histogram of an empty sample set");

  const auto [min_it, max_it] =
      std::minmax_element(samples.values.begin(), samples.values.end());
  const double lo = *min_it;
  const double hi = *max_it;
  if (!(hi > lo)) {
    throw DegenerateDistributionError(
        "all samples are equal; the histogram support is a point");
  }

  Histogram histogram;
  histogram.sample_count = samples.count();
  histogram.edges.resize(static_cast<size_t>(bins) + 1);
  const double width = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) histogram.edges[static_cast<size_t>(b)] = lo + b * width;
  histogram.edges.back() = hi;

  std::vector<int> counts(static_cast<size_t>(bins), 0);
  for (const double v : samples.values) {
    const int b = std::min(static_cast<int>((v - lo) / width), bins - 1);
    ++counts[static_cast<size_t>(b)];
  }
  histogram.densities.resize(static_cast<size_t>(bins));
  for (int b = 0; b < bins; ++b) {
    histogram.densities[static_cast<size_t>(b)] =
        counts[static_cast<size_t>(b)] / (width * samples.count());
  }
  return histogram;
}

double kde_evaluate(const SampleSet& samples, double bandwidth, double x) {
  if (!(bandwidth > 0.0)) throw ConfigError("kernel bandwidth must be positive");
  if (samples.values.empty()) throw ConfigError("kernel estimate of an empty sample set");
  double sum = 0.0;
  for (const double v : samples.values) {
    sum += gaussian_pdf((x - v) / bandwidth);
  }
  return sum / (bandwidth * samples.count());
}

double l2_distance(const std::function<double(double)>& f,
                   const std::function<double(double)>& g,
                   std::span<const double> grid) {
  if (grid.empty()) throw ConfigError("distance over an empty grid");
  double sum = 0.0;
  for (const double x : grid) {
    const double d = f(x) - g(x);
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(grid.size()));
}

double series_vs_histogram_distance(const TruncatedSeries& series,
                                    const Histogram& histogram) {
  double sum = 0.0;
  for (int b = 0; b < histogram.bins(); ++b) {
    const double center = 0.5 * (histogram.edges[static_cast<size_t>(b)] +
                                 histogram.edges[static_cast<size_t>(b) + 1]);
    const double d = series(center) - histogram.densities[static_cast<size_t>(b)];
    sum += d * d;
  }
  return std::sqrt(sum / histogram.bins());
}

namespace {

TruncatedSeries build_series(SeriesKind kind, const CumulantVector& kappa, int order) {
  return kind == SeriesKind::gram_charlier ? gc_series(kappa, order)
                                           : ed_series(kappa, order);
}

}  // namespace

OrderSelectionReport select_order(const MomentProvider& moments, SeriesKind kind,
                                  const SampleSet& crude, double tol, int l_max,
                                  const SelectionOptions& options) {
  if (!(tol > 0.0)) throw ConfigError("selection tolerance must be positive");
  const bool gc = kind == SeriesKind::gram_charlier;
  const int min_order = gc ? kMinGramCharlierOrder : kMinEdgeworthOrder;
  const int max_order = gc ? kMaxGramCharlierOrder : kMaxEdgeworthOrder;
  if (l_max < min_order || l_max > max_order) {
    throw ConfigError("selection bound " + std::to_string(l_max) + " outside [" +
                      std::to_string(min_order) + ", " + std::to_string(max_order) +
                      "] for this family");
  }
  if (crude.values.empty()) throw ConfigError("selection needs crude samples");

  OrderSelectionReport report;
  report.low_sample_warning = crude.count() < 100;

  // Moments needed for the largest admissible order; cumulants from the
  // standardized moments so histogram and series share coordinates.
  const int needed = gc ? l_max : l_max + 2;
  const MomentVector raw = moments(needed);
  if (raw.order() < needed) {
    throw DimensionError("moment provider returned " + std::to_string(raw.order()) +
                         " moments, needed " + std::to_string(needed));
  }
  const double mean = raw.m(1);
  const double variance = raw.m(2) - mean * mean;
  const CumulantVector kappa = moments_to_cumulants(standardize_moments(raw));
  report.standardization_mean = mean;
  report.standardization_stddev = std::sqrt(variance);

  SampleSet standardized;
  standardized.values.resize(crude.values.size());
  for (size_t i = 0; i < crude.values.size(); ++i) {
    standardized.values[i] = (crude.values[i] - mean) / report.standardization_stddev;
  }

  const auto [lo_it, hi_it] =
      std::minmax_element(standardized.values.begin(), standardized.values.end());
  const int n_grid = std::max(2, options.grid_points);
  report.grid.resize(static_cast<size_t>(n_grid));
  for (int i = 0; i < n_grid; ++i) {
    report.grid[static_cast<size_t>(i)] =
        *lo_it + (*hi_it - *lo_it) * i / (n_grid - 1);
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<TruncatedSeries> series;
  series.push_back(build_series(kind, kappa, min_order));
  report.orders.push_back(min_order);
  report.successive_l2.push_back(nan);

  bool monotone = true;
  bool converged = false;
  for (int order = min_order + 1; order <= l_max; ++order) {
    series.push_back(build_series(kind, kappa, order));
    report.orders.push_back(order);
    const TruncatedSeries& cur = series.back();
    const TruncatedSeries& prev = series[series.size() - 2];
    const double diff = l2_distance([&](double x) { return cur(x); },
                                    [&](double x) { return prev(x); }, report.grid);
    if (report.successive_l2.size() > 1 && diff > report.successive_l2.back()) {
      monotone = false;
    }
    report.successive_l2.push_back(diff);
    if (monotone && diff < tol) {
      // The latest term changed nothing measurable: keep the previous order.
      report.branch = SelectionBranch::convergent;
      report.chosen_order = order - 1;
      converged = true;
      break;
    }
  }

  if (!converged) {
    if (series.size() == 1) {
      // Nothing to compare against; the single candidate is the choice.
      report.branch = SelectionBranch::convergent;
      report.chosen_order = min_order;
      report.histogram_distance.assign(report.orders.size(), nan);
      return report;
    }
    report.branch = SelectionBranch::divergent;
    const Histogram histogram = build_histogram(standardized, options.bins);
    report.histogram_distance.resize(report.orders.size());
    int best = 0;
    for (size_t i = 0; i < series.size(); ++i) {
      report.histogram_distance[i] = series_vs_histogram_distance(series[i], histogram);
      if (report.histogram_distance[i] < report.histogram_distance[static_cast<size_t>(best)]) {
        best = static_cast<int>(i);  // strict: ties keep the smaller order
      }
    }
    report.chosen_order = report.orders[static_cast<size_t>(best)];
  } else {
    report.histogram_distance.assign(report.orders.size(), nan);
  }
  return report;
}

}  // namespace uqpdf
