#pragma once

#include <functional>
#include <span>
#include <vector>

#include "uqpdf/cumulants.hpp"
#include "uqpdf/mc.hpp"
#include "uqpdf/series.hpp"

namespace uqpdf {

// Density-normalized histogram over the sample range.
struct Histogram {
  std::vector<double> edges;      // bins + 1, increasing
  std::vector<double> densities;  // bins, nonnegative
  int sample_count = 0;

  int bins() const { return static_cast<int>(densities.size()); }
  double bin_width() const { return edges[1] - edges[0]; }
  std::vector<double> centers() const;
  double value(double x) const;  // 0 outside the range
};

Histogram build_histogram(const SampleSet& samples, int bins);

// Gaussian-kernel estimator (1/(h M)) sum_m s((x - Q_m)/h).
double kde_evaluate(const SampleSet& samples, double bandwidth, double x);

// Root-mean-square difference over the grid (grid-size normalized l2).
double l2_distance(const std::function<double(double)>& f,
                   const std::function<double(double)>& g,
                   std::span<const double> grid);

// RMS over bin centers of (series value - bin density). The histogram is
// expected in the same standardized coordinates the series lives in.
double series_vs_histogram_distance(const TruncatedSeries& series,
                                    const Histogram& histogram);

// Supplies raw moments m_1..m_l on demand.
using MomentProvider = std::function<MomentVector(int)>;

enum class SelectionBranch { convergent, divergent };

struct OrderSelectionReport {
  int chosen_order = 0;
  SelectionBranch branch = SelectionBranch::convergent;
  std::vector<int> orders;                  // ascending, starting at the family minimum
  std::vector<double> successive_l2;        // successive_l2[k] compares orders[k] with orders[k-1]; NaN at k=0
  std::vector<double> histogram_distance;   // populated on the divergent branch, NaN otherwise
  std::vector<double> grid;                 // evaluation grid (standardized coordinates)
  double standardization_mean = 0.0;
  double standardization_stddev = 0.0;
  bool low_sample_warning = false;          // fewer than 100 crude samples
};

struct SelectionOptions {
  int bins = 50;
  int grid_points = 201;
};

// Truncation-order selection: grow the expansion order, compare successive
// truncations in RMS over the evaluation grid, and either stop once the
// differences decrease monotonically below `tol` (convergent branch, the
// earlier order of the last pair is chosen) or fall back to picking the order
// whose curve is closest to a crude histogram of the samples (divergent
// branch, smallest order among minimizers). The crude samples are
// standardized with the provider's first two moments so histogram and series
// share coordinates, and the grid spans the standardized sample range.
OrderSelectionReport select_order(const MomentProvider& moments, SeriesKind kind,
                                  const SampleSet& crude, double tol, int l_max,
                                  const SelectionOptions& options = {});

}  // namespace uqpdf
