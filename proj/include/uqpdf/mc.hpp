#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "uqpdf/cumulants.hpp"
#include "uqpdf/fem.hpp"
#include "uqpdf/kl.hpp"
#include "uqpdf/mesh.hpp"

namespace uqpdf {

// Realizations of one scalar quantity of interest.
struct SampleSet {
  std::vector<double> values;
  std::uint64_t seed = 0;
  QoiKind qoi_kind = QoiKind::average;
  double sigma_gamma = 0.0;
  std::vector<std::int64_t> skipped;  // indices dropped in skip-and-log mode

  int count() const { return static_cast<int>(values.size()); }
};

struct McOptions {
  int threads = 1;        // <=0 means hardware concurrency
  bool fail_fast = true;  // otherwise skip failed samples and record indices
  double forcing = -1.0;
};

// One Poisson solve per parameter row; values come back in input order.
SampleSet run_mc(const StructuredQuadMesh& mesh, const KLField& kl, QoiKind kind,
                 const Eigen::MatrixXd& samples, const McOptions& options = {});

struct MomentEstimate {
  MomentVector moments;
  std::vector<double> std_error;  // CLT standard error of each m_l
  int sample_count = 0;
};

// m_l = (1/M) sum values^l for l = 1..l_max (compensated summation), with the
// standard error of each estimate attached.
MomentEstimate mc_moments(const SampleSet& set, int l_max);

}  // namespace uqpdf
