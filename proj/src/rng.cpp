#include "uqpdf/rng.hpp"

#include <cmath>
#include <numbers>

#include "uqpdf/errors.hpp"

namespace uqpdf {

namespace rng {

namespace {

// Uniform in (0, 1]; never zero, so it is safe under log.
inline double to_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1p-53;
}

}  // namespace

void fill_gaussian(std::uint64_t seed, std::int64_t sample, Eigen::VectorXd& eps) {
  std::uint64_t state = stream_state(seed, sample);
  const Eigen::Index dim = eps.size();
  for (Eigen::Index k = 0; k < dim; k += 2) {
    const double u1 = to_unit(splitmix64(state));
    const double u2 = to_unit(splitmix64(state));
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    eps(k) = radius * std::cos(angle);
    if (k + 1 < dim) eps(k + 1) = radius * std::sin(angle);
  }
}

}  // namespace rng

Eigen::MatrixXd sample_parameters(int count, int dim, std::uint64_t seed) {
  if (count < 1) throw ConfigError("sample count must be at least 1");
  if (dim < 1) throw ConfigError("sample dimension must be at least 1");
  Eigen::MatrixXd samples(count, dim);
  Eigen::VectorXd eps(dim);
  for (int m = 0; m < count; ++m) {
    rng::fill_gaussian(seed, m, eps);
    samples.row(m) = eps;
  }
  return samples;
}

}  // namespace uqpdf
