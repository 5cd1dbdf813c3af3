#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace uqpdf {

// Counter-based Gaussian sampling: the draws for sample m depend only on
// (seed, m), so a parallel run partitions samples freely and still reproduces
// the sequential stream bit for bit.
namespace rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stream key for one sample index.
inline std::uint64_t stream_state(std::uint64_t seed, std::int64_t sample) {
  std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(sample) + 1));
  splitmix64(s);
  return s;
}

// Fills eps with iid standard normals for the given sample index (Box-Muller
// on splitmix64 uniforms; platform-independent by construction).
void fill_gaussian(std::uint64_t seed, std::int64_t sample, Eigen::VectorXd& eps);

}  // namespace rng

// count x dim matrix of iid standard Gaussian draws, reproducible given seed.
Eigen::MatrixXd sample_parameters(int count, int dim, std::uint64_t seed);

}  // namespace uqpdf
