#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace nnpart {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent sub-streams.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = mix_seed(base);
  s = mix_seed(s ^ a);
  s = mix_seed(s ^ (b + 0x632be59bd9b4e019ULL));
  s = mix_seed(s ^ (c + 0x8cb92ba72f3d8dd7ULL));
  return s;
}

inline double uniform01(Rng& rng) {
  // 53 random bits in [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Eigen::VectorXd gaussian_vector(Rng& rng, Eigen::Index dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = normal(rng);
  return v;
}

/// Uniform direction on the unit sphere.
inline Eigen::VectorXd random_unit_vector(Rng& rng, Eigen::Index dim) {
  for (;;) {
    Eigen::VectorXd v = gaussian_vector(rng, dim);
    const double n = v.norm();
    if (n > 1e-300) return v / n;
  }
}

/// Uniform point in the unit Euclidean ball.
inline Eigen::VectorXd random_in_ball(Rng& rng, Eigen::Index dim) {
  Eigen::VectorXd u = random_unit_vector(rng, dim);
  const double r = std::pow(uniform01(rng), 1.0 / static_cast<double>(dim));
  return r * u;
}

}  // namespace nnpart
