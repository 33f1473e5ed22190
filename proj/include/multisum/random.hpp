#ifndef MULTISUM_RANDOM_HPP
#define MULTISUM_RANDOM_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "multisum/parallel.hpp"
#include "multisum/spaces.hpp"

namespace multisum {

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t master, std::uint64_t stream) {
  return Rng(derive_seed(master, stream));
}

// Standard Gaussian entries; complex entries have independent N(0, 1/2) parts.
inline Scalar gaussian_scalar(Rng& rng, Field field) {
  std::normal_distribution<double> n(0.0, 1.0);
  if (field == Field::real) return {n(rng), 0.0};
  constexpr double s = 0.70710678118654752440;
  const double re = n(rng) * s;
  return {re, n(rng) * s};
}

inline std::vector<Scalar> gaussian_vector(Rng& rng, std::size_t n, Field field) {
  std::vector<Scalar> v(n);
  for (auto& x : v) x = gaussian_scalar(rng, field);
  return v;
}

}  // namespace multisum

#endif  // MULTISUM_RANDOM_HPP
