#ifndef MULTISUM_RADEMACHER_HPP
#define MULTISUM_RADEMACHER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <variant>

#include "multisum/norms.hpp"
#include "multisum/spaces.hpp"

namespace multisum {

// One realization (r_1(t), ..., r_n(t)); entries are +1 or -1. Each of the
// 2^n dyadic cells of [0, 1] realizes one pattern with equal weight.
using SignPattern = std::span<const std::int8_t>;

struct RadExact {
  // Largest sequence length averaged over all 2^n patterns.
  std::size_t max_terms = 22;
};

struct RadMonteCarlo {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0x5eed;
};

using RadMode = std::variant<RadExact, RadMonteCarlo>;

struct RadValue {
  double value = 0.0;
  bool exact = true;
  // Mean of ||sum eps_j x_j||^p and, for Monte Carlo, its standard error.
  double power_mean = 0.0;
  double std_error = 0.0;
};

// (E ||sum_j eps_j x_j||^p)^(1/p) over uniform signs, or the maximum for
// p = inf. norm_of_sum maps a sign pattern to the norm of the signed sum.
// Summation uses a fixed partition of the pattern space and compensated
// sums, so results do not depend on the thread count.
RadValue rademacher_average(std::size_t n, Exponent p, const RadMode& mode,
                            const std::function<double(SignPattern)>& norm_of_sum,
                            unsigned threads = 1);

// Rad_p norm of a finite sequence. Throws std::runtime_error when exact mode
// exceeds its length budget and std::invalid_argument for p < 1.
RadValue rad_p_norm(const VectorSeq& seq, Exponent p, const RadMode& mode = RadExact{},
                    unsigned threads = 1);

struct ContractionCheck {
  bool pass = false;
  double contracted = 0.0;
  double original = 0.0;
};

// Rad_p((alpha_j x_j)) <= Rad_p((x_j)) + 1e-12 for real |alpha_j| <= 1.
ContractionCheck contraction_check(const VectorSeq& seq, std::span<const double> alphas,
                                   Exponent p);

// Rad_p / Rad_q, both exact. Throws std::domain_error when every vector is zero.
double kahane_ratio(const VectorSeq& seq, Exponent p, Exponent q);

}  // namespace multisum

#endif  // MULTISUM_RADEMACHER_HPP
