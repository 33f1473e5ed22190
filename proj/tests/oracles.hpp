// Brute-force reference computations for tests. Nothing here calls the
// library's contraction, enumeration or ascent code paths.
#ifndef MULTISUM_TESTS_ORACLES_HPP
#define MULTISUM_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "multisum/forms.hpp"

namespace multisum::oracle {

// Direct sum over every index tuple of coeff * prod x^i_{index_i}.
inline Scalar direct_evaluate(const FormTensor& a, const VectorTuple& xs) {
  const auto dims = a.dims();
  const auto coeffs = a.coeffs();
  std::vector<std::size_t> idx(dims.size(), 0);
  Scalar total{};
  for (std::size_t flat = 0; flat < coeffs.size(); ++flat) {
    Scalar term = coeffs[flat];
    for (std::size_t i = 0; i < dims.size(); ++i) term *= xs[i][idx[i]];
    total += term;
    for (std::size_t i = dims.size(); i-- > 0;) {
      if (++idx[i] < dims[i]) break;
      idx[i] = 0;
    }
  }
  return total;
}

inline std::vector<Scalar> signs(std::uint64_t mask, std::size_t m) {
  std::vector<Scalar> x(m);
  for (std::size_t k = 0; k < m; ++k) x[k] = ((mask >> k) & 1U) ? -1.0 : 1.0;
  return x;
}

// max |A| over all sign vectors in every slot (real l_inf domains).
inline double sign_norm(const FormTensor& a) {
  const auto dims = a.dims();
  std::size_t bits = 0;
  for (auto d : dims) bits += d;
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
    VectorTuple xs;
    std::size_t shift = 0;
    for (auto d : dims) {
      xs.push_back(signs(mask >> shift, d));
      shift += d;
    }
    best = std::max(best, std::abs(direct_evaluate(a, xs)));
  }
  return best;
}

// Complex bilinear form with two rows on l_inf x l_inf: x = (1, e^{i phi}) on a
// grid of the given resolution, y optimal in closed form (sum of moduli).
inline double phase_grid_norm(const Matrix& a, double resolution = 1e-3) {
  double best = 0.0;
  const double two_pi = 2.0 * std::numbers::pi;
  for (double phi = 0.0; phi < two_pi; phi += resolution) {
    const Scalar w = std::polar(1.0, phi);
    double s = 0.0;
    for (std::size_t k = 0; k < a.cols(); ++k) s += std::abs(a(0, k) + w * a(1, k));
    best = std::max(best, s);
  }
  return best;
}

// (2^-n sum over all 2^n patterns ||sum eps_j x_j||_s^p)^(1/p).
inline double rad_norm(const std::vector<std::vector<double>>& xs, double s, double p) {
  const std::size_t n = xs.size();
  const std::size_t m = xs.front().size();
  double total = 0.0;
  double top = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<double> acc(m, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < m; ++k) acc[k] += (((mask >> j) & 1U) ? -1.0 : 1.0) * xs[j][k];
    double nrm = 0.0;
    if (std::isinf(s)) {
      for (double v : acc) nrm = std::max(nrm, std::abs(v));
    } else {
      for (double v : acc) nrm += std::pow(std::abs(v), s);
      nrm = std::pow(nrm, 1.0 / s);
    }
    top = std::max(top, nrm);
    total += std::pow(nrm, p);
  }
  if (std::isinf(p)) return top;
  return std::pow(total / static_cast<double>(std::uint64_t{1} << n), 1.0 / p);
}

}  // namespace multisum::oracle

#endif  // MULTISUM_TESTS_ORACLES_HPP
