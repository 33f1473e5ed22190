#include "multisum/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "multisum/parallel.hpp"
#include "multisum/random.hpp"

namespace multisum {

namespace {

Scalar unit_phase(Scalar z) {
  const double a = std::abs(z);
  return a == 0.0 ? Scalar{1.0, 0.0} : z / a;
}

Scalar dot(std::span<const Scalar> phi, std::span<const Scalar> x) {
  Scalar s{0.0, 0.0};
  for (std::size_t k = 0; k < phi.size(); ++k) s += phi[k] * x[k];
  return s;
}

// sum_j |phi(x_j)|^p for finite p.
double weak_objective(const VectorSeq& seq, std::span<const Scalar> phi, double p) {
  double s = 0.0;
  for (const auto& x : seq.vectors) s += std::pow(std::abs(dot(phi, x)), p);
  return s;
}

void normalize_in_place(std::vector<Scalar>& v, Exponent ball) {
  const double n = lp_norm(v, ball);
  if (n == 0.0) {
    std::fill(v.begin(), v.end(), Scalar{});
    v[0] = 1.0;
    return;
  }
  for (auto& x : v) x /= n;
}

// Conditional-gradient ascent of a convex objective over the dual ball, with
// step halving along the segment when a full step does not improve (p < 1).
double ascend(const VectorSeq& seq, double p, Exponent dual_ball, std::vector<Scalar> phi,
              const AscentOptions& opts) {
  const std::size_t m = seq.space.dim;
  double value = weak_objective(seq, phi, p);
  std::vector<Scalar> grad(m);
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    std::fill(grad.begin(), grad.end(), Scalar{});
    for (const auto& x : seq.vectors) {
      const Scalar v = dot(phi, x);
      const double a = std::abs(v);
      if (a == 0.0) continue;
      const Scalar w = p * std::pow(a, p - 1.0) * std::conj(v / a);
      for (std::size_t k = 0; k < m; ++k) grad[k] += w * x[k];
    }
    const auto full = ball_maximizer(grad, dual_ball);
    auto candidate = full;
    double cand_value = weak_objective(seq, candidate, p);
    for (double t = 0.5; cand_value <= value && t > 1e-9; t *= 0.5) {
      for (std::size_t k = 0; k < m; ++k) candidate[k] = (1.0 - t) * phi[k] + t * full[k];
      normalize_in_place(candidate, dual_ball);
      cand_value = weak_objective(seq, candidate, p);
    }
    if (cand_value <= value) break;
    const double gain = cand_value - value;
    phi = std::move(candidate);
    value = cand_value;
    if (gain <= opts.relative_tolerance * value) break;
  }
  return value;
}

NormValue weak_norm_by_ascent(const VectorSeq& seq, Exponent p, const AscentOptions& opts) {
  const std::size_t m = seq.space.dim;
  const Exponent dual_ball = dual_exponent(seq.space.exponent);
  const double pv = p.value();

  // Start 0 norms the longest vector; the rest are seeded random points.
  std::size_t longest = 0;
  double longest_norm = -1.0;
  for (std::size_t j = 0; j < seq.size(); ++j) {
    const double n = lp_norm(seq.vectors[j], seq.space.exponent);
    if (n > longest_norm) {
      longest_norm = n;
      longest = j;
    }
  }
  const std::size_t starts = std::max<std::size_t>(1, opts.starts);
  std::vector<double> best(starts, 0.0);
  for_each_chunk(starts, opts.threads, [&](std::size_t s) {
    std::vector<Scalar> phi;
    if (s == 0) {
      phi = ball_maximizer(seq.vectors[longest], dual_ball);
    } else {
      Rng rng = make_rng(opts.seed, s);
      phi = gaussian_vector(rng, m, seq.field);
      normalize_in_place(phi, dual_ball);
    }
    best[s] = ascend(seq, pv, dual_ball, std::move(phi), opts);
  });
  double top = 0.0;
  for (double b : best) top = std::max(top, b);
  return {std::pow(top, 1.0 / pv), false};
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, Field field)
    : rows_(rows), cols_(cols), field_(field), data_(rows * cols) {}

Matrix Matrix::from_rows(const std::vector<std::vector<Scalar>>& rows, Field field) {
  if (rows.empty() || rows.front().empty()) throw std::invalid_argument("empty matrix");
  Matrix m(rows.size(), rows.front().size(), field);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].size() != m.cols_) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t k = 0; k < m.cols_; ++k) {
      const Scalar v = rows[j][k];
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw std::invalid_argument("matrix entries must be finite");
      }
      if (field == Field::real && v.imag() != 0.0) {
        throw std::invalid_argument("real matrix has a complex entry");
      }
      m(j, k) = v;
    }
  }
  return m;
}

Matrix Matrix::identity(std::size_t n, Field field) {
  Matrix m(n, n, field);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_, field_);
  for (std::size_t j = 0; j < rows_; ++j)
    for (std::size_t k = 0; k < cols_; ++k) t(k, j) = (*this)(j, k);
  return t;
}

VectorSeq::VectorSeq(SpaceSpec s, Field f, std::vector<std::vector<Scalar>> v)
    : space(s), field(f), vectors(std::move(v)) {
  validate();
}

void VectorSeq::validate() const {
  if (vectors.empty()) throw std::invalid_argument("vector sequence is empty");
  for (const auto& x : vectors) {
    if (x.size() != space.dim) {
      throw std::invalid_argument("vector length does not match the space dimension");
    }
  }
}

double lp_norm(std::span<const Scalar> v, Exponent p) {
  double peak = 0.0;
  for (const auto& x : v) peak = std::max(peak, std::abs(x));
  if (p.is_infinite() || peak == 0.0) return peak;
  const double r = p.reciprocal();
  const double pv = 1.0 / r;
  double s = 0.0;
  for (const auto& x : v) s += std::pow(std::abs(x) / peak, pv);
  return peak * std::pow(s, r);
}

double mixed_norm(const Matrix& m, Exponent p, Exponent q) {
  if (m.empty()) throw std::invalid_argument("mixed norm of an empty matrix");
  std::vector<Scalar> column(m.rows());
  std::vector<Scalar> inner(m.cols());
  for (std::size_t k = 0; k < m.cols(); ++k) {
    for (std::size_t j = 0; j < m.rows(); ++j) column[j] = m(j, k);
    inner[k] = lp_norm(column, q);
  }
  return lp_norm(inner, p);
}

std::vector<Scalar> ball_maximizer(std::span<const Scalar> g, Exponent ball) {
  const std::size_t m = g.size();
  std::vector<Scalar> x(m);
  if (m == 0) return x;
  if (ball.is_infinite()) {
    for (std::size_t k = 0; k < m; ++k) x[k] = std::conj(unit_phase(g[k]));
    return x;
  }
  if (ball.reciprocal() == 1.0) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < m; ++k)
      if (std::abs(g[k]) > std::abs(g[best])) best = k;
    x[best] = std::conj(unit_phase(g[best]));
    return x;
  }
  const Exponent dual = dual_exponent(ball);
  const double norm = lp_norm(g, dual);
  if (norm == 0.0) {
    x[0] = 1.0;
    return x;
  }
  const double t = dual.value();
  for (std::size_t k = 0; k < m; ++k) {
    const double a = std::abs(g[k]);
    if (a == 0.0) continue;
    x[k] = std::conj(g[k] / a) * std::pow(a / norm, t - 1.0);
  }
  return x;
}

NormValue weak_lp_norm(const VectorSeq& seq, Exponent p, const WeakNormOptions& opts) {
  seq.validate();
  const SpaceSpec& space = seq.space;
  if (p.is_infinite()) {
    double top = 0.0;
    for (const auto& x : seq.vectors) top = std::max(top, lp_norm(x, space.exponent));
    return {top, true};
  }
  const bool convex = p.reciprocal() <= 1.0;
  if (!opts.force_ascent && convex && space.exponent.is_infinite()) {
    // The coordinate functionals form a norming set.
    std::vector<Scalar> column(seq.size());
    double top = 0.0;
    for (std::size_t k = 0; k < space.dim; ++k) {
      for (std::size_t j = 0; j < seq.size(); ++j) column[j] = seq.vectors[j][k];
      top = std::max(top, lp_norm(column, p));
    }
    return {top, true};
  }
  if (!opts.force_ascent && convex && space.exponent.reciprocal() == 1.0 &&
      seq.field == Field::real && space.dim <= opts.sign_enumeration_max_dim) {
    // Sign vectors are the extreme points of the dual l_inf ball; fix the
    // first sign since phi and -phi agree.
    const std::size_t m = space.dim;
    const std::uint64_t patterns = std::uint64_t{1} << (m - 1);
    const double pv = p.value();
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
      double s = 0.0;
      for (const auto& x : seq.vectors) {
        double v = x[0].real();
        for (std::size_t k = 1; k < m; ++k) {
          v += ((mask >> (k - 1)) & 1U) ? -x[k].real() : x[k].real();
        }
        s += std::pow(std::abs(v), pv);
      }
      best = std::max(best, s);
    }
    return {std::pow(best, 1.0 / pv), true};
  }
  return weak_norm_by_ascent(seq, p, opts.ascent);
}

}  // namespace multisum
