#ifndef MULTISUM_NORMS_HPP
#define MULTISUM_NORMS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "multisum/spaces.hpp"

namespace multisum {

// Dense row-major matrix m(j, k); j indexes rows, k indexes columns.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, Field field = Field::real);

  static Matrix from_rows(const std::vector<std::vector<Scalar>>& rows, Field field);
  static Matrix identity(std::size_t n, Field field = Field::real);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Field field() const { return field_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Scalar& operator()(std::size_t j, std::size_t k) { return data_[j * cols_ + k]; }
  const Scalar& operator()(std::size_t j, std::size_t k) const { return data_[j * cols_ + k]; }

  std::span<const Scalar> data() const { return data_; }
  std::span<Scalar> data() { return data_; }

  Matrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Field field_ = Field::real;
  std::vector<Scalar> data_;
};

// A finite sequence (x_j) of vectors in one space.
struct VectorSeq {
  SpaceSpec space;
  Field field = Field::real;
  std::vector<std::vector<Scalar>> vectors;

  VectorSeq() = default;
  VectorSeq(SpaceSpec s, Field f, std::vector<std::vector<Scalar>> v);

  std::size_t size() const { return vectors.size(); }
  // Throws std::invalid_argument on a length mismatch or an empty sequence.
  void validate() const;
};

// A norm value together with whether it was computed exactly. Inexact values
// from ascent are lower bounds of the true supremum.
struct NormValue {
  double value = 0.0;
  bool exact = true;
};

// (sum |v_i|^p)^(1/p), or max |v_i| for p = inf. For 0 < p < 1 this is the
// p-quasi-norm.
double lp_norm(std::span<const Scalar> v, Exponent p);

// (sum_k (sum_j |m_jk|^q)^(p/q))^(1/p): inner index over rows, outer over columns.
double mixed_norm(const Matrix& m, Exponent p, Exponent q);

// Point x of the closed unit ball of l_ball maximizing Re sum_k g_k x_k; the
// maximum equals the dual norm of g. Ties resolve to the lowest coordinate.
std::vector<Scalar> ball_maximizer(std::span<const Scalar> g, Exponent ball);

struct AscentOptions {
  std::size_t starts = 32;
  std::size_t max_iterations = 10000;
  double relative_tolerance = 1e-12;
  std::uint64_t seed = 0x5eed;
  unsigned threads = 1;
};

struct WeakNormOptions {
  AscentOptions ascent;
  // Largest dimension enumerated over sign vectors for real l_1 domains.
  std::size_t sign_enumeration_max_dim = 24;
  // Skip the exact formulas; used to cross-check the ascent.
  bool force_ascent = false;
};

// sup over the dual unit ball of (sum_j |phi(x_j)|^p)^(1/p).
//
// Exact for p = inf, for l_inf domains (coordinate functionals), and for real
// l_1 domains (sign vectors); p >= 1 is needed for the latter two. Every other
// case runs a multi-start ascent on the dual sphere and reports exact = false.
NormValue weak_lp_norm(const VectorSeq& seq, Exponent p, const WeakNormOptions& opts = {});

}  // namespace multisum

#endif  // MULTISUM_NORMS_HPP
