#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "multisum/norms.hpp"
#include "multisum/random.hpp"

namespace multisum {
namespace {

const Exponent kInf = Exponent::infinity();
Exponent E(double v) { return Exponent::from_value(v); }

std::vector<Scalar> basis(std::size_t m, std::size_t k) {
  std::vector<Scalar> e(m);
  e[k] = 1.0;
  return e;
}

TEST(LpNorm, Examples) {
  const std::vector<Scalar> v{3.0, 4.0};
  EXPECT_DOUBLE_EQ(lp_norm(v, E(2)), 5.0);
  const std::vector<Scalar> ones{1.0, 1.0};
  EXPECT_NEAR(lp_norm(ones, Exponent::parse("4/3")), std::pow(2.0, 0.75), 1e-15);
  const std::vector<Scalar> w{1.0, -2.0, 2.0};
  EXPECT_DOUBLE_EQ(lp_norm(w, E(1)), 5.0);
  EXPECT_DOUBLE_EQ(lp_norm(w, kInf), 2.0);
}

TEST(LpNorm, QuasiNormBelowOne) {
  const std::vector<Scalar> ones{1.0, 1.0};
  EXPECT_DOUBLE_EQ(lp_norm(ones, E(0.5)), 4.0);
}

TEST(LpNorm, MonotoneInExponent) {
  Rng rng(7);
  const double grid[] = {0.5, 1.0, 4.0 / 3.0, 1.5, 2.0, 3.0, 7.0};
  for (int t = 0; t < 500; ++t) {
    const auto v = gaussian_vector(rng, 1 + t % 7, t % 2 ? Field::complex : Field::real);
    for (std::size_t i = 0; i + 1 < std::size(grid); ++i) {
      EXPECT_LE(lp_norm(v, E(grid[i + 1])), lp_norm(v, E(grid[i])) * (1 + 1e-14));
    }
    EXPECT_LE(lp_norm(v, kInf), lp_norm(v, E(7.0)) * (1 + 1e-14));
  }
}

TEST(MixedNorm, Examples) {
  EXPECT_DOUBLE_EQ(mixed_norm(Matrix::identity(2), E(1), E(2)), 2.0);
  const auto ones = Matrix::from_rows({{1.0, 1.0}, {1.0, 1.0}}, Field::real);
  EXPECT_NEAR(mixed_norm(ones, Exponent::parse("4/3"), Exponent::parse("4/3")),
              std::pow(4.0, 0.75), 1e-14);
  const auto m = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}}, Field::real);
  EXPECT_NEAR(mixed_norm(m, E(1), E(2)), std::sqrt(10.0) + 2.0 * std::sqrt(5.0), 1e-14);
}

TEST(MixedNorm, InfiniteExponentsAreSuprema) {
  const auto m = Matrix::from_rows({{1.0, -5.0}, {3.0, 4.0}}, Field::real);
  EXPECT_DOUBLE_EQ(mixed_norm(m, kInf, kInf), 5.0);
  EXPECT_DOUBLE_EQ(mixed_norm(m, kInf, E(1)), 9.0);
  EXPECT_DOUBLE_EQ(mixed_norm(m, E(1), kInf), 8.0);
}

TEST(MixedNorm, RejectsEmpty) {
  EXPECT_THROW(mixed_norm(Matrix(), E(1), E(2)), std::invalid_argument);
}

// (sum_k (sum_j |m_jk|)^2)^(1/2) <= sum_j (sum_k |m_jk|^2)^(1/2), i.e.
// ||M||_{l2(l1)} <= ||M^T||_{l1(l2)}.
TEST(MixedNorm, MinkowskiExchange) {
  Rng rng(11);
  for (int t = 0; t < 10000; ++t) {
    std::uniform_int_distribution<std::size_t> d(1, 6);
    Matrix m(d(rng), d(rng), t % 2 ? Field::complex : Field::real);
    for (auto& v : m.data()) v = gaussian_scalar(rng, m.field());
    const double lhs = mixed_norm(m, E(2), E(1));
    const double rhs = mixed_norm(m.transposed(), E(1), E(2));
    EXPECT_LE(lhs, rhs + 1e-12 * std::max(1.0, rhs));
  }
}

TEST(WeakNorm, Examples) {
  const SpaceSpec linf3(3, kInf);
  const VectorSeq basis3(linf3, Field::real, {basis(3, 0), basis(3, 1), basis(3, 2)});
  auto r = weak_lp_norm(basis3, E(1));
  EXPECT_TRUE(r.exact);
  EXPECT_DOUBLE_EQ(r.value, 1.0);

  const VectorSeq twice(SpaceSpec(2, kInf), Field::real, {basis(2, 0), basis(2, 0)});
  r = weak_lp_norm(twice, E(2));
  EXPECT_TRUE(r.exact);
  EXPECT_NEAR(r.value, std::sqrt(2.0), 1e-15);

  const VectorSeq l1(SpaceSpec(2, E(1)), Field::real, {basis(2, 0), basis(2, 1)});
  r = weak_lp_norm(l1, E(1));
  EXPECT_TRUE(r.exact);
  EXPECT_DOUBLE_EQ(r.value, 2.0);
}

TEST(WeakNorm, Errors) {
  VectorSeq bad;
  bad.space = SpaceSpec(2, kInf);
  EXPECT_THROW(weak_lp_norm(bad, E(1)), std::invalid_argument);
  bad.vectors = {{1.0, 2.0, 3.0}};
  EXPECT_THROW(weak_lp_norm(bad, E(1)), std::invalid_argument);
}

TEST(WeakNorm, InfiniteExponentIsLargestVectorNorm) {
  const VectorSeq s(SpaceSpec(2, E(2)), Field::real, {{3.0, 4.0}, {1.0, 1.0}});
  const auto r = weak_lp_norm(s, kInf);
  EXPECT_TRUE(r.exact);
  EXPECT_DOUBLE_EQ(r.value, 5.0);
}

TEST(WeakNorm, HilbertSpaceWeakTwoIsOperatorNorm) {
  // In l_2 the weak-l_2 norm of (x_j) is the largest singular value of the
  // matrix with rows x_j; for orthogonal rows it is the largest row norm.
  const VectorSeq s(SpaceSpec(2, E(2)), Field::real, {{3.0, 0.0}, {0.0, 2.0}});
  const auto r = weak_lp_norm(s, E(2));
  EXPECT_FALSE(r.exact);
  EXPECT_NEAR(r.value, 3.0, 1e-9);
}

TEST(WeakNorm, BoundedByStrongAndLongestVector) {
  Rng rng(3);
  const Exponent spaces[] = {kInf, E(1), E(2), E(3)};
  for (int t = 0; t < 200; ++t) {
    const Field f = t % 3 == 0 ? Field::complex : Field::real;
    const SpaceSpec space(1 + t % 4, spaces[t % 4]);
    std::vector<std::vector<Scalar>> xs;
    for (int j = 0; j < 1 + t % 5; ++j) xs.push_back(gaussian_vector(rng, space.dim, f));
    const VectorSeq seq(space, f, xs);
    const double w = weak_lp_norm(seq, E(1)).value;
    double strong = 0.0;
    double longest = 0.0;
    for (const auto& x : xs) {
      strong += lp_norm(x, space.exponent);
      longest = std::max(longest, lp_norm(x, space.exponent));
    }
    EXPECT_LE(w, strong * (1 + 1e-12));
    EXPECT_GE(w, longest * (1 - 1e-12));
  }
}

// The generic dual-ball ascent must reproduce the exact formulas.
TEST(WeakNorm, AscentAgreesWithExactFormulas) {
  Rng rng(5);
  WeakNormOptions forced;
  forced.force_ascent = true;
  for (int t = 0; t < 120; ++t) {
    const bool l1 = t % 2 == 1;
    const Field f = (!l1 && t % 4 == 0) ? Field::complex : Field::real;
    std::uniform_int_distribution<std::size_t> dm(1, 10);
    const SpaceSpec space(dm(rng), l1 ? E(1) : kInf);
    std::vector<std::vector<Scalar>> xs;
    for (int j = 0; j < 1 + t % 6; ++j) xs.push_back(gaussian_vector(rng, space.dim, f));
    const VectorSeq seq(space, f, xs);
    for (double p : {1.0, 1.5, 2.0}) {
      const auto exact = weak_lp_norm(seq, E(p));
      ASSERT_TRUE(exact.exact);
      const auto ascent = weak_lp_norm(seq, E(p), forced);
      EXPECT_FALSE(ascent.exact);
      EXPECT_NEAR(ascent.value, exact.value, 1e-8 * exact.value) << "trial " << t << " p " << p;
    }
  }
}

TEST(WeakNorm, ThreadCountDoesNotChangeAscent) {
  Rng rng(9);
  std::vector<std::vector<Scalar>> xs;
  for (int j = 0; j < 5; ++j) xs.push_back(gaussian_vector(rng, 4, Field::complex));
  const VectorSeq seq(SpaceSpec(4, E(3)), Field::complex, xs);
  WeakNormOptions one;
  WeakNormOptions four;
  four.ascent.threads = 4;
  EXPECT_EQ(weak_lp_norm(seq, E(1.5), one).value, weak_lp_norm(seq, E(1.5), four).value);
}

TEST(BallMaximizer, AttainsDualNorm) {
  Rng rng(2);
  for (double s : {1.0, 1.5, 2.0, 4.0}) {
    const auto g = gaussian_vector(rng, 5, Field::complex);
    const auto x = ball_maximizer(g, E(s));
    Scalar pairing{};
    for (std::size_t k = 0; k < g.size(); ++k) pairing += g[k] * x[k];
    EXPECT_LE(lp_norm(x, E(s)), 1 + 1e-12);
    EXPECT_NEAR(pairing.real(), lp_norm(g, dual_exponent(E(s))), 1e-12);
  }
  const auto g = gaussian_vector(rng, 5, Field::real);
  const auto x = ball_maximizer(g, kInf);
  Scalar pairing{};
  for (std::size_t k = 0; k < g.size(); ++k) pairing += g[k] * x[k];
  EXPECT_NEAR(pairing.real(), lp_norm(g, E(1)), 1e-12);
}

}  // namespace
}  // namespace multisum
