#ifndef MULTISUM_FORMS_HPP
#define MULTISUM_FORMS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "multisum/norms.hpp"
#include "multisum/spaces.hpp"

namespace multisum {

// An n-linear scalar form on l_{s_1}^{m_1} x ... x l_{s_n}^{m_n}, stored as the
// dense row-major array of A(e_{i1}, ..., e_{in}); the last index is fastest.
class FormTensor {
 public:
  FormTensor() = default;
  FormTensor(std::vector<SpaceSpec> domains, Field field, std::vector<Scalar> coeffs);

  static FormTensor zeros(std::vector<SpaceSpec> domains, Field field);
  // Bilinear form with a_jk = m(j, k) on l_s1^rows x l_s2^cols.
  static FormTensor from_matrix(const Matrix& m, Exponent s1 = Exponent::infinity(),
                                Exponent s2 = Exponent::infinity());

  std::size_t order() const { return domains_.size(); }
  const std::vector<SpaceSpec>& domains() const { return domains_; }
  std::vector<std::size_t> dims() const;
  Field field() const { return field_; }
  std::size_t size() const { return coeffs_.size(); }

  std::span<const Scalar> coeffs() const { return coeffs_; }
  std::span<Scalar> coeffs() { return coeffs_; }

  Scalar& at(std::span<const std::size_t> index);
  const Scalar& at(std::span<const std::size_t> index) const;

  // Coefficient matrix of a bilinear form.
  Matrix as_matrix() const;
  FormTensor scaled(Scalar c) const;

 private:
  std::size_t flat_index(std::span<const std::size_t> index) const;

  std::vector<SpaceSpec> domains_;
  Field field_ = Field::real;
  std::vector<Scalar> coeffs_;
};

using VectorTuple = std::vector<std::vector<Scalar>>;

// A(x^1, ..., x^n). Throws std::invalid_argument on a shape mismatch.
Scalar evaluate(const FormTensor& a, const VectorTuple& xs);

// The vector g with g_k = A(x^1, .., e_k (in slot), .., x^n); xs[slot] is ignored.
std::vector<Scalar> contract_except(const FormTensor& a, const VectorTuple& xs, std::size_t slot);

struct OpNormOptions {
  // Maximum number of enumerated extreme-point tuples.
  std::uint64_t enumeration_budget = std::uint64_t{1} << 24;
  bool allow_heuristic = true;
  // Use alternating maximization even where enumeration is exact.
  bool force_heuristic = false;
  AscentOptions ascent;
};

struct OpNormResult {
  double value = 0.0;
  bool exact = false;
  VectorTuple witness;
};

// sup |A(x^1, ..., x^n)| over the product of the domain unit balls.
//
// Exact when every slot but one has finitely many relevant extreme points
// (real l_inf sign vectors, or basis vectors of any l_1 ball) and the product
// of their counts fits the budget; the remaining slot is maximized in closed
// form. Otherwise multi-start alternating maximization, which only yields a
// lower bound (exact = false). Throws std::runtime_error when the budget is
// exceeded and the heuristic is disabled.
OpNormResult op_norm(const FormTensor& a, const OpNormOptions& opts = {});

// (beta o a)_jk = sum_l beta_jl a_lk.
Matrix compose_beta(const Matrix& beta, const Matrix& a);

// A viewed as a k-linear map into (n-k)-linear forms.
class CurriedForm {
 public:
  CurriedForm(FormTensor form, std::size_t head_order);

  std::size_t head_order() const { return head_; }
  std::size_t tail_order() const { return form_.order() - head_; }
  std::vector<SpaceSpec> head_domains() const;
  std::vector<SpaceSpec> tail_domains() const;

  // A_k(x^1, ..., x^k) as a tail form.
  FormTensor apply(const VectorTuple& head) const;
  const FormTensor& uncurry() const { return form_; }

 private:
  FormTensor form_;
  std::size_t head_;
};

// Throws std::invalid_argument unless 1 <= k < order.
CurriedForm curry(const FormTensor& a, std::size_t k);

}  // namespace multisum

#endif  // MULTISUM_FORMS_HPP
