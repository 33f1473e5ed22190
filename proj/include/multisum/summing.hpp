#ifndef MULTISUM_SUMMING_HPP
#define MULTISUM_SUMMING_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "multisum/forms.hpp"
#include "multisum/norms.hpp"
#include "multisum/spaces.hpp"

namespace multisum {

// n parallel sequences (x_j^1), ..., (x_j^n) of a common length J.
struct TestFamily {
  std::vector<VectorSeq> columns;

  std::size_t length() const { return columns.empty() ? 0 : columns.front().size(); }
  // Throws std::invalid_argument unless the columns match the form's domains
  // and share one length.
  void validate_for(const FormTensor& a) const;
};

struct RatioCertificate {
  double lhs = 0.0;
  std::vector<NormValue> rhs_norms;
  double ratio = 0.0;
  TestFamily family;
  ExponentTuple exponents;

  // True when every weak norm was exact, so ratio is a lower bound of the
  // summing norm.
  bool certified() const;
};

// (A(x_j^1, ..., x_j^n))_j
std::vector<Scalar> value_sequence(const FormTensor& a, const TestFamily& fam);

// ||(A(x_j))_j||_p / prod_i ||(x_j^i)_j||_{w, q_i}. A zero denominator gives ratio 0.
RatioCertificate summing_lower_bound(const FormTensor& a, const ExponentTuple& exps,
                                     const TestFamily& fam, const WeakNormOptions& weak = {});

struct SearchOptions {
  // Number of random families; structured candidates come on top.
  std::uint64_t budget = 1000;
  std::uint64_t seed = 0x5eed;
  std::size_t max_length = 16;
  unsigned threads = 1;
  WeakNormOptions weak;
};

// Best certificate over structured families (basis grid, diagonal, largest
// coefficient, operator-norm witness) followed by seeded Gaussian families.
// Ties go to the earliest candidate.
RatioCertificate random_family_search(const FormTensor& a, const ExponentTuple& exps,
                                      const SearchOptions& opts = {});

// Splits alpha into n sequences with pointwise product alpha and
// prod_k ||alpha^k||_{r_k} = ||alpha||_r. Requires sum 1/r_k = 1/r; the phase
// of alpha goes to the first factor.
std::vector<std::vector<Scalar>> factor_sequence(std::span<const Scalar> alpha, Exponent r,
                                                 const std::vector<Exponent>& rs);

struct LiftResult {
  TestFamily family;
  RatioCertificate source;
  RatioCertificate derived;
  std::vector<Scalar> alpha;
  bool pass = false;
};

// Builds from fam a family whose (q; qs) ratio is at least the (p; ps) ratio
// of fam. Requires q <= p, q_i <= p_i and sum 1/q_i - 1/q <= sum 1/p_i - 1/p.
LiftResult lift_family(const FormTensor& a, const TestFamily& fam, const ExponentTuple& source,
                       const ExponentTuple& target, const WeakNormOptions& weak = {});

struct TensorWeakEstimate {
  // Attained by forms whose operator norm was computed exactly.
  double lower = 0.0;
  // Best value over all tried forms, including ascent with heuristic norms.
  double heuristic = 0.0;
};

// sup over bilinear B with ||B|| <= 1 of (sum_j |B(x_j, y_j)|^p)^(1/p).
// Requires dim(x) * dim(y) <= 64; throws std::invalid_argument otherwise.
TensorWeakEstimate tensor_weak_norm_estimate(const VectorSeq& xs, const VectorSeq& ys, Exponent p,
                                             std::uint64_t seed = 0x5eed,
                                             std::size_t samples = 64);

enum class CoincidenceRule { dv2, inclusion, cotype_exchange, lifting };

// sum 1/p_i - 1/p >= n - 1.
bool dv2_admissible(const ExponentTuple& e);
// Pi_(q; qs) is contained in Pi_(p; ps): q <= p, q_i <= p_i and
// sum 1/q_i - 1/q <= sum 1/p_i - 1/p.
bool inclusion_admissible(const ExponentTuple& from, const ExponentTuple& to);
// p <= q, 1 <= q_i <= 2 and sum 1/q_i - 1/q = k - 1/p over the k exchanged slots.
bool cotype_exchange_admissible(Exponent p, Exponent q, const std::vector<Exponent>& qs);
// Lifting of a (1; r, r) bilinear coincidence to order n: (1; r, ..., r) for
// even n, (r; r, ..., r) for odd n, with 1 <= r <= 2.
bool lifting_admissible(std::size_t n, const ExponentTuple& e);

// Dispatch by rule. For inclusion, second is the target tuple; for the
// cotype rule, first.p is p, second.p is q and second.qs are the q_i.
bool coincidence_region(CoincidenceRule rule, const ExponentTuple& first,
                        const ExponentTuple& second = {});

}  // namespace multisum

#endif  // MULTISUM_SUMMING_HPP
