#ifndef MULTISUM_VERIFY_HPP
#define MULTISUM_VERIFY_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "multisum/forms.hpp"
#include "multisum/rademacher.hpp"
#include "multisum/spaces.hpp"
#include "multisum/summing.hpp"

namespace multisum {

// reported: the check computes a ratio but asserts no bound.
enum class Status { pass, fail, inconclusive, reported };

std::string to_string(Status s);

struct VerificationReport {
  std::string check;
  Field field = Field::real;
  std::optional<Exponent> p;
  std::optional<Exponent> q;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double bound = 0.0;
  bool exact_norm = true;
  Status status = Status::reported;
  nlohmann::ordered_json witness = nlohmann::ordered_json::object();
};

// lhs <= rhs with the slack policy: exact right-hand sides get a 1e-12
// relative allowance; heuristic ones pass below rhs, are inconclusive up to
// rhs * (1 + tolerance) and fail beyond.
Status judge(double lhs, double rhs, bool exact, double tolerance);
// The worse of two statuses; fail > inconclusive > pass > reported.
Status combine(Status a, Status b);

struct VerifyOptions {
  ConstantsConfig constants;
  OpNormOptions opnorm;
  bool allow_real_experimental = false;
  unsigned threads = 1;
};

// (sum |a_jk|^{4/3})^{3/4} <= c ||A|| with c = littlewood_real or kg_complex.
VerificationReport verify_littlewood_43(const FormTensor& a, const VerifyOptions& opts = {});

// ||beta o a||_{l_p(l_q)} <= kg_complex ||A|| ||beta||_{l_inf(l_2)} with
// 1/q = 1/2 + 1/p'. Real forms need allow_real_experimental and are only
// reported.
VerificationReport verify_extended_littlewood(const FormTensor& a, const Matrix& beta, Exponent p,
                                              const VerifyOptions& opts = {});

// sum_k (sum_j |a_jk|^2)^{1/2} <= K_G ||A||.
VerificationReport verify_general_littlewood(const FormTensor& a, const VerifyOptions& opts = {});

// Coefficient norm at 2n/(n+1) over ||A||; asserted only for n = 2.
VerificationReport verify_bh(const FormTensor& a, const VerifyOptions& opts = {});

// sum_j |A(x_j)| <= ||A|| prod_i Rad_2((x_j^i)), and the weaker form with
// weak l_1 norms in place of Rad_2.
VerificationReport verify_defant_voigt(const FormTensor& a, const TestFamily& fam,
                                       const VerifyOptions& opts = {});

// Rad_2 of the scalar values over prod weak l_2 norms.
RatioCertificate almost_summing_ratio(const FormTensor& a, const TestFamily& fam,
                                      unsigned threads = 1);
// Curried variant: the values A_k(x_j^1, ..., x_j^k) are tail forms measured
// in operator norm; fam covers the head slots. lhs_exact reports whether every
// tail norm was exact.
RatioCertificate almost_summing_ratio(const CurriedForm& c, const TestFamily& head_fam,
                                      bool* lhs_exact = nullptr, const OpNormOptions& on = {});
VerificationReport verify_almost_summing(const FormTensor& a, const TestFamily& fam,
                                         const VerifyOptions& opts = {});
VerificationReport verify_almost_summing(const CurriedForm& c, const TestFamily& head_fam,
                                         const VerifyOptions& opts = {});

// lift_family packaged as a report: lhs is the source ratio, rhs the derived one.
VerificationReport verify_inclusion(const FormTensor& a, const TestFamily& fam,
                                    const ExponentTuple& source, const ExponentTuple& target);

// Best (p; 2, 1) ratio found by search on a bilinear form over l_p x l_q,
// divided by ||A||. Reported only.
VerificationReport p21_experiment(const FormTensor& a, const SearchOptions& search,
                                  const VerifyOptions& opts = {});

}  // namespace multisum

#endif  // MULTISUM_VERIFY_HPP
