#include "multisum/verify.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace multisum {

namespace {

using json = nlohmann::ordered_json;

constexpr double kExactSlack = 1e-12;

void require_bilinear_linf(const FormTensor& a, const char* check) {
  if (a.order() != 2) throw std::invalid_argument(std::string(check) + " needs a bilinear form");
  for (const auto& d : a.domains()) {
    if (!d.exponent.is_infinite()) {
      throw std::invalid_argument(std::string(check) + " needs l_inf domains");
    }
  }
}

void require_linf(const FormTensor& a, const char* check) {
  for (const auto& d : a.domains()) {
    if (!d.exponent.is_infinite()) {
      throw std::invalid_argument(std::string(check) + " needs l_inf domains");
    }
  }
}

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

json norm_json(const OpNormResult& r) { return json{{"value", r.value}, {"exact", r.exact}}; }

double coefficient_norm(const FormTensor& a, Exponent t) { return lp_norm(a.coeffs(), t); }

// Bound-times-norm check shared by the coefficient inequalities.
VerificationReport coefficient_report(const std::string& check, const FormTensor& a, Exponent t,
                                      double bound, const VerifyOptions& opts) {
  const auto norm = op_norm(a, opts.opnorm);
  VerificationReport r;
  r.check = check;
  r.field = a.field();
  r.p = t;
  r.lhs = coefficient_norm(a, t);
  r.bound = bound;
  r.rhs = bound * norm.value;
  r.ratio = safe_ratio(r.lhs, norm.value);
  r.exact_norm = norm.exact;
  r.status = judge(r.lhs, r.rhs, norm.exact, opts.constants.tolerance);
  r.witness["op_norm"] = norm_json(norm);
  return r;
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::inconclusive:
      return "inconclusive";
    case Status::reported:
      return "reported";
  }
  return "reported";
}

Status judge(double lhs, double rhs, bool exact, double tolerance) {
  if (exact) return lhs <= rhs * (1.0 + kExactSlack) ? Status::pass : Status::fail;
  if (lhs <= rhs) return Status::pass;
  return lhs <= rhs * (1.0 + tolerance) ? Status::inconclusive : Status::fail;
}

Status combine(Status a, Status b) {
  auto rank = [](Status s) {
    switch (s) {
      case Status::fail:
        return 3;
      case Status::inconclusive:
        return 2;
      case Status::pass:
        return 1;
      case Status::reported:
        return 0;
    }
    return 0;
  };
  return rank(a) >= rank(b) ? a : b;
}

VerificationReport verify_littlewood_43(const FormTensor& a, const VerifyOptions& opts) {
  require_bilinear_linf(a, "littlewood");
  opts.constants.validate();
  const double bound =
      a.field() == Field::real ? opts.constants.littlewood_real : opts.constants.kg_complex;
  return coefficient_report("littlewood", a, Exponent::parse("4/3"), bound, opts);
}

VerificationReport verify_extended_littlewood(const FormTensor& a, const Matrix& beta, Exponent p,
                                              const VerifyOptions& opts) {
  require_bilinear_linf(a, "extended");
  opts.constants.validate();
  if (a.field() == Field::real && !opts.allow_real_experimental) {
    throw std::invalid_argument("extended check is for complex forms; real needs the experimental flag");
  }
  const Exponent q = extended_littlewood_inner(p);
  const Matrix composed = compose_beta(beta, a.as_matrix());
  const auto norm = op_norm(a, opts.opnorm);
  const double beta_norm = mixed_norm(beta, Exponent::infinity(), Exponent::from_value(2));

  VerificationReport r;
  r.check = "extended";
  r.field = a.field();
  r.p = p;
  r.q = q;
  r.lhs = mixed_norm(composed, p, q);
  r.bound = opts.constants.kg_complex;
  r.rhs = r.bound * norm.value * beta_norm;
  r.ratio = safe_ratio(r.lhs, norm.value * beta_norm);
  r.exact_norm = norm.exact;
  r.status = a.field() == Field::complex ? judge(r.lhs, r.rhs, norm.exact, opts.constants.tolerance)
                                         : Status::reported;
  r.witness["op_norm"] = norm_json(norm);
  r.witness["beta_linf_l2"] = beta_norm;
  if (a.field() == Field::real) r.witness["experimental"] = true;
  return r;
}

VerificationReport verify_general_littlewood(const FormTensor& a, const VerifyOptions& opts) {
  require_bilinear_linf(a, "general");
  opts.constants.validate();
  const auto norm = op_norm(a, opts.opnorm);
  VerificationReport r;
  r.check = "general";
  r.field = a.field();
  r.p = Exponent::from_value(1);
  r.q = Exponent::from_value(2);
  r.lhs = mixed_norm(a.as_matrix(), *r.p, *r.q);
  r.bound = opts.constants.grothendieck(a.field());
  r.rhs = r.bound * norm.value;
  r.ratio = safe_ratio(r.lhs, norm.value);
  r.exact_norm = norm.exact;
  r.status = judge(r.lhs, r.rhs, norm.exact, opts.constants.tolerance);
  r.witness["op_norm"] = norm_json(norm);
  return r;
}

VerificationReport verify_bh(const FormTensor& a, const VerifyOptions& opts) {
  const std::size_t n = a.order();
  if (n < 2) throw std::invalid_argument("bh needs order n >= 2");
  require_linf(a, "bh");
  opts.constants.validate();
  // 2n/(n+1) in reciprocal form: (n+1)/(2n).
  const Exponent t = Exponent::from_reciprocal(static_cast<double>(n + 1) / static_cast<double>(2 * n));
  if (n == 2) {
    auto r = verify_littlewood_43(a, opts);
    r.check = "bh";
    r.witness["order"] = n;
    return r;
  }
  auto r = coefficient_report("bh", a, t, 0.0, opts);
  r.rhs = 0.0;
  r.status = Status::reported;
  r.witness["order"] = n;
  return r;
}

VerificationReport verify_defant_voigt(const FormTensor& a, const TestFamily& fam,
                                       const VerifyOptions& opts) {
  opts.constants.validate();
  const auto values = value_sequence(a, fam);
  const auto norm = op_norm(a, opts.opnorm);
  double lhs = 0.0;
  for (const auto& v : values) lhs += std::abs(v);

  double rad_product = 1.0;
  double weak_product = 1.0;
  bool weak_exact = true;
  json rads = json::array();
  json weaks = json::array();
  for (const auto& col : fam.columns) {
    const double rad = rad_p_norm(col, Exponent::from_value(2), RadExact{}, opts.threads).value;
    const auto weak = weak_lp_norm(col, Exponent::from_value(1));
    rad_product *= rad;
    weak_product *= weak.value;
    weak_exact = weak_exact && weak.exact;
    rads.push_back(rad);
    weaks.push_back(json{{"value", weak.value}, {"exact", weak.exact}});
  }

  VerificationReport r;
  r.check = "dv";
  r.field = a.field();
  r.p = Exponent::from_value(1);
  r.lhs = lhs;
  r.bound = norm.value;
  r.rhs = norm.value * rad_product;
  r.ratio = safe_ratio(lhs, rad_product);
  r.exact_norm = norm.exact;
  const double classical_rhs = norm.value * weak_product;
  const Status rad_status = judge(lhs, r.rhs, norm.exact, opts.constants.tolerance);
  const Status weak_status = judge(lhs, classical_rhs, norm.exact && weak_exact, opts.constants.tolerance);
  r.status = combine(rad_status, weak_status);
  r.witness["op_norm"] = norm_json(norm);
  r.witness["rad2"] = rads;
  r.witness["weak_l1"] = weaks;
  r.witness["classical_rhs"] = classical_rhs;
  r.witness["rad2_status"] = to_string(rad_status);
  r.witness["weak_l1_status"] = to_string(weak_status);
  return r;
}

RatioCertificate almost_summing_ratio(const FormTensor& a, const TestFamily& fam, unsigned threads) {
  const auto values = value_sequence(a, fam);
  std::vector<std::vector<Scalar>> scalars;
  for (const auto& v : values) scalars.push_back({v});
  const VectorSeq seq(SpaceSpec(1, Exponent::infinity()), a.field(), scalars);

  RatioCertificate cert;
  cert.family = fam;
  cert.exponents.p = Exponent::from_value(2);
  cert.lhs = rad_p_norm(seq, Exponent::from_value(2), RadExact{}, threads).value;
  double denom = 1.0;
  for (const auto& col : fam.columns) {
    const auto w = weak_lp_norm(col, Exponent::from_value(2));
    cert.exponents.qs.push_back(Exponent::from_value(2));
    cert.rhs_norms.push_back(w);
    denom *= w.value;
  }
  cert.ratio = safe_ratio(cert.lhs, denom);
  return cert;
}

RatioCertificate almost_summing_ratio(const CurriedForm& c, const TestFamily& head_fam,
                                      bool* lhs_exact, const OpNormOptions& on) {
  const FormTensor& a = c.uncurry();
  const std::size_t k = c.head_order();
  if (head_fam.columns.size() != k) throw std::invalid_argument("family must cover the head slots");
  for (std::size_t i = 0; i < k; ++i) {
    head_fam.columns[i].validate();
    if (head_fam.columns[i].space.dim != a.domains()[i].dim || head_fam.columns[i].size() != head_fam.length()) {
      throw std::invalid_argument("family column does not match the head domain");
    }
  }
  const std::size_t J = head_fam.length();
  std::vector<FormTensor> tails;
  for (std::size_t j = 0; j < J; ++j) {
    VectorTuple head;
    for (std::size_t i = 0; i < k; ++i) head.push_back(head_fam.columns[i].vectors[j]);
    tails.push_back(c.apply(head));
  }
  const auto tail_domains = c.tail_domains();
  std::atomic<bool> exact{true};
  const auto rad = rademacher_average(J, Exponent::from_value(2), RadExact{}, [&](SignPattern eps) {
    std::vector<Scalar> coeffs(tails.front().size());
    for (std::size_t j = 0; j < J; ++j) {
      const auto tc = tails[j].coeffs();
      for (std::size_t f = 0; f < coeffs.size(); ++f) coeffs[f] += static_cast<double>(eps[j]) * tc[f];
    }
    const auto norm = op_norm(FormTensor(tail_domains, a.field(), std::move(coeffs)), on);
    if (!norm.exact) exact = false;
    return norm.value;
  });
  if (lhs_exact != nullptr) *lhs_exact = exact;

  RatioCertificate cert;
  cert.family = head_fam;
  cert.exponents.p = Exponent::from_value(2);
  cert.lhs = rad.value;
  double denom = 1.0;
  for (const auto& col : head_fam.columns) {
    const auto w = weak_lp_norm(col, Exponent::from_value(2));
    cert.exponents.qs.push_back(Exponent::from_value(2));
    cert.rhs_norms.push_back(w);
    denom *= w.value;
  }
  cert.ratio = safe_ratio(cert.lhs, denom);
  return cert;
}

namespace {

VerificationReport almost_report(const RatioCertificate& cert, Field field, bool lhs_exact) {
  VerificationReport r;
  r.check = "almost";
  r.field = field;
  r.p = Exponent::from_value(2);
  r.q = Exponent::from_value(2);
  r.lhs = cert.lhs;
  double denom = 1.0;
  json weaks = json::array();
  for (const auto& w : cert.rhs_norms) {
    denom *= w.value;
    weaks.push_back(json{{"value", w.value}, {"exact", w.exact}});
  }
  r.rhs = denom;
  r.ratio = cert.ratio;
  r.exact_norm = lhs_exact && cert.certified();
  r.status = Status::reported;
  r.witness["weak_l2"] = weaks;
  r.witness["family_length"] = cert.family.length();
  return r;
}

}  // namespace

VerificationReport verify_almost_summing(const FormTensor& a, const TestFamily& fam,
                                         const VerifyOptions& opts) {
  return almost_report(almost_summing_ratio(a, fam, opts.threads), a.field(), true);
}

VerificationReport verify_almost_summing(const CurriedForm& c, const TestFamily& head_fam,
                                         const VerifyOptions& opts) {
  bool exact = true;
  const auto cert = almost_summing_ratio(c, head_fam, &exact, opts.opnorm);
  auto r = almost_report(cert, c.uncurry().field(), exact);
  r.witness["head_order"] = c.head_order();
  return r;
}

VerificationReport verify_inclusion(const FormTensor& a, const TestFamily& fam,
                                    const ExponentTuple& source, const ExponentTuple& target) {
  const auto lift = lift_family(a, fam, source, target);
  VerificationReport r;
  r.check = "inclusion";
  r.field = a.field();
  r.p = source.p;
  r.q = target.p;
  r.lhs = lift.source.ratio;
  r.rhs = lift.derived.ratio;
  r.ratio = safe_ratio(lift.derived.ratio, lift.source.ratio);
  r.bound = 1.0;
  r.exact_norm = lift.source.certified() && lift.derived.certified();
  r.status = lift.pass ? Status::pass : Status::fail;
  r.witness["source"] = source.to_string();
  r.witness["target"] = target.to_string();
  json alpha = json::array();
  for (const auto& v : lift.alpha) alpha.push_back(json::array({v.real(), v.imag()}));
  r.witness["alpha"] = alpha;
  return r;
}

VerificationReport p21_experiment(const FormTensor& a, const SearchOptions& search,
                                  const VerifyOptions& opts) {
  if (a.order() != 2) throw std::invalid_argument("p21 experiment needs a bilinear form");
  const Exponent p = a.domains()[0].exponent;
  if (p < Exponent::from_value(1) || Exponent::from_value(2) < p) {
    throw std::invalid_argument("p21 experiment needs 1 <= p <= 2 on the first domain");
  }
  ExponentTuple exps;
  exps.p = p;
  exps.qs = {Exponent::from_value(2), Exponent::from_value(1)};
  const auto best = random_family_search(a, exps, search);
  const auto norm = op_norm(a, opts.opnorm);

  VerificationReport r;
  r.check = "p21";
  r.field = a.field();
  r.p = p;
  r.q = a.domains()[1].exponent;
  r.lhs = best.ratio;
  r.rhs = norm.value;
  r.ratio = safe_ratio(best.ratio, norm.value);
  r.exact_norm = norm.exact && best.certified();
  r.status = Status::reported;
  r.witness["op_norm"] = norm_json(norm);
  r.witness["family_length"] = best.family.length();
  return r;
}

}  // namespace multisum
