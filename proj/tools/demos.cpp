#include "demos.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "multisum/forms.hpp"
#include "multisum/norms.hpp"
#include "multisum/rademacher.hpp"
#include "multisum/spaces.hpp"
#include "multisum/summing.hpp"
#include "multisum/verify.hpp"

using namespace multisum;

namespace {

const Exponent kInf = Exponent::infinity();

Exponent E(double v) { return Exponent::from_value(v); }

bool near(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

FormTensor bilinear(const std::vector<std::vector<Scalar>>& rows, Field f = Field::real) {
  return FormTensor::from_matrix(Matrix::from_rows(rows, f));
}

FormTensor littlewood(Field f = Field::real) { return bilinear({{1.0, 1.0}, {1.0, -1.0}}, f); }

VectorSeq seq(std::size_t dim, Exponent s, std::vector<std::vector<Scalar>> v) {
  return VectorSeq(SpaceSpec(dim, s), Field::real, std::move(v));
}

// (e_1, e_2) in l_inf^2 for both slots.
TestFamily basis_pair(const FormTensor& a) {
  TestFamily fam;
  for (const auto& d : a.domains()) fam.columns.emplace_back(d, a.field(), std::vector<std::vector<Scalar>>{{1.0, 0.0}, {0.0, 1.0}});
  return fam;
}

ExponentTuple T(const char* s) { return ExponentTuple::parse(s); }

struct Demo {
  const char* name;
  std::function<bool(std::string&)> run;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

bool value_is(std::string& detail, double got, double want, double tol = 1e-12) {
  detail = "got " + fmt(got) + ", want " + fmt(want);
  return near(got, want, tol);
}

std::vector<Demo> demos() {
  const double r2 = std::sqrt(2.0);
  return {
      {"interpolation at theta 1/2",
       [](std::string& d) {
         const auto e = interpolation_exponents(0.5);
         d = "p = " + e.p.to_string() + ", q = " + e.q.to_string();
         return e.p == Exponent::parse("4/3") && e.q == Exponent::parse("4/3");
       }},
      {"mixed norm l1(l2) of [[1,2],[3,4]]",
       [](std::string& d) {
         const auto m = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}}, Field::real);
         return value_is(d, mixed_norm(m, E(1), E(2)), std::sqrt(10.0) + 2.0 * std::sqrt(5.0));
       }},
      {"weak l2 of (e1, e1) in l_inf^2",
       [=](std::string& d) {
         return value_is(d, weak_lp_norm(seq(2, kInf, {{1.0, 0.0}, {1.0, 0.0}}), E(2)).value, r2);
       }},
      {"weak l1 of (e1, e2) in real l1^2",
       [](std::string& d) {
         return value_is(d, weak_lp_norm(seq(2, E(1), {{1.0, 0.0}, {0.0, 1.0}}), E(1)).value, 2.0);
       }},
      {"Littlewood form at (1,1), (1,0)",
       [](std::string& d) { return value_is(d, std::abs(evaluate(littlewood(), {{1.0, 1.0}, {1.0, 0.0}})), 2.0); }},
      {"operator norm of Littlewood form, real",
       [](std::string& d) {
         const auto r = op_norm(littlewood());
         return value_is(d, r.value, 2.0) && r.exact;
       }},
      {"operator norm of Littlewood form, complex",
       [=](std::string& d) { return value_is(d, op_norm(littlewood(Field::complex)).value, 2.0 * r2, 1e-9); }},
      {"operator norm of all-ones 2x2",
       [](std::string& d) { return value_is(d, op_norm(bilinear({{1.0, 1.0}, {1.0, 1.0}})).value, 4.0); }},
      {"beta composition",
       [](std::string& d) {
         const auto c = compose_beta(Matrix::from_rows({{1.0, 1.0}, {0.0, 1.0}}, Field::real), Matrix::identity(2));
         const auto want = Matrix::from_rows({{1.0, 1.0}, {0.0, 1.0}}, Field::real);
         d = "entrywise comparison";
         return std::equal(c.data().begin(), c.data().end(), want.data().begin());
       }},
      {"curried Littlewood tail at e2",
       [](std::string& d) {
         return value_is(d, op_norm(curry(littlewood(), 1).apply({{0.0, 1.0}})).value, 2.0);
       }},
      {"Rad2 of (e1, e2) in l_inf^2",
       [](std::string& d) { return value_is(d, rad_p_norm(seq(2, kInf, {{1.0, 0.0}, {0.0, 1.0}}), E(2)).value, 1.0); }},
      {"Rad2 of (e1, e2) in l2^2",
       [=](std::string& d) { return value_is(d, rad_p_norm(seq(2, E(2), {{1.0, 0.0}, {0.0, 1.0}}), E(2)).value, r2); }},
      {"contraction with alpha (1,0)",
       [](std::string& d) {
         const double alphas[] = {1.0, 0.0};
         const auto c = contraction_check(seq(1, E(2), {{1.0}, {1.0}}), alphas, E(2));
         return value_is(d, c.contracted, 1.0) && c.pass;
       }},
      {"Kahane ratio of scalars (1,1), p 2, q 1",
       [=](std::string& d) { return value_is(d, kahane_ratio(seq(1, E(2), {{1.0}, {1.0}}), E(2), E(1)), r2); }},
      {"summing ratio of Littlewood form at (1;2,2)",
       [](std::string& d) {
         const auto a = littlewood();
         return value_is(d, summing_lower_bound(a, T("1;2,2"), basis_pair(a)).ratio, 2.0);
       }},
      {"summing ratio of identity at (1;1,1)",
       [](std::string& d) {
         const auto a = FormTensor::from_matrix(Matrix::identity(2));
         return value_is(d, summing_lower_bound(a, T("1;1,1"), basis_pair(a)).ratio, 2.0);
       }},
      {"search on Littlewood form at (1;2,2)",
       [](std::string& d) {
         const double got = random_family_search(littlewood(), T("1;2,2")).ratio;
         d = "got " + fmt(got) + ", want at least 2";
         return got >= 2.0 - 1e-12;
       }},
      {"search on 3x3 identity at (1;1,1)",
       [](std::string& d) {
         const double got = random_family_search(FormTensor::from_matrix(Matrix::identity(3)), T("1;1,1")).ratio;
         d = "got " + fmt(got) + ", want at least 3";
         return got >= 3.0 - 1e-12;
       }},
      {"factor (1,1) into two l2 factors",
       [=](std::string& d) {
         const std::vector<Scalar> alpha{1.0, 1.0};
         const auto f = factor_sequence(alpha, E(1), {E(2), E(2)});
         return value_is(d, lp_norm(f[0], E(2)) * lp_norm(f[1], E(2)), 2.0);
       }},
      {"factor (4,0) into two l2 factors",
       [](std::string& d) {
         const std::vector<Scalar> alpha{4.0, 0.0};
         const auto f = factor_sequence(alpha, E(1), {E(2), E(2)});
         d = "factors " + fmt(f[0][0].real()) + ", " + fmt(f[1][0].real());
         return near(f[0][0].real(), 2.0) && near(f[1][0].real(), 2.0) && f[0][1] == 0.0;
       }},
      {"lift of identity diagonal from (2;2,2) to (1;1,2)",
       [=](std::string& d) {
         const auto a = FormTensor::from_matrix(Matrix::identity(2));
         const auto lift = lift_family(a, basis_pair(a), T("2;2,2"), T("1;1,2"));
         return value_is(d, lift.source.ratio, r2) && lift.derived.ratio >= lift.source.ratio - 1e-10;
       }},
      {"4/3 check on Littlewood form",
       [=](std::string& d) {
         const auto r = verify_littlewood_43(littlewood());
         return value_is(d, r.ratio, r2) && r.status == Status::pass;
       }},
      {"4/3 check on all-ones 2x2",
       [](std::string& d) {
         const auto r = verify_littlewood_43(bilinear({{1.0, 1.0}, {1.0, 1.0}}));
         return value_is(d, r.ratio, std::pow(4.0, 0.75) / 4.0) && r.status == Status::pass;
       }},
      {"4/3 check on 2x2 identity",
       [](std::string& d) {
         const auto r = verify_littlewood_43(FormTensor::from_matrix(Matrix::identity(2)));
         return value_is(d, r.ratio, std::pow(2.0, 0.75) / 2.0) && r.status == Status::pass;
       }},
      {"extended check, beta identity, p 4/3",
       [](std::string& d) {
         const auto a = littlewood(Field::complex);
         const auto r = verify_extended_littlewood(a, Matrix::identity(2, Field::complex), Exponent::parse("4/3"));
         const auto classical = verify_littlewood_43(a);
         return value_is(d, r.lhs, classical.lhs) && r.status == Status::pass;
       }},
      {"extended check, beta identity, p 1",
       [=](std::string& d) {
         const auto r = verify_extended_littlewood(littlewood(Field::complex), Matrix::identity(2, Field::complex), E(1));
         return value_is(d, r.lhs, 2.0 * r2) && r.status == Status::pass;
       }},
      {"l1(l2) check on Littlewood form",
       [=](std::string& d) {
         const auto r = verify_general_littlewood(littlewood());
         return value_is(d, r.ratio, r2) && r.status == Status::pass;
       }},
      {"l1(l2) check on all-ones 2x2",
       [=](std::string& d) {
         const auto r = verify_general_littlewood(bilinear({{1.0, 1.0}, {1.0, 1.0}}));
         return value_is(d, r.lhs, 2.0 * r2) && r.status == Status::pass;
       }},
      {"coefficient ratio of all-ones 2x2x2",
       [](std::string& d) {
         const SpaceSpec s(2, kInf);
         return value_is(d, verify_bh(FormTensor({s, s, s}, Field::real, std::vector<Scalar>(8, 1.0))).ratio, 0.5);
       }},
      {"coefficient ratio of diagonal 2x2x2",
       [](std::string& d) {
         const SpaceSpec s(2, kInf);
         std::vector<Scalar> c(8, 0.0);
         c[0] = c[7] = 1.0;
         return value_is(d, verify_bh(FormTensor({s, s, s}, Field::real, c)).ratio, std::pow(2.0, -1.0 / 3.0));
       }},
      {"Rad2 domination equality for Littlewood form",
       [](std::string& d) {
         const auto a = littlewood();
         const auto r = verify_defant_voigt(a, basis_pair(a));
         return value_is(d, r.lhs, r.rhs) && r.status == Status::pass;
       }},
      {"almost summing ratio of 2x2 identity",
       [=](std::string& d) {
         const auto a = FormTensor::from_matrix(Matrix::identity(2));
         return value_is(d, almost_summing_ratio(a, basis_pair(a)).ratio, r2);
       }},
      {"tensor weak norm of (e1, e1)",
       [](std::string& d) {
         const auto x = seq(2, kInf, {{1.0, 0.0}});
         return value_is(d, tensor_weak_norm_estimate(x, x, E(1)).lower, 1.0, 1e-9);
       }},
      {"tensor weak norm of (e1, e2) pairs in l1",
       [](std::string& d) {
         const auto x = seq(2, E(1), {{1.0, 0.0}, {0.0, 1.0}});
         const double got = tensor_weak_norm_estimate(x, x, E(1)).lower;
         d = "got " + fmt(got) + ", want at least 2";
         return got >= 2.0 - 1e-9;
       }},
      {"DV2 region at (1;1,1)", [](std::string& d) {
         d = "admissible";
         return dv2_admissible(T("1;1,1"));
       }},
      {"inclusion (1;1,2) into (2;2,2)", [](std::string& d) {
         d = "admissible";
         return inclusion_admissible(T("1;1,2"), T("2;2,2"));
       }},
  };
}

}  // namespace

bool run_demos(std::ostream& out) {
  bool all = true;
  for (const auto& demo : demos()) {
    std::string detail;
    bool ok = false;
    try {
      ok = demo.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("threw: ") + e.what();
    }
    all = all && ok;
    out << (ok ? "PASS " : "FAIL ") << demo.name << " (" << detail << ")\n";
  }
  return all;
}
