// Acceptance criteria 1-9: one PASS/FAIL line each; exit status 1 if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "coincidence_table.hpp"
#include "multisum/forms.hpp"
#include "multisum/norms.hpp"
#include "multisum/rademacher.hpp"
#include "multisum/random.hpp"
#include "multisum/spaces.hpp"
#include "multisum/summing.hpp"
#include "multisum/verify.hpp"
#include "oracles.hpp"

using namespace multisum;

namespace {

const Exponent kInf = Exponent::infinity();
Exponent E(double v) { return Exponent::from_value(v); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

FormTensor random_form(Rng& rng, const std::vector<std::size_t>& dims, Field f) {
  std::vector<SpaceSpec> domains;
  std::size_t count = 1;
  for (auto d : dims) {
    domains.emplace_back(d, kInf);
    count *= d;
  }
  return FormTensor(domains, f, gaussian_vector(rng, count, f));
}

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// (sum |a|^{4/3})^{3/4} straight from the coefficients.
double coeff_43(const FormTensor& a) {
  double s = 0.0;
  for (const auto& c : a.coeffs()) s += std::pow(std::abs(c), 4.0 / 3.0);
  return std::pow(s, 0.75);
}

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun cli(const std::string& args) {
  namespace fs = std::filesystem;
  const fs::path out = fs::temp_directory_path() / ("multisum_acceptance_" + std::to_string(::getpid()));
  const std::string cmd = std::string(MULTISUM_CLI) + " " + args + " > " + out.string() + " 2>/dev/null";
  CliRun r;
  const int status = std::system(cmd.c_str());
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  fs::remove(out);
  return r;
}

Outcome criterion1() {
  const auto a = FormTensor::from_matrix(Matrix::from_rows({{1.0, 1.0}, {1.0, -1.0}}, Field::real));
  const auto t0 = Clock::now();
  const auto norm = op_norm(a);
  const auto report = verify_littlewood_43(a);
  const double ms = ms_since(t0);
  Outcome o;
  o.pass = norm.exact && norm.value == 2.0 && std::abs(report.ratio - std::sqrt(2.0)) <= 1e-12 &&
           report.status == Status::pass && ms < 1.0;
  o.detail = "op_norm " + fmt("%.17g", norm.value) + (norm.exact ? " exact" : " heuristic") + ", ratio " +
             fmt("%.17g", report.ratio) + ", " + fmt("%.3f", ms) + " ms";
  return o;
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  const double bound = std::sqrt(2.0) + 1e-12;
  Outcome o;
  double worst = 0.0;
  int bad = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    Rng rng = make_rng(7, i);
    const auto a = random_form(rng, {uniform(rng, 1, 6), uniform(rng, 1, 6)}, Field::real);
    const auto r = verify_littlewood_43(a);
    const double oracle = coeff_43(a) / oracle::sign_norm(a);
    worst = std::max(worst, r.ratio);
    if (!r.exact_norm || r.ratio > bound || oracle > bound || std::abs(r.ratio - oracle) > 1e-12 * oracle) ++bad;
  }
  const auto run = cli("verify littlewood --random 500 --m 6 --seed 7");
  const double ms = ms_since(t0);
  o.pass = bad == 0 && run.code == 0 && ms < 10000.0;
  o.detail = "500 forms, worst ratio " + fmt("%.6f", worst) + ", " + std::to_string(bad) +
             " violations or oracle mismatches, cli exit " + std::to_string(run.code) + ", " + fmt("%.0f", ms) + " ms";
  return o;
}

Outcome criterion3() {
  const auto t0 = Clock::now();
  const Exponent grid[] = {E(1), E(1.2), Exponent::parse("4/3"), E(1.6), E(2)};
  VerifyOptions opts;
  int fails = 0;
  int inconclusive = 0;
  int q_mismatch = 0;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rng rng = make_rng(2024, i);
    const std::size_t m = uniform(rng, 1, 4);
    const auto a = random_form(rng, {m, m}, Field::complex);
    std::vector<std::vector<Scalar>> rows;
    for (std::size_t j = 0; j < m; ++j) rows.push_back(gaussian_vector(rng, m, Field::complex));
    const Exponent p = grid[i % 5];
    const auto r = verify_extended_littlewood(a, Matrix::from_rows(rows, Field::complex), p, opts);
    // 1/q = 1/2 + 1/p' computed here from the reciprocals.
    if (std::abs(r.q->reciprocal() - (0.5 + 1.0 - p.reciprocal())) > 1e-15) ++q_mismatch;
    worst = std::max(worst, r.ratio);
    if (r.status == Status::fail) ++fails;
    if (r.status == Status::inconclusive) ++inconclusive;
  }
  // beta = identity at p = 4/3 against the classical coefficient sum.
  int classical_bad = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng rng = make_rng(99, i);
    const std::size_t m = uniform(rng, 1, 4);
    const auto a = random_form(rng, {m, m}, Field::complex);
    const auto r = verify_extended_littlewood(a, Matrix::identity(m, Field::complex), Exponent::parse("4/3"), opts);
    if (std::abs(r.lhs - coeff_43(a)) > 1e-12 * r.lhs || r.status == Status::fail) ++classical_bad;
  }
  const auto lw = FormTensor::from_matrix(Matrix::from_rows({{1.0, 1.0}, {1.0, -1.0}}, Field::complex));
  const auto lw_report = verify_extended_littlewood(lw, Matrix::identity(2, Field::complex), Exponent::parse("4/3"));
  if (lw_report.status != Status::pass || std::abs(lw_report.lhs - 2.0 * std::sqrt(2.0)) > 1e-12) ++classical_bad;
  const double ms = ms_since(t0);
  Outcome o;
  o.pass = fails == 0 && q_mismatch == 0 && classical_bad == 0 && ms < 60000.0;
  o.detail = "1000 square instances, " + std::to_string(fails) + " fail, " + std::to_string(inconclusive) +
             " inconclusive, worst ratio " + fmt("%.6f", worst) + ", identity-beta mismatches " +
             std::to_string(classical_bad) + ", " + fmt("%.0f", ms) + " ms";
  return o;
}

Outcome criterion4() {
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double theta = k / 999.0;
    const auto e = interpolation_exponents(theta);
    const double dual_recip = 1.0 - e.p.reciprocal();
    worst = std::max(worst, std::abs(e.q.reciprocal() - 0.5 - dual_recip));
  }
  const auto half = interpolation_exponents(0.5);
  const Exponent four_thirds = Exponent::parse("4/3");
  Outcome o;
  o.pass = worst < 1e-15 && half.p.reciprocal() == four_thirds.reciprocal() &&
           half.q.reciprocal() == four_thirds.reciprocal() && half.p.reciprocal() == 0.75;
  o.detail = "max deviation " + fmt("%.3g", worst) + ", theta 1/2 gives " + half.p.to_string() + ", " +
             half.q.to_string();
  return o;
}

Outcome criterion5() {
  Rng rng(5);
  std::normal_distribution<double> g;
  double worst = 0.0;
  int inexact = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 12;
    const std::size_t m = 1 + (t / 12) % 4;
    const Exponent s = t % 2 ? kInf : E(1);
    std::vector<std::vector<Scalar>> v(n);
    std::vector<std::vector<double>> raw(n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        raw[j].push_back(g(rng));
        v[j].push_back(raw[j].back());
      }
    }
    const VectorSeq seq(SpaceSpec(m, s), Field::real, v);
    const auto weak = weak_lp_norm(seq, E(1));
    const auto rad = rad_p_norm(seq, kInf);
    const double brute = oracle::rad_norm(raw, s.is_infinite() ? INFINITY : 1.0, INFINITY);
    if (!weak.exact || !rad.exact) ++inexact;
    const double scale = 1.0 + weak.value;
    worst = std::max({worst, std::abs(rad.value - weak.value) / scale, std::abs(brute - weak.value) / scale});
  }
  Outcome o;
  o.pass = inexact == 0 && worst <= 1e-12;
  o.detail = "200 sequences, max relative gap " + fmt("%.3g", worst) + ", inexact " + std::to_string(inexact);
  return o;
}

Outcome criterion6() {
  int violations = 0;
  int inexact = 0;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng = make_rng(6, i);
    const std::size_t n = 2 + i % 2;
    std::vector<std::size_t> dims(n);
    for (auto& d : dims) d = uniform(rng, 1, n == 2 ? 4 : 3);
    const auto a = random_form(rng, dims, Field::real);
    const std::size_t length = uniform(rng, 1, 6);
    TestFamily fam;
    std::vector<std::vector<std::vector<double>>> raw(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::vector<Scalar>> v;
      for (std::size_t j = 0; j < length; ++j) {
        v.push_back(gaussian_vector(rng, dims[s], Field::real));
        std::vector<double> r;
        for (const auto& x : v.back()) r.push_back(x.real());
        raw[s].push_back(r);
      }
      fam.columns.emplace_back(a.domains()[s], Field::real, v);
    }
    const auto r = verify_defant_voigt(a, fam);
    double rhs = oracle::sign_norm(a);
    for (std::size_t s = 0; s < n; ++s) rhs *= oracle::rad_norm(raw[s], INFINITY, 2.0);
    if (!r.exact_norm) ++inexact;
    if (r.lhs > r.rhs * (1.0 + 1e-10) || r.lhs > rhs * (1.0 + 1e-10) || r.status != Status::pass) ++violations;
    worst = std::max(worst, r.lhs / r.rhs);
  }
  // Structured witnesses: Littlewood form and the 3-linear diagonal, each with
  // the basis family.
  double witness_gap = 0.0;
  {
    const auto lw = FormTensor::from_matrix(Matrix::from_rows({{1.0, 1.0}, {1.0, -1.0}}, Field::real));
    TestFamily fam;
    for (const auto& d : lw.domains())
      fam.columns.emplace_back(d, Field::real, std::vector<std::vector<Scalar>>{{1.0, 0.0}, {0.0, 1.0}});
    const auto r = verify_defant_voigt(lw, fam);
    witness_gap = std::max(witness_gap, std::abs(r.lhs - r.rhs));
  }
  {
    const SpaceSpec s(3, kInf);
    std::vector<Scalar> c(27, 0.0);
    for (std::size_t k = 0; k < 3; ++k) c[k * 9 + k * 3 + k] = 1.0;
    const FormTensor diag({s, s, s}, Field::real, c);
    TestFamily fam;
    for (int slot = 0; slot < 3; ++slot)
      fam.columns.emplace_back(s, Field::real,
                               std::vector<std::vector<Scalar>>{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
    const auto r = verify_defant_voigt(diag, fam);
    witness_gap = std::max(witness_gap, std::abs(r.lhs - r.rhs));
  }
  Outcome o;
  o.pass = violations == 0 && inexact == 0 && witness_gap <= 1e-12;
  o.detail = "200 instances, " + std::to_string(violations) + " violations, worst lhs/rhs " + fmt("%.6f", worst) +
             ", witness gap " + fmt("%.3g", witness_gap);
  return o;
}

double lp(const std::vector<Scalar>& v, double r) {
  if (std::isinf(r)) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0.0;
  for (const auto& x : v) s += std::pow(std::abs(x), r);
  return std::pow(s, 1.0 / r);
}

Outcome criterion7() {
  Rng rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_norm = 0.0;
  double worst_product = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t k = 1 + t % 4;
    std::vector<Exponent> rs;
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double rec = t % 9 == 0 ? 0.0 : u(rng);
      rs.push_back(Exponent::from_reciprocal(rec));
      total += rec;
    }
    const Exponent r = Exponent::from_reciprocal(total);
    const auto alpha = gaussian_vector(rng, 1 + t % 7, t % 2 ? Field::complex : Field::real);
    const auto factors = factor_sequence(alpha, r, rs);
    double prod_norm = 1.0;
    for (std::size_t i = 0; i < k; ++i) prod_norm *= lp(factors[i], rs[i].value());
    const double target = lp(alpha, r.value());
    worst_norm = std::max(worst_norm, std::abs(prod_norm - target) / std::max(1.0, target));
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      Scalar p = 1.0;
      for (const auto& f : factors) p *= f[j];
      worst_product = std::max(worst_product, std::abs(p - alpha[j]) / std::max(1.0, std::abs(alpha[j])));
    }
  }

  int lift_bad = 0;
  int uncertified = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t m1 = 1 + t % 3;
    const std::size_t m2 = 1 + (t / 3) % 3;
    const auto a = random_form(rng, {m1, m2}, Field::real);
    // Source reciprocals s_i, s_p; target adds d_i to each slot and at least
    // their sum to the outer reciprocal.
    ExponentTuple src;
    ExponentTuple dst;
    double s_sum = 0.0;
    double d_sum = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double s = 0.25 + 0.5 * u(rng);
      const double d = (1.0 - s) * u(rng);
      src.qs.push_back(Exponent::from_reciprocal(s));
      dst.qs.push_back(Exponent::from_reciprocal(s + d));
      s_sum += s;
      d_sum += d;
    }
    const double sp = std::min(1.0, s_sum) * u(rng);
    src.p = Exponent::from_reciprocal(sp);
    dst.p = Exponent::from_reciprocal(sp + d_sum + (s_sum - sp) * u(rng));
    TestFamily fam;
    const std::size_t length = 1 + t % 8;
    for (const auto& d : a.domains()) {
      std::vector<std::vector<Scalar>> v;
      for (std::size_t j = 0; j < length; ++j) v.push_back(gaussian_vector(rng, d.dim, Field::real));
      fam.columns.emplace_back(d, Field::real, v);
    }
    const auto lift = lift_family(a, fam, src, dst);
    if (!lift.source.certified() || !lift.derived.certified()) ++uncertified;
    if (lift.derived.ratio < lift.source.ratio - 1e-10) ++lift_bad;
  }
  Outcome o;
  o.pass = worst_norm <= 1e-12 && worst_product <= 1e-12 && lift_bad == 0 && uncertified == 0;
  o.detail = "factor norm gap " + fmt("%.3g", worst_norm) + ", product gap " + fmt("%.3g", worst_product) +
             "; lifts: " + std::to_string(lift_bad) + " decreases, " + std::to_string(uncertified) + " uncertified";
  return o;
}

Outcome criterion8() {
  Rng rng(8);
  int bad = 0;
  double worst_route = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t rows = uniform(rng, 1, 6);
    const std::size_t cols = uniform(rng, 1, 6);
    Matrix m(rows, cols, t % 2 ? Field::complex : Field::real);
    for (auto& v : m.data()) v = gaussian_scalar(rng, m.field());
    // ||M||_{l2(l1)} <= ||M^T||_{l1(l2)}
    const double lhs = mixed_norm(m, E(2), E(1));
    const double rhs = mixed_norm(m.transposed(), E(1), E(2));
    double direct_lhs = 0.0;
    for (std::size_t k = 0; k < cols; ++k) {
      double col = 0.0;
      for (std::size_t j = 0; j < rows; ++j) col += std::abs(m(j, k));
      direct_lhs += col * col;
    }
    direct_lhs = std::sqrt(direct_lhs);
    double direct_rhs = 0.0;
    for (std::size_t j = 0; j < rows; ++j) {
      double row = 0.0;
      for (std::size_t k = 0; k < cols; ++k) row += std::norm(m(j, k));
      direct_rhs += std::sqrt(row);
    }
    worst_route = std::max({worst_route, std::abs(lhs - direct_lhs) / std::max(1.0, lhs),
                            std::abs(rhs - direct_rhs) / std::max(1.0, rhs)});
    if (lhs > rhs + 1e-12 * std::max(1.0, rhs)) ++bad;
    // General exchange, outer exponent at least the inner one.
    const Exponent grid[] = {E(1), Exponent::parse("4/3"), E(2), E(3), kInf};
    const Exponent hi = grid[uniform(rng, 0, 4)];
    const Exponent lo = grid[uniform(rng, 0, 4)];
    const Exponent p = lo < hi ? hi : lo;
    const Exponent q = lo < hi ? lo : hi;
    if (mixed_norm(m, p, q) > mixed_norm(m.transposed(), q, p) * (1.0 + 1e-12) + 1e-300) ++bad;
  }
  Outcome o;
  o.pass = bad == 0 && worst_route <= 1e-12;
  o.detail = "10000 matrices, " + std::to_string(bad) + " violations, route gap " + fmt("%.3g", worst_route);
  return o;
}

Outcome criterion9() {
  using Json = nlohmann::json;
  int problems = 0;
  std::string notes;
  const std::string cmds[] = {"experiment bh --random 20 --n 3 --m 3 --seed 9",
                              "--budget 300 experiment p21 --random 6 --seed 9"};
  for (const auto& c : cmds) {
    const auto one = cli("--threads 1 " + c);
    const auto many = cli("--threads 4 " + c);
    const auto again = cli("--threads 1 " + c);
    if (one.code != 0 || one.out != many.out || one.out != again.out) {
      ++problems;
      notes += " [" + c + " not reproducible]";
      continue;
    }
    for (const auto& rep : Json::parse(one.out)["reports"]) {
      const double r = rep["ratio"].get<double>();
      if (!std::isfinite(r) || !(r > 0.0) || rep["status"] != "reported") ++problems;
    }
  }
  int table_bad = 0;
  for (const auto& c : kCoincidenceCases) {
    if (coincidence_region(c.rule, ExponentTuple::parse(c.first), ExponentTuple::parse(c.second)) != c.expected)
      ++table_bad;
  }
  Outcome o;
  o.pass = problems == 0 && table_bad == 0 && std::size(kCoincidenceCases) == 12;
  o.detail = "experiments " + std::to_string(problems) + " problems, coincidence table " +
             std::to_string(std::size(kCoincidenceCases) - table_bad) + "/" +
             std::to_string(std::size(kCoincidenceCases)) + notes;
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 Littlewood extremal equality", criterion1},
      {"2 classical 4/3 sweep", criterion2},
      {"3 extended inequality on square instances", criterion3},
      {"4 interpolation identity", criterion4},
      {"5 Rad_inf equals weak l1", criterion5},
      {"6 Rad_2 domination", criterion6},
      {"7 factorization and lifting", criterion7},
      {"8 transposed Minkowski step", criterion8},
      {"9 substituted property checks", criterion9},
  };
  bool all = true;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
