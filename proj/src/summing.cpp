#include "multisum/summing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "multisum/parallel.hpp"
#include "multisum/random.hpp"

namespace multisum {

namespace {

constexpr double kReciprocalSlack = 1e-12;
constexpr std::size_t kGridLimit = 4096;
constexpr std::size_t kSearchChunks = 64;

Scalar unit_phase(Scalar z) {
  const double a = std::abs(z);
  return a == 0.0 ? Scalar{1.0, 0.0} : z / a;
}

std::vector<Scalar> basis(std::size_t m, std::size_t k) {
  std::vector<Scalar> e(m);
  e[k] = 1.0;
  return e;
}

TestFamily empty_family(const FormTensor& a) {
  TestFamily fam;
  for (const auto& d : a.domains()) {
    VectorSeq s;
    s.space = d;
    s.field = a.field();
    fam.columns.push_back(std::move(s));
  }
  return fam;
}

// Every index tuple in row-major order, one per family position.
TestFamily basis_grid(const FormTensor& a) {
  const auto dims = a.dims();
  TestFamily fam = empty_family(a);
  std::vector<std::size_t> idx(dims.size(), 0);
  for (std::size_t flat = 0; flat < a.size(); ++flat) {
    for (std::size_t i = 0; i < dims.size(); ++i)
      fam.columns[i].vectors.push_back(basis(dims[i], idx[i]));
    for (std::size_t i = dims.size(); i-- > 0;) {
      if (++idx[i] < dims[i]) break;
      idx[i] = 0;
    }
  }
  return fam;
}

TestFamily diagonal(const FormTensor& a) {
  const auto dims = a.dims();
  TestFamily fam = empty_family(a);
  const std::size_t len = *std::min_element(dims.begin(), dims.end());
  for (std::size_t j = 0; j < len; ++j)
    for (std::size_t i = 0; i < dims.size(); ++i) fam.columns[i].vectors.push_back(basis(dims[i], j));
  return fam;
}

TestFamily largest_coefficient(const FormTensor& a) {
  const auto dims = a.dims();
  const auto c = a.coeffs();
  std::size_t best = 0;
  for (std::size_t f = 1; f < c.size(); ++f)
    if (std::abs(c[f]) > std::abs(c[best])) best = f;
  TestFamily fam = empty_family(a);
  for (std::size_t i = dims.size(); i-- > 0;) {
    fam.columns[i].vectors.push_back(basis(dims[i], best % dims[i]));
    best /= dims[i];
  }
  return fam;
}

TestFamily single_tuple(const FormTensor& a, const VectorTuple& xs) {
  TestFamily fam = empty_family(a);
  for (std::size_t i = 0; i < xs.size(); ++i) fam.columns[i].vectors.push_back(xs[i]);
  return fam;
}

TestFamily gaussian_family(const FormTensor& a, std::size_t max_length, Rng& rng) {
  const auto dims = a.dims();
  std::uniform_int_distribution<std::size_t> len(1, std::max<std::size_t>(1, max_length));
  const std::size_t J = len(rng);
  TestFamily fam = empty_family(a);
  for (std::size_t i = 0; i < dims.size(); ++i)
    for (std::size_t j = 0; j < J; ++j)
      fam.columns[i].vectors.push_back(gaussian_vector(rng, dims[i], a.field()));
  return fam;
}

void check_tuple_order(const ExponentTuple& e, std::size_t n) {
  if (e.qs.size() != n) throw std::invalid_argument("exponent tuple does not match the form order");
}

}  // namespace

void TestFamily::validate_for(const FormTensor& a) const {
  if (columns.size() != a.order()) {
    throw std::invalid_argument("family has the wrong number of columns");
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    columns[i].validate();
    if (columns[i].space.dim != a.domains()[i].dim) {
      throw std::invalid_argument("family column does not match the form domain");
    }
    if (columns[i].size() != length()) {
      throw std::invalid_argument("family columns have different lengths");
    }
  }
}

bool RatioCertificate::certified() const {
  return std::all_of(rhs_norms.begin(), rhs_norms.end(), [](const NormValue& v) { return v.exact; });
}

std::vector<Scalar> value_sequence(const FormTensor& a, const TestFamily& fam) {
  fam.validate_for(a);
  std::vector<Scalar> values(fam.length());
  VectorTuple xs(a.order());
  for (std::size_t j = 0; j < values.size(); ++j) {
    for (std::size_t i = 0; i < a.order(); ++i) xs[i] = fam.columns[i].vectors[j];
    values[j] = evaluate(a, xs);
  }
  return values;
}

RatioCertificate summing_lower_bound(const FormTensor& a, const ExponentTuple& exps,
                                     const TestFamily& fam, const WeakNormOptions& weak) {
  check_tuple_order(exps, a.order());
  if (!exps.valid()) throw std::invalid_argument("exponent tuple violates 1/p <= sum 1/q_i");
  RatioCertificate cert;
  cert.exponents = exps;
  cert.family = fam;
  cert.lhs = lp_norm(value_sequence(a, fam), exps.p);
  double denom = 1.0;
  for (std::size_t i = 0; i < a.order(); ++i) {
    const NormValue w = weak_lp_norm(fam.columns[i], exps.qs[i], weak);
    cert.rhs_norms.push_back(w);
    denom *= w.value;
  }
  cert.ratio = denom > 0.0 ? cert.lhs / denom : 0.0;
  return cert;
}

RatioCertificate random_family_search(const FormTensor& a, const ExponentTuple& exps,
                                      const SearchOptions& opts) {
  check_tuple_order(exps, a.order());
  std::vector<TestFamily> structured;
  if (a.size() <= kGridLimit) structured.push_back(basis_grid(a));
  structured.push_back(diagonal(a));
  structured.push_back(largest_coefficient(a));
  OpNormOptions on;
  on.enumeration_budget = std::uint64_t{1} << 16;
  const auto norm = op_norm(a, on);
  structured.push_back(single_tuple(a, norm.witness));

  const std::size_t total = structured.size() + opts.budget;
  const std::size_t chunks = std::min(kSearchChunks, total);
  std::vector<RatioCertificate> best(chunks);
  std::vector<bool> filled(chunks, false);
  for_each_chunk(chunks, opts.threads, [&](std::size_t c) {
    const std::size_t begin = total * c / chunks;
    const std::size_t end = total * (c + 1) / chunks;
    for (std::size_t t = begin; t < end; ++t) {
      TestFamily fam;
      if (t < structured.size()) {
        fam = structured[t];
      } else {
        Rng rng = make_rng(opts.seed, t - structured.size());
        fam = gaussian_family(a, opts.max_length, rng);
      }
      auto cert = summing_lower_bound(a, exps, fam, opts.weak);
      if (!filled[c] || cert.ratio > best[c].ratio) {
        best[c] = std::move(cert);
        filled[c] = true;
      }
    }
  });
  std::size_t winner = 0;
  for (std::size_t c = 1; c < chunks; ++c)
    if (filled[c] && best[c].ratio > best[winner].ratio) winner = c;
  return best[winner];
}

std::vector<std::vector<Scalar>> factor_sequence(std::span<const Scalar> alpha, Exponent r,
                                                 const std::vector<Exponent>& rs) {
  if (rs.empty()) throw std::invalid_argument("factor_sequence needs at least one factor");
  double sum = 0.0;
  for (const auto& e : rs) sum += e.reciprocal();
  if (std::abs(sum - r.reciprocal()) > kReciprocalSlack) {
    throw std::invalid_argument("factor exponents do not satisfy sum 1/r_k = 1/r");
  }
  std::vector<std::vector<Scalar>> factors(rs.size(), std::vector<Scalar>(alpha.size(), 1.0));
  if (r.is_infinite()) {
    factors[0].assign(alpha.begin(), alpha.end());
    return factors;
  }
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const double power = rs[k].reciprocal() / r.reciprocal();
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      const double a = std::abs(alpha[j]);
      // 0^0 = 1 keeps the pointwise product exact for r_k = inf.
      const double mag = power == 0.0 ? 1.0 : std::pow(a, power);
      factors[k][j] = k == 0 ? mag * unit_phase(alpha[j]) : Scalar(mag);
    }
  }
  return factors;
}

LiftResult lift_family(const FormTensor& a, const TestFamily& fam, const ExponentTuple& source,
                       const ExponentTuple& target, const WeakNormOptions& weak) {
  const std::size_t n = a.order();
  check_tuple_order(source, n);
  check_tuple_order(target, n);
  if (!(target.p <= source.p)) throw std::invalid_argument("lift requires q <= p");
  std::vector<Exponent> rs;
  double r_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(target.qs[i] <= source.qs[i])) throw std::invalid_argument("lift requires q_i <= p_i");
    const double ri = std::max(0.0, target.qs[i].reciprocal() - source.qs[i].reciprocal());
    rs.push_back(Exponent::from_reciprocal(ri));
    r_sum += ri;
  }
  if (target.gap() > source.gap() + kReciprocalSlack) {
    throw std::invalid_argument("lift requires sum 1/q_i - 1/q <= sum 1/p_i - 1/p");
  }

  LiftResult out;
  out.source = summing_lower_bound(a, source, fam, weak);
  const auto values = value_sequence(a, fam);
  const double norm = lp_norm(values, source.p);
  if (norm == 0.0) {
    out.family = fam;
    out.derived = summing_lower_bound(a, target, fam, weak);
    out.alpha.assign(values.size(), 1.0);
    out.pass = true;
    return out;
  }

  // Hoelder equality case: ||alpha||_r = 1 and ||(alpha_j A_j)||_q' = ||(A_j)||_p
  // with 1/q' = 1/p + 1/r, and q' >= q.
  const Exponent r = Exponent::from_reciprocal(r_sum);
  std::vector<Scalar> alpha(values.size(), 1.0);
  if (source.p.is_infinite() && !r.is_infinite()) {
    std::size_t top = 0;
    for (std::size_t j = 1; j < values.size(); ++j)
      if (std::abs(values[j]) > std::abs(values[top])) top = j;
    std::fill(alpha.begin(), alpha.end(), Scalar{});
    alpha[top] = std::conj(unit_phase(values[top]));
  } else if (!r.is_infinite()) {
    const double power = r_sum / source.p.reciprocal();
    for (std::size_t j = 0; j < values.size(); ++j) {
      const double a_j = std::abs(values[j]);
      alpha[j] = a_j == 0.0 ? Scalar{} : std::pow(a_j / norm, power) * std::conj(values[j] / a_j);
    }
  }

  const auto factors = factor_sequence(alpha, r, rs);
  out.family = fam;
  for (std::size_t i = 0; i < n; ++i) {
    auto& col = out.family.columns[i];
    for (std::size_t j = 0; j < col.size(); ++j)
      for (auto& x : col.vectors[j]) x *= factors[i][j];
  }
  // Real data stays real after multiplying by real factors.
  for (std::size_t i = 0; i < n; ++i) {
    auto& col = out.family.columns[i];
    bool real = fam.columns[i].field == Field::real;
    for (const auto& v : col.vectors)
      for (const auto& x : v) real = real && x.imag() == 0.0;
    col.field = real ? Field::real : Field::complex;
  }
  out.alpha = std::move(alpha);
  out.derived = summing_lower_bound(a, target, out.family, weak);
  out.pass = out.derived.ratio >= out.source.ratio - 1e-10;
  return out;
}

TensorWeakEstimate tensor_weak_norm_estimate(const VectorSeq& xs, const VectorSeq& ys, Exponent p,
                                             std::uint64_t seed, std::size_t samples) {
  xs.validate();
  ys.validate();
  if (xs.size() != ys.size()) throw std::invalid_argument("sequences have different lengths");
  const std::size_t m1 = xs.space.dim;
  const std::size_t m2 = ys.space.dim;
  if (m1 * m2 > 64) throw std::invalid_argument("tensor weak norm needs dim(x) * dim(y) <= 64");
  const Field field =
      xs.field == Field::complex || ys.field == Field::complex ? Field::complex : Field::real;
  const std::vector<SpaceSpec> domains{xs.space, ys.space};
  const std::size_t J = xs.size();

  auto values_of = [&](std::span<const Scalar> c) {
    std::vector<Scalar> v(J);
    for (std::size_t j = 0; j < J; ++j)
      for (std::size_t a = 0; a < m1; ++a)
        for (std::size_t b = 0; b < m2; ++b) v[j] += c[a * m2 + b] * xs.vectors[j][a] * ys.vectors[j][b];
    return v;
  };

  TensorWeakEstimate est;
  std::vector<Scalar> best_coeffs;
  double best_value = -1.0;
  auto consider = [&](std::vector<Scalar> c) {
    const FormTensor b(domains, field, c);
    const auto norm = op_norm(b);
    if (norm.value == 0.0) return;
    const double v = lp_norm(values_of(c), p) / norm.value;
    if (norm.exact) est.lower = std::max(est.lower, v);
    est.heuristic = std::max(est.heuristic, v);
    if (v > best_value) {
      best_value = v;
      for (auto& x : c) x /= norm.value;
      best_coeffs = std::move(c);
    }
  };

  const std::size_t size = m1 * m2;
  for (std::size_t f = 0; f < size; ++f) {
    std::vector<Scalar> c(size);
    c[f] = 1.0;
    consider(std::move(c));
  }
  {
    std::vector<Scalar> c(size);
    for (std::size_t j = 0; j < J; ++j)
      for (std::size_t a = 0; a < m1; ++a)
        for (std::size_t b = 0; b < m2; ++b)
          c[a * m2 + b] += std::conj(xs.vectors[j][a] * ys.vectors[j][b]);
    consider(std::move(c));
  }
  if (size <= 12) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (size - 1)); ++mask) {
      std::vector<Scalar> c(size, 1.0);
      for (std::size_t f = 1; f < size; ++f)
        if ((mask >> (f - 1)) & 1U) c[f] = -1.0;
      consider(std::move(c));
    }
  }
  for (std::size_t s = 0; s < samples; ++s) {
    Rng rng = make_rng(seed, s);
    consider(gaussian_vector(rng, size, field));
  }
  if (best_value <= 0.0) return est;

  // Gradient ascent in coefficient space, renormalized by the operator norm.
  const double pv = p.is_infinite() ? 1.0 : p.value();
  std::vector<Scalar> c = best_coeffs;
  double value = best_value;
  double step = 0.5;
  for (int it = 0; it < 200 && step > 1e-9; ++it) {
    const auto v = values_of(c);
    std::vector<Scalar> grad(size);
    for (std::size_t j = 0; j < J; ++j) {
      const double a = std::abs(v[j]);
      if (a == 0.0) continue;
      const Scalar w = std::pow(a, pv - 1.0) * (v[j] / a);
      for (std::size_t i = 0; i < m1; ++i)
        for (std::size_t k = 0; k < m2; ++k)
          grad[i * m2 + k] += w * std::conj(xs.vectors[j][i] * ys.vectors[j][k]);
    }
    if (field == Field::real)
      for (auto& g : grad) g = g.real();
    const double gn = lp_norm(grad, Exponent::from_value(2));
    if (gn == 0.0) break;
    std::vector<Scalar> trial(size);
    for (std::size_t f = 0; f < size; ++f) trial[f] = c[f] + step * grad[f] / gn;
    const FormTensor b(domains, field, trial);
    const auto norm = op_norm(b);
    const double tv = norm.value > 0.0 ? lp_norm(values_of(trial), p) / norm.value : 0.0;
    if (tv > value) {
      value = tv;
      if (norm.exact) est.lower = std::max(est.lower, tv);
      est.heuristic = std::max(est.heuristic, tv);
      for (auto& x : trial) x /= norm.value;
      c = std::move(trial);
    } else {
      step *= 0.5;
    }
  }
  return est;
}

bool dv2_admissible(const ExponentTuple& e) {
  if (e.qs.size() < 2) throw std::invalid_argument("DV2 rule needs n >= 2");
  const double n = static_cast<double>(e.qs.size());
  return e.valid() && e.gap() >= n - 1.0 - kReciprocalSlack;
}

bool inclusion_admissible(const ExponentTuple& from, const ExponentTuple& to) {
  if (from.qs.empty() || from.qs.size() != to.qs.size()) {
    throw std::invalid_argument("inclusion rule needs tuples of equal, positive length");
  }
  if (!(from.p <= to.p)) return false;
  for (std::size_t i = 0; i < from.qs.size(); ++i)
    if (!(from.qs[i] <= to.qs[i])) return false;
  return from.gap() <= to.gap() + kReciprocalSlack;
}

bool cotype_exchange_admissible(Exponent p, Exponent q, const std::vector<Exponent>& qs) {
  if (qs.empty()) throw std::invalid_argument("cotype rule needs at least one exponent");
  if (!(p <= q)) return false;
  const Exponent one = Exponent::from_value(1);
  const Exponent two = Exponent::from_value(2);
  double sum = 0.0;
  for (const auto& e : qs) {
    if (e < one || two < e) return false;
    sum += e.reciprocal();
  }
  const double k = static_cast<double>(qs.size());
  return std::abs((sum - q.reciprocal()) - (k - p.reciprocal())) <= kReciprocalSlack;
}

bool lifting_admissible(std::size_t n, const ExponentTuple& e) {
  if (n < 2 || e.qs.size() != n) throw std::invalid_argument("lifting rule needs n >= 2 exponents");
  const Exponent r = e.qs.front();
  if (r < Exponent::from_value(1) || Exponent::from_value(2) < r) return false;
  for (const auto& q : e.qs)
    if (!(q == r)) return false;
  return n % 2 == 0 ? e.p == Exponent::from_value(1) : e.p == r;
}

bool coincidence_region(CoincidenceRule rule, const ExponentTuple& first,
                        const ExponentTuple& second) {
  switch (rule) {
    case CoincidenceRule::dv2:
      return dv2_admissible(first);
    case CoincidenceRule::inclusion:
      return inclusion_admissible(first, second);
    case CoincidenceRule::cotype_exchange:
      return cotype_exchange_admissible(first.p, second.p, second.qs);
    case CoincidenceRule::lifting:
      return lifting_admissible(first.qs.size(), first);
  }
  throw std::invalid_argument("unknown coincidence rule");
}

}  // namespace multisum
