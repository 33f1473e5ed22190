#include "multisum/forms.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "multisum/parallel.hpp"
#include "multisum/random.hpp"

namespace multisum {

namespace {

// Contracts the leading axis of a tensor (lead x rest) with x.
std::vector<Scalar> contract_front(std::span<const Scalar> buf, std::span<const Scalar> x) {
  const std::size_t lead = x.size();
  const std::size_t rest = buf.size() / lead;
  std::vector<Scalar> out(rest);
  for (std::size_t a = 0; a < lead; ++a) {
    const Scalar w = x[a];
    if (w == Scalar{}) continue;
    const Scalar* row = buf.data() + a * rest;
    for (std::size_t r = 0; r < rest; ++r) out[r] += w * row[r];
  }
  return out;
}

// Contracts the trailing axis of a tensor (rest x trail) with x.
std::vector<Scalar> contract_back(std::span<const Scalar> buf, std::span<const Scalar> x) {
  const std::size_t trail = x.size();
  const std::size_t rest = buf.size() / trail;
  std::vector<Scalar> out(rest);
  for (std::size_t r = 0; r < rest; ++r) {
    const Scalar* row = buf.data() + r * trail;
    Scalar s{};
    for (std::size_t b = 0; b < trail; ++b) s += row[b] * x[b];
    out[r] = s;
  }
  return out;
}

void check_tuple(const FormTensor& a, const VectorTuple& xs, std::size_t skip) {
  if (xs.size() != a.order()) {
    throw std::invalid_argument("expected " + std::to_string(a.order()) + " vectors, got " +
                                std::to_string(xs.size()));
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i != skip && xs[i].size() != a.domains()[i].dim) {
      throw std::invalid_argument("vector " + std::to_string(i) + " has the wrong length");
    }
  }
}

enum class SlotKind { signs, basis, closed_form_only };

// With real_signs_only, complex l_inf slots are still enumerated over real sign
// vectors; that yields a feasible point rather than the maximum.
SlotKind slot_kind(const SpaceSpec& s, Field field, bool real_signs_only = false) {
  if (s.exponent.reciprocal() == 1.0) return SlotKind::basis;
  if (s.exponent.is_infinite() && (field == Field::real || real_signs_only)) return SlotKind::signs;
  return SlotKind::closed_form_only;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

struct Enumerated {
  std::size_t slot;
  SlotKind kind;
  std::uint64_t count;
  bool halved;
};

void fill_candidate(const Enumerated& e, std::uint64_t c, std::vector<Scalar>& x) {
  std::fill(x.begin(), x.end(), Scalar{});
  if (e.kind == SlotKind::basis) {
    x[c] = 1.0;
    return;
  }
  if (e.halved) {
    x[0] = 1.0;
    for (std::size_t k = 1; k < x.size(); ++k) x[k] = ((c >> (k - 1)) & 1U) ? -1.0 : 1.0;
  } else {
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = ((c >> k) & 1U) ? -1.0 : 1.0;
  }
}

struct Best {
  double value = -1.0;
  VectorTuple witness;
};

constexpr std::uint64_t kSeedEnumerationBudget = std::uint64_t{1} << 14;

struct EnumerationPlan {
  std::size_t closed = 0;
  std::vector<Enumerated> slots;
  std::uint64_t total = 1;
};

// Picks the slot maximized in closed form and the enumerated slots, or nothing
// when two or more slots have no finite extreme-point description.
std::optional<EnumerationPlan> plan_enumeration(const FormTensor& a, bool real_signs_only) {
  const std::size_t n = a.order();
  std::vector<SlotKind> kinds(n);
  std::size_t free_slots = 0;
  for (std::size_t i = 0; i < n; ++i) {
    kinds[i] = slot_kind(a.domains()[i], a.field(), real_signs_only);
    if (kinds[i] == SlotKind::closed_form_only) ++free_slots;
  }
  if (free_slots > 1) return std::nullopt;

  auto slot_count = [&](std::size_t i) -> std::uint64_t {
    const std::size_t m = a.domains()[i].dim;
    if (kinds[i] == SlotKind::basis) return m;
    return m >= 64 ? UINT64_MAX : (std::uint64_t{1} << m);
  };

  EnumerationPlan plan;
  if (free_slots == 1) {
    plan.closed = static_cast<std::size_t>(
        std::find(kinds.begin(), kinds.end(), SlotKind::closed_form_only) - kinds.begin());
  } else {
    for (std::size_t i = 1; i < n; ++i)
      if (slot_count(i) > slot_count(plan.closed)) plan.closed = i;
  }
  bool halved = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == plan.closed) continue;
    Enumerated e{i, kinds[i], slot_count(i), false};
    // x and -x give the same |A|; fix one sign in the first sign slot.
    if (e.kind == SlotKind::signs && !halved) {
      e.halved = true;
      e.count = std::max<std::uint64_t>(1, e.count / 2);
      halved = true;
    }
    plan.total = saturating_mul(plan.total, e.count);
    plan.slots.push_back(e);
  }
  return plan;
}

OpNormResult enumerate_norm(const FormTensor& a, std::size_t closed,
                            const std::vector<Enumerated>& slots, std::uint64_t total,
                            unsigned threads) {
  const Exponent closed_dual = dual_exponent(a.domains()[closed].exponent);
  const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(64, total));
  std::vector<Best> per_chunk(chunks);

  for_each_chunk(chunks, threads, [&](std::size_t chunk) {
    const std::uint64_t lo = total / chunks * chunk + std::min<std::uint64_t>(chunk, total % chunks);
    const std::uint64_t hi = lo + total / chunks + (chunk < total % chunks ? 1 : 0);
    VectorTuple xs(a.order());
    for (std::size_t i = 0; i < a.order(); ++i) xs[i].resize(a.domains()[i].dim);
    Best& best = per_chunk[chunk];
    for (std::uint64_t t = lo; t < hi; ++t) {
      // Mixed radix decode; the first enumerated slot is most significant.
      std::uint64_t rem = t;
      for (std::size_t e = slots.size(); e-- > 0;) {
        fill_candidate(slots[e], rem % slots[e].count, xs[slots[e].slot]);
        rem /= slots[e].count;
      }
      const auto g = contract_except(a, xs, closed);
      const double v = lp_norm(g, closed_dual);
      if (v > best.value) {
        best.value = v;
        best.witness = xs;
        best.witness[closed] = ball_maximizer(g, a.domains()[closed].exponent);
      }
    }
  });

  OpNormResult result;
  result.exact = true;
  result.value = -1.0;
  for (auto& b : per_chunk) {
    if (b.value > result.value) {
      result.value = b.value;
      result.witness = std::move(b.witness);
    }
  }
  return result;
}

std::vector<Scalar> random_unit_point(Rng& rng, const SpaceSpec& s, Field field) {
  auto x = gaussian_vector(rng, s.dim, field);
  if (s.exponent.is_infinite()) {
    for (auto& v : x) v = std::abs(v) == 0.0 ? Scalar{1.0} : v / std::abs(v);
    return x;
  }
  const double n = lp_norm(x, s.exponent);
  for (auto& v : x) v /= n;
  return x;
}

OpNormResult alternating_norm(const FormTensor& a, const AscentOptions& opts,
                              const VectorTuple* seed_point) {
  const std::size_t n = a.order();
  const auto dims = a.dims();
  const std::size_t starts = std::max<std::size_t>(1, opts.starts);
  std::vector<Best> per_start(starts);

  for_each_chunk(starts, opts.threads, [&](std::size_t s) {
    VectorTuple xs(n);
    if (s == 0 && seed_point != nullptr) {
      xs = *seed_point;
    } else if (s == 0) {
      // Basis vectors at the largest coefficient.
      const auto coeffs = a.coeffs();
      std::size_t flat = 0;
      for (std::size_t f = 1; f < coeffs.size(); ++f)
        if (std::abs(coeffs[f]) > std::abs(coeffs[flat])) flat = f;
      for (std::size_t i = n; i-- > 0;) {
        xs[i].assign(dims[i], Scalar{});
        xs[i][flat % dims[i]] = 1.0;
        flat /= dims[i];
      }
    } else {
      Rng rng = make_rng(opts.seed, s);
      for (std::size_t i = 0; i < n; ++i) xs[i] = random_unit_point(rng, a.domains()[i], a.field());
    }
    double value = std::abs(evaluate(a, xs));
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
      double sweep = value;
      for (std::size_t i = 0; i < n; ++i) {
        const auto g = contract_except(a, xs, i);
        xs[i] = ball_maximizer(g, a.domains()[i].exponent);
        sweep = lp_norm(g, dual_exponent(a.domains()[i].exponent));
      }
      const double gain = sweep - value;
      value = std::max(value, sweep);
      if (gain <= opts.relative_tolerance * value) break;
    }
    per_start[s].value = value;
    per_start[s].witness = std::move(xs);
  });

  OpNormResult result;
  result.exact = false;
  result.value = -1.0;
  for (auto& b : per_start) {
    if (b.value > result.value) {
      result.value = b.value;
      result.witness = std::move(b.witness);
    }
  }
  return result;
}

}  // namespace

FormTensor::FormTensor(std::vector<SpaceSpec> domains, Field field, std::vector<Scalar> coeffs)
    : domains_(std::move(domains)), field_(field), coeffs_(std::move(coeffs)) {
  if (domains_.empty()) throw std::invalid_argument("a form needs at least one domain");
  std::size_t expected = 1;
  for (const auto& d : domains_) expected *= d.dim;
  if (coeffs_.size() != expected) {
    throw std::invalid_argument("coefficient count " + std::to_string(coeffs_.size()) +
                                " does not match the domain shape (" + std::to_string(expected) +
                                ")");
  }
  for (const auto& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw std::invalid_argument("coefficients must be finite");
    }
    if (field_ == Field::real && c.imag() != 0.0) {
      throw std::invalid_argument("real form has a complex coefficient");
    }
  }
}

FormTensor FormTensor::zeros(std::vector<SpaceSpec> domains, Field field) {
  std::size_t count = 1;
  for (const auto& d : domains) count *= d.dim;
  return FormTensor(std::move(domains), field, std::vector<Scalar>(count));
}

FormTensor FormTensor::from_matrix(const Matrix& m, Exponent s1, Exponent s2) {
  return FormTensor({SpaceSpec(m.rows(), s1), SpaceSpec(m.cols(), s2)}, m.field(),
                    std::vector<Scalar>(m.data().begin(), m.data().end()));
}

std::vector<std::size_t> FormTensor::dims() const {
  std::vector<std::size_t> d;
  d.reserve(domains_.size());
  for (const auto& s : domains_) d.push_back(s.dim);
  return d;
}

std::size_t FormTensor::flat_index(std::span<const std::size_t> index) const {
  if (index.size() != order()) throw std::invalid_argument("index has the wrong arity");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= domains_[i].dim) throw std::out_of_range("tensor index out of range");
    flat = flat * domains_[i].dim + index[i];
  }
  return flat;
}

Scalar& FormTensor::at(std::span<const std::size_t> index) { return coeffs_[flat_index(index)]; }

const Scalar& FormTensor::at(std::span<const std::size_t> index) const {
  return coeffs_[flat_index(index)];
}

Matrix FormTensor::as_matrix() const {
  if (order() != 2) throw std::invalid_argument("as_matrix needs a bilinear form");
  Matrix m(domains_[0].dim, domains_[1].dim, field_);
  std::copy(coeffs_.begin(), coeffs_.end(), m.data().begin());
  return m;
}

FormTensor FormTensor::scaled(Scalar c) const {
  FormTensor out = *this;
  if (field_ == Field::real && c.imag() != 0.0) out.field_ = Field::complex;
  for (auto& v : out.coeffs_) v *= c;
  return out;
}

std::vector<Scalar> contract_except(const FormTensor& a, const VectorTuple& xs, std::size_t slot) {
  if (slot >= a.order()) throw std::invalid_argument("slot out of range");
  check_tuple(a, xs, slot);
  std::vector<Scalar> buf(a.coeffs().begin(), a.coeffs().end());
  for (std::size_t i = 0; i < slot; ++i) buf = contract_front(buf, xs[i]);
  for (std::size_t i = a.order(); i-- > slot + 1;) buf = contract_back(buf, xs[i]);
  return buf;
}

Scalar evaluate(const FormTensor& a, const VectorTuple& xs) {
  check_tuple(a, xs, a.order());
  const std::size_t last = a.order() - 1;
  const auto g = contract_except(a, xs, last);
  Scalar s{};
  for (std::size_t k = 0; k < g.size(); ++k) s += g[k] * xs[last][k];
  return s;
}

OpNormResult op_norm(const FormTensor& a, const OpNormOptions& opts) {
  if (!opts.force_heuristic) {
    const auto plan = plan_enumeration(a, false);
    if (plan && plan->total <= opts.enumeration_budget) {
      return enumerate_norm(a, plan->closed, plan->slots, plan->total, opts.ascent.threads);
    }
    if (!opts.allow_heuristic) {
      throw std::runtime_error(plan ? "operator norm enumeration budget exceeded"
                                    : "operator norm cannot be computed exactly for these domains");
    }
  }
  // Complex forms: the best real sign point is feasible, so it seeds one start.
  if (a.field() == Field::complex) {
    const auto plan = plan_enumeration(a, true);
    if (plan && plan->total <= kSeedEnumerationBudget) {
      const auto seed = enumerate_norm(a, plan->closed, plan->slots, plan->total, 1);
      return alternating_norm(a, opts.ascent, &seed.witness);
    }
  }
  return alternating_norm(a, opts.ascent, nullptr);
}

Matrix compose_beta(const Matrix& beta, const Matrix& a) {
  if (beta.empty() || a.empty()) throw std::invalid_argument("empty matrix in product");
  if (beta.cols() != a.rows()) {
    throw std::invalid_argument("beta has " + std::to_string(beta.cols()) +
                                " columns but a has " + std::to_string(a.rows()) + " rows");
  }
  const Field f =
      (beta.field() == Field::complex || a.field() == Field::complex) ? Field::complex : Field::real;
  Matrix out(beta.rows(), a.cols(), f);
  for (std::size_t j = 0; j < beta.rows(); ++j)
    for (std::size_t l = 0; l < beta.cols(); ++l) {
      const Scalar b = beta(j, l);
      if (b == Scalar{}) continue;
      for (std::size_t k = 0; k < a.cols(); ++k) out(j, k) += b * a(l, k);
    }
  return out;
}

CurriedForm::CurriedForm(FormTensor form, std::size_t head_order)
    : form_(std::move(form)), head_(head_order) {
  if (head_ < 1 || head_ >= form_.order()) {
    throw std::invalid_argument("curry needs 1 <= k < order");
  }
}

std::vector<SpaceSpec> CurriedForm::head_domains() const {
  return {form_.domains().begin(), form_.domains().begin() + static_cast<std::ptrdiff_t>(head_)};
}

std::vector<SpaceSpec> CurriedForm::tail_domains() const {
  return {form_.domains().begin() + static_cast<std::ptrdiff_t>(head_), form_.domains().end()};
}

FormTensor CurriedForm::apply(const VectorTuple& head) const {
  if (head.size() != head_) throw std::invalid_argument("wrong number of head vectors");
  std::vector<Scalar> buf(form_.coeffs().begin(), form_.coeffs().end());
  for (std::size_t i = 0; i < head_; ++i) {
    if (head[i].size() != form_.domains()[i].dim) {
      throw std::invalid_argument("head vector has the wrong length");
    }
    buf = contract_front(buf, head[i]);
  }
  Field f = form_.field();
  for (const auto& x : head)
    for (const auto& v : x)
      if (v.imag() != 0.0) f = Field::complex;
  return FormTensor(tail_domains(), f, std::move(buf));
}

CurriedForm curry(const FormTensor& a, std::size_t k) { return CurriedForm(a, k); }

}  // namespace multisum
