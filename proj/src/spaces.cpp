#include "multisum/spaces.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace multisum {

namespace {

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  while (first != last && *first == ' ') ++first;
  while (last != first && *(last - 1) == ' ') --last;
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw std::invalid_argument("malformed number: '" + std::string(text) + "'");
  }
  return v;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::string to_string(Field f) { return f == Field::real ? "real" : "complex"; }

Field parse_field(std::string_view s) {
  if (s == "real") return Field::real;
  if (s == "complex") return Field::complex;
  throw std::invalid_argument("unknown field '" + std::string(s) + "'");
}

Exponent Exponent::from_value(double value) {
  if (std::isnan(value) || value <= 0.0) {
    throw std::invalid_argument("exponent must be positive");
  }
  if (std::isinf(value)) return infinity();
  return Exponent(1.0 / value, 0);
}

Exponent Exponent::from_reciprocal(double reciprocal) {
  if (!std::isfinite(reciprocal) || reciprocal < 0.0) {
    throw std::invalid_argument("exponent reciprocal must be finite and non-negative");
  }
  return Exponent(reciprocal, 0);
}

Exponent Exponent::parse(std::string_view raw) {
  const std::string text = trim(raw);
  if (text == "inf" || text == "infinity" || text == "Inf" || text == "oo") return infinity();
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const double num = parse_double(std::string_view(text).substr(0, slash));
    const double den = parse_double(std::string_view(text).substr(slash + 1));
    if (num <= 0.0 || den <= 0.0) throw std::invalid_argument("exponent fraction must be positive");
    return from_reciprocal(den / num);
  }
  return from_value(parse_double(text));
}

double Exponent::value() const {
  return recip_ == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / recip_;
}

std::string Exponent::to_string() const {
  if (is_infinite()) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value();
  return os.str();
}

SpaceSpec::SpaceSpec(std::size_t d, Exponent s) : dim(d), exponent(s) {
  if (d == 0) throw std::invalid_argument("space dimension must be at least 1");
  if (s.reciprocal() > 1.0) throw std::invalid_argument("space exponent must be >= 1");
}

double ExponentTuple::inner_reciprocal_sum() const {
  double s = 0.0;
  for (const auto& q : qs) s += q.reciprocal();
  return s;
}

double ExponentTuple::gap() const { return inner_reciprocal_sum() - p.reciprocal(); }

bool ExponentTuple::valid() const {
  return !qs.empty() && p.reciprocal() <= inner_reciprocal_sum() + 1e-15;
}

ExponentTuple ExponentTuple::parse(std::string_view text) {
  const auto semi = text.find(';');
  if (semi == std::string_view::npos) {
    throw std::invalid_argument("exponent tuple must look like 'p;q1,...,qn'");
  }
  ExponentTuple t;
  t.p = Exponent::parse(text.substr(0, semi));
  std::string_view rest = text.substr(semi + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    t.qs.push_back(Exponent::parse(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (t.qs.empty()) throw std::invalid_argument("exponent tuple has no inner exponents");
  return t;
}

std::string ExponentTuple::to_string() const {
  std::string s = p.to_string() + ";";
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (i) s += ",";
    s += qs[i].to_string();
  }
  return s;
}

void ConstantsConfig::validate() const {
  if (!(kg_real > 0.0) || !(kg_complex > 0.0) || !(littlewood_real > 0.0)) {
    throw std::invalid_argument("constants must be positive");
  }
  if (!(kg_complex < std::sqrt(2.0))) {
    throw std::invalid_argument("complex Grothendieck constant must be below sqrt(2)");
  }
  if (!(tolerance >= 0.0)) throw std::invalid_argument("tolerance must be non-negative");
}

Exponent dual_exponent(Exponent s) {
  if (s.reciprocal() > 1.0) throw std::invalid_argument("dual exponent requires s >= 1");
  return Exponent::from_reciprocal(1.0 - s.reciprocal());
}

InterpolatedExponents interpolation_exponents(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("interpolation parameter must lie in [0, 1]");
  }
  return {Exponent::from_reciprocal((1.0 - theta) + theta / 2.0),
          Exponent::from_reciprocal((1.0 - theta) / 2.0 + theta)};
}

Exponent extended_littlewood_inner(Exponent p) {
  if (p.reciprocal() > 1.0 || p.reciprocal() < 0.5) {
    throw std::invalid_argument("extended inequality requires 1 <= p <= 2");
  }
  return Exponent::from_reciprocal(0.5 + dual_exponent(p).reciprocal());
}

}  // namespace multisum
