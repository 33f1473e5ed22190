#ifndef MULTISUM_SPACES_HPP
#define MULTISUM_SPACES_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace multisum {

using Scalar = std::complex<double>;

enum class Field { real, complex };

std::string to_string(Field f);
Field parse_field(std::string_view s);

// An exponent in (0, inf], stored as its reciprocal. inf is reciprocal 0.
class Exponent {
 public:
  constexpr Exponent() = default;

  static Exponent from_value(double value);
  static Exponent from_reciprocal(double reciprocal);
  static constexpr Exponent infinity() { return Exponent{}; }
  // Accepts "inf", "4/3", "1.5", "2".
  static Exponent parse(std::string_view text);

  constexpr double reciprocal() const { return recip_; }
  double value() const;
  constexpr bool is_infinite() const { return recip_ == 0.0; }

  std::string to_string() const;

  friend constexpr bool operator==(Exponent a, Exponent b) { return a.recip_ == b.recip_; }
  // Ordering by exponent value: larger reciprocal means smaller exponent.
  friend constexpr bool operator<(Exponent a, Exponent b) { return a.recip_ > b.recip_; }
  friend constexpr bool operator<=(Exponent a, Exponent b) { return a.recip_ >= b.recip_; }

 private:
  constexpr explicit Exponent(double recip, int) : recip_(recip) {}
  double recip_ = 0.0;
};

// Finite sequence space l_s^m. exponent = inf models c0 at dimension m.
struct SpaceSpec {
  std::size_t dim = 1;
  Exponent exponent = Exponent::infinity();

  SpaceSpec() = default;
  SpaceSpec(std::size_t d, Exponent s);

  friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;
};

// (p; q_1, ..., q_n) with an optional interpolation parameter.
struct ExponentTuple {
  Exponent p;
  std::vector<Exponent> qs;
  std::optional<double> theta;

  // 1/p <= sum 1/q_i.
  bool valid() const;
  double inner_reciprocal_sum() const;
  // sum 1/q_i - 1/p
  double gap() const;

  // "1;2,2" or "4/3;4/3,4/3"
  static ExponentTuple parse(std::string_view text);
  std::string to_string() const;
};

struct ConstantsConfig {
  double kg_real = 1.78221;
  double kg_complex = 1.40491;
  double littlewood_real = 1.4142135623730951;
  double tolerance = 1e-6;

  // Throws std::invalid_argument when a value is out of range.
  void validate() const;
  double grothendieck(Field f) const { return f == Field::real ? kg_real : kg_complex; }
};

// 1/s + 1/s' = 1. Throws std::invalid_argument for s < 1.
Exponent dual_exponent(Exponent s);

struct InterpolatedExponents {
  Exponent p;
  Exponent q;
};

// 1/p = (1 - theta) + theta/2 and 1/q = (1 - theta)/2 + theta.
InterpolatedExponents interpolation_exponents(double theta);

// q with 1/q = 1/2 + 1/p'. Requires 1 <= p <= 2.
Exponent extended_littlewood_inner(Exponent p);

}  // namespace multisum

#endif  // MULTISUM_SPACES_HPP
