#include "multisum/rademacher.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "multisum/parallel.hpp"

namespace multisum {

namespace {

constexpr std::size_t kPartitions = 64;

struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

struct PartitionStats {
  Kahan sum;
  Kahan sum_sq;
  double max = 0.0;
};

std::pair<std::uint64_t, std::uint64_t> partition_range(std::uint64_t total, std::size_t parts,
                                                        std::size_t c) {
  const std::uint64_t base = total / parts;
  const std::uint64_t extra = total % parts;
  const std::uint64_t lo = base * c + std::min<std::uint64_t>(c, extra);
  return {lo, lo + base + (c < extra ? 1 : 0)};
}

}  // namespace

RadValue rademacher_average(std::size_t n, Exponent p, const RadMode& mode,
                            const std::function<double(SignPattern)>& norm_of_sum,
                            unsigned threads) {
  if (p.reciprocal() > 1.0) throw std::invalid_argument("Rad_p needs p >= 1");
  if (n == 0) throw std::invalid_argument("Rad_p of an empty sequence");
  const bool is_max = p.is_infinite();
  const double pv = is_max ? 0.0 : p.value();
  std::vector<PartitionStats> stats(kPartitions);
  RadValue out;

  if (const auto* exact = std::get_if<RadExact>(&mode)) {
    if (n > exact->max_terms || n > 62) {
      throw std::runtime_error("exact Rademacher average over 2^" + std::to_string(n) +
                               " patterns exceeds the budget");
    }
    // eps and -eps give the same norm; fix eps_1 = +1.
    const std::uint64_t total = std::uint64_t{1} << (n - 1);
    for_each_chunk(kPartitions, threads, [&](std::size_t c) {
      const auto [lo, hi] = partition_range(total, kPartitions, c);
      std::vector<std::int8_t> eps(n);
      for (std::uint64_t t = lo; t < hi; ++t) {
        eps[0] = 1;
        for (std::size_t j = 1; j < n; ++j) eps[j] = ((t >> (j - 1)) & 1U) ? -1 : 1;
        const double v = norm_of_sum(eps);
        stats[c].max = std::max(stats[c].max, v);
        if (!is_max) stats[c].sum.add(std::pow(v, pv));
      }
    });
    Kahan total_sum;
    double top = 0.0;
    for (const auto& s : stats) {
      total_sum.add(s.sum.sum);
      top = std::max(top, s.max);
    }
    out.exact = true;
    if (is_max) {
      out.value = top;
      out.power_mean = top;
    } else {
      out.power_mean = total_sum.sum / static_cast<double>(total);
      out.value = std::pow(out.power_mean, 1.0 / pv);
    }
    return out;
  }

  const auto& mc = std::get<RadMonteCarlo>(mode);
  if (mc.samples == 0) throw std::invalid_argument("Monte Carlo needs at least one sample");
  const std::size_t words = (n + 63) / 64;
  for_each_chunk(kPartitions, threads, [&](std::size_t c) {
    const auto [lo, hi] = partition_range(mc.samples, kPartitions, c);
    std::vector<std::int8_t> eps(n);
    for (std::uint64_t s = lo; s < hi; ++s) {
      for (std::size_t w = 0; w < words; ++w) {
        const std::uint64_t bits = derive_seed(mc.seed, s * words + w);
        for (std::size_t j = w * 64; j < std::min(n, (w + 1) * 64); ++j) {
          eps[j] = ((bits >> (j - w * 64)) & 1U) ? -1 : 1;
        }
      }
      const double v = norm_of_sum(eps);
      stats[c].max = std::max(stats[c].max, v);
      if (!is_max) {
        const double pw = std::pow(v, pv);
        stats[c].sum.add(pw);
        stats[c].sum_sq.add(pw * pw);
      }
    }
  });
  Kahan sum;
  Kahan sum_sq;
  double top = 0.0;
  for (const auto& s : stats) {
    sum.add(s.sum.sum);
    sum_sq.add(s.sum_sq.sum);
    top = std::max(top, s.max);
  }
  out.exact = false;
  if (is_max) {
    out.value = top;
    out.power_mean = top;
    return out;
  }
  const double count = static_cast<double>(mc.samples);
  out.power_mean = sum.sum / count;
  const double var =
      mc.samples > 1 ? std::max(0.0, (sum_sq.sum - count * out.power_mean * out.power_mean) /
                                         (count - 1.0))
                     : 0.0;
  out.std_error = std::sqrt(var / count);
  out.value = std::pow(out.power_mean, 1.0 / pv);
  return out;
}

RadValue rad_p_norm(const VectorSeq& seq, Exponent p, const RadMode& mode, unsigned threads) {
  seq.validate();
  const std::size_t m = seq.space.dim;
  auto norm_of_sum = [&](SignPattern eps) {
    thread_local std::vector<Scalar> acc;
    acc.assign(m, Scalar{});
    for (std::size_t j = 0; j < eps.size(); ++j) {
      const auto& x = seq.vectors[j];
      if (eps[j] > 0) {
        for (std::size_t k = 0; k < m; ++k) acc[k] += x[k];
      } else {
        for (std::size_t k = 0; k < m; ++k) acc[k] -= x[k];
      }
    }
    return lp_norm(acc, seq.space.exponent);
  };
  return rademacher_average(seq.size(), p, mode, norm_of_sum, threads);
}

ContractionCheck contraction_check(const VectorSeq& seq, std::span<const double> alphas,
                                   Exponent p) {
  if (alphas.size() != seq.size()) {
    throw std::invalid_argument("one multiplier per vector is required");
  }
  VectorSeq scaled = seq;
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    if (!(std::abs(alphas[j]) <= 1.0)) {
      throw std::invalid_argument("contraction multipliers must satisfy |alpha| <= 1");
    }
    for (auto& v : scaled.vectors[j]) v *= alphas[j];
  }
  ContractionCheck out;
  out.contracted = rad_p_norm(scaled, p).value;
  out.original = rad_p_norm(seq, p).value;
  out.pass = out.contracted <= out.original + 1e-12;
  return out;
}

double kahane_ratio(const VectorSeq& seq, Exponent p, Exponent q) {
  const double den = rad_p_norm(seq, q).value;
  if (den == 0.0) throw std::domain_error("Kahane ratio of an all-zero sequence");
  return rad_p_norm(seq, p).value / den;
}

}  // namespace multisum
