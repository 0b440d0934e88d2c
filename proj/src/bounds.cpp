#include "cslab/bounds.hpp"

#include "cslab/error.hpp"

#include <cmath>

namespace cslab {

namespace {

// x^x with 0^0 = 1.
BigInt self_power(std::uint64_t x) { return x == 0 ? BigInt(1) : power(BigInt(x), x); }

Rational ratio_of(const BigInt& num, const BigInt& den) { return Rational(num, den); }

}  // namespace

EntropyBounds entropy_bounds(std::uint64_t a, std::uint64_t b) {
  if (a > b) throw DomainError("entropy_bounds: a > b");
  Rational upper = ratio_of(self_power(b), self_power(a) * self_power(b - a));
  Rational lower = upper / Rational(b + 1);
  return EntropyBounds{lower, binomial(b, a), upper};
}

double binary_entropy(double x) {
  auto term = [](double p) { return p <= 0.0 ? 0.0 : -p * std::log2(p); };
  return term(x) + term(1.0 - x);
}

Rational ratio_R(std::uint64_t a1, std::uint64_t a2, std::uint64_t b1, std::uint64_t b2, std::uint64_t n) {
  if (a1 == 0 || a2 == 0) throw DomainError("ratio_R: a1 and a2 must be positive");
  if (b1 > a1 || b2 > a2) throw DomainError("ratio_R: need b_i <= a_i");
  if (n == 0) throw DomainError("ratio_R: N must be positive");
  BigInt num = factorial(a1 * n - b1) * factorial(a2 * n - b2) * factorial((a1 + a2) - (b1 + b2));
  BigInt den = factorial(a1 - b1) * factorial(a2 - b2) * factorial((a1 + a2) * n - (b1 + b2));
  return ratio_of(num, den);
}

std::optional<std::uint64_t> ratio_threshold(std::uint64_t a1, std::uint64_t a2, std::uint64_t b1,
                                             std::uint64_t b2, std::uint64_t n_max) {
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    if (ratio_R(a1, a2, b1, b2, n) < 1) return n;
  }
  return std::nullopt;
}

CombRatioBound comb_ratio_bound(const CoarseningProfile& profile, std::uint64_t n) {
  if (n == 0) throw DomainError("comb_ratio_bound: N must be positive");
  std::size_t k = 0, m = 0;
  for (const auto& b : profile.blocks) {
    k += b.shape.k;
    m += b.shape.m;
  }
  profile.validate(k, m);
  if (!profile.strictly_split()) {
    throw DomainError("comb_ratio_bound: no block with k_i1 < k_i (t equals its refinement)");
  }
  CombRatioBound out{Rational(1), 1.0};
  double log2_relaxed = 0.0;
  for (const auto& b : profile.blocks) {
    if (b.splits.empty() || b.splits.front().k == b.shape.k) continue;
    const auto ki = b.shape.k, mi = b.shape.m;
    const auto ki1 = b.splits.front().k, mi1 = b.splits.front().m;
    out.exact *= ratio_of(binomial(ki - mi, ki1 - mi1), binomial(ki * n - mi, ki1 * n - mi1));

    const double small = static_cast<double>(ki - mi);
    const double large = static_cast<double>(ki * n - mi);
    const double small_h = small == 0 ? 0.0 : binary_entropy(static_cast<double>(ki1 - mi1) / small);
    const double large_h = binary_entropy(static_cast<double>(ki1 * n - mi1) / large);
    log2_relaxed += small * small_h + std::log2(large + 1.0) - large * large_h;
  }
  out.entropy_relaxed = std::exp2(log2_relaxed);
  return out;
}

Rational tree_bound(std::uint64_t k, std::uint64_t n) {
  if (n == 0) throw DomainError("tree_bound: N must be positive");
  Rational ratio(BigInt(n - 1), BigInt(n));
  Rational kth = 1;
  for (std::uint64_t i = 0; i < k; ++i) kth *= ratio;
  return Rational(power(BigInt(2), k)) * (Rational(1) - kth);
}

Rational tree_intermediate_bound(std::uint64_t k, std::uint64_t n) {
  if (n == 0) throw DomainError("tree_intermediate_bound: N must be positive");
  BigInt sum = 0;
  for (std::uint64_t m = 0; m <= k; ++m) {
    sum += binomial(k, m) * power(BigInt(n), m) * (power(BigInt(n), k - m) - power(BigInt(n - 1), k - m));
  }
  return ratio_of(sum, power(BigInt(n), k));
}

std::uint64_t tree_bound_threshold(std::uint64_t k) {
  if (k == 0) return 1;  // bound is identically 0
  // bound < 1 iff ((N-1)/N)^k > 1 - 2^-k, and the left side increases with N.
  for (std::uint64_t n = 1;; ++n) {
    if (tree_bound(k, n) < 1) return n;
  }
}

}  // namespace cslab
