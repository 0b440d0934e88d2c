#pragma once

#include "cslab/bigint.hpp"
#include "cslab/profile.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>

namespace cslab {

/// The sandwich (1/(b+1)) 2^{bH(a/b)} <= C(b, a) <= 2^{bH(a/b)}, with
/// 2^{bH(a/b)} evaluated exactly as b^b / (a^a (b-a)^(b-a)) and 0^0 = 1
/// (so b = 0 gives the trivial 1 <= 1 <= 1).
struct EntropyBounds {
  Rational lower;
  BigInt binom;
  Rational upper;

  bool holds() const { return lower <= Rational(binom) && Rational(binom) <= upper; }
};

EntropyBounds entropy_bounds(std::uint64_t a, std::uint64_t b);

/// Binary entropy in bits, 0 log 0 = 0. Floating point; diagnostics only.
double binary_entropy(double x);

/// ((a1 N - b1)! / (a1 - b1)!) ((a2 N - b2)! / (a2 - b2)!) ((a1+a2) - (b1+b2))! / ((a1+a2) N - (b1+b2))!
Rational ratio_R(std::uint64_t a1, std::uint64_t a2, std::uint64_t b1, std::uint64_t b2, std::uint64_t n);

/// Least N in [1, n_max] with ratio_R(...) < 1, or nullopt.
std::optional<std::uint64_t> ratio_threshold(std::uint64_t a1, std::uint64_t a2, std::uint64_t b1,
                                             std::uint64_t b2, std::uint64_t n_max);

struct CombRatioBound {
  /// prod over strictly split blocks of C(k_i - m_i, k_i1 - m_i1) / C(k_i N - m_i, k_i1 N - m_i1).
  Rational exact;
  /// The entropy relaxation of the same product; approximate.
  double entropy_relaxed = 0.0;
};

/// Requires at least one block with k_{i,1} < k_i (DomainError otherwise).
CombRatioBound comb_ratio_bound(const CoarseningProfile& profile, std::uint64_t n);

/// 2^k (1 - ((N-1)/N)^k).
Rational tree_bound(std::uint64_t k, std::uint64_t n);
/// sum_{m <= k} C(k, m) N^m (N^(k-m) - (N-1)^(k-m)) / N^k.
Rational tree_intermediate_bound(std::uint64_t k, std::uint64_t n);
/// Least N with tree_bound(k, N) < 1.
std::uint64_t tree_bound_threshold(std::uint64_t k);

}  // namespace cslab
