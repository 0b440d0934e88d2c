#pragma once

#include "cslab/comb_lemma.hpp"
#include "cslab/cs_space.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cslab {

/// Finite stand-in for a map on partitions of the naturals: an explicit
/// lookup keyed by the canonical "L=<n>;<rgs>" text of the argument.
/// Looking up an argument that has no entry throws DomainError.
class FTable {
 public:
  void set(const PartitionPrefix& arg, PartitionPrefix value);
  bool contains(const PartitionPrefix& arg) const { return entries_.count(arg.to_string()) != 0; }
  const PartitionPrefix& at(const PartitionPrefix& arg) const;
  std::size_t size() const noexcept { return entries_.size(); }

  /// (argument, value) pairs ordered by argument text.
  std::vector<std::pair<PartitionPrefix, PartitionPrefix>> entries() const;

  /// One "arg -> value" line per entry.
  std::string to_text() const;
  static FTable parse(std::string_view text);

 private:
  std::map<std::string, std::pair<PartitionPrefix, PartitionPrefix>> entries_;
};

/// e(t) = g(f(h(t))) on Q(M'), tabulated in full.
EMapTable fusion_e_map(const PartitionPrefix& b, const FTable& f, std::size_t m_prime);

struct FusionStep {
  PartitionPrefix result;  // h(s')
  SetPartition witness;    // s'
  std::size_t m_prime = 0;
};

/// One step of the fusion: the least s' in Q^m(M') with exactly m blocks
/// (m = n0 + ell + 1) that is a witness for e = g o f o h, and B' = h(s').
/// Throws ThresholdError when no such s' exists at this M', DomainError when
/// f misses some h(t), InsufficientTruncation when B shows at most M' blocks.
FusionStep fusion_step_detail(const PartitionPrefix& b, const FTable& f, std::size_t n0, std::size_t ell,
                              std::size_t m_prime);

inline PartitionPrefix fusion_step(const PartitionPrefix& b, const FTable& f, std::size_t n0, std::size_t ell,
                                   std::size_t m_prime) {
  return fusion_step_detail(b, f, n0, ell, m_prime).result;
}

/// Condition (1_ell): r_{n0+ell}(B') = r_{n0+ell}(B).
bool check_condition_1(const PartitionPrefix& b, const PartitionPrefix& b_next, std::size_t n0, std::size_t ell);

struct Condition2Check {
  std::size_t arguments = 0;  // table entries examined
  std::size_t applicable = 0; // entries A <= B' with a mu-cut at mu_{n0+ell+1}(B')
  std::vector<std::string> violations;
  bool holds() const noexcept { return violations.empty(); }
};

/// Condition (2_ell) over every argument of f: for A <= B' with
/// mu_k(A) = mu_{n0+ell+1}(B') for some k, either
/// tr(f(A), B', n0+ell+1) <= tr(A, B', n0+ell+1) or tr(f(A), B', n0+ell+1) is not <= r_{n0+ell+1}(B').
Condition2Check check_condition_2(const PartitionPrefix& b_next, const FTable& f, std::size_t n0, std::size_t ell);

/// Brute-force rescan for a witness with exactly `blocks` blocks among
/// Q^m(M'): every s is tested against all of Q(M'), no shared search code.
std::optional<SetPartition> exhaustive_witness_recheck(const EMapTable& e, std::size_t m, std::size_t blocks);

/// Tries M' = n0+ell+1, then doubles until a witness exists or M' passes `cap`.
/// `table_for` supplies the f-table to use at a given M'.
struct FusionSearch {
  std::optional<FusionStep> step;
  std::vector<std::size_t> tried;
};
FusionSearch fusion_search(const PartitionPrefix& b, const std::function<FTable(std::size_t)>& table_for,
                           std::size_t n0, std::size_t ell, std::size_t cap);

/// Random f-table on {h(t) : t in Q(M')}: half the values are h(u) for a
/// uniform u, the rest random labellings of the window of B.
FTable random_f_table(const PartitionPrefix& b, std::size_t m_prime, std::uint64_t seed);

/// f(h(t)) = h(t) for every t in Q(M').
FTable identity_f_table(const PartitionPrefix& b, std::size_t m_prime);

}  // namespace cslab
