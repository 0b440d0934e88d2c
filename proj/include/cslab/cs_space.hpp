#pragma once

#include "cslab/set_partition.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cslab {

/// The restriction to {0, ..., L-1} of an infinite partition of the naturals
/// whose blocks all continue past L. Only what the window shows is known:
/// whether L itself starts a new block is undecided, and operations that
/// would need that fact throw InsufficientTruncation.
class PartitionPrefix {
 public:
  PartitionPrefix() = default;
  explicit PartitionPrefix(SetPartition relation) : relation_(std::move(relation)) {}

  /// Text form "L=<n>;<rgs>", e.g. "L=4;0,1,0,1". The header must match the rgs length.
  static PartitionPrefix parse(std::string_view text);
  static PartitionPrefix discrete(std::size_t length) { return PartitionPrefix(SetPartition::discrete(length)); }

  std::size_t length() const noexcept { return relation_.size(); }
  std::size_t visible_blocks() const noexcept { return relation_.block_count(); }
  const SetPartition& relation() const noexcept { return relation_; }
  std::string to_string() const;

  friend bool operator==(const PartitionPrefix&, const PartitionPrefix&) = default;
  friend auto operator<=>(const PartitionPrefix& a, const PartitionPrefix& b) { return a.relation_ <=> b.relation_; }

 private:
  SetPartition relation_;
};

/// tr(A, B, n): A restricted to {0, ..., mu_n(B) - 1}.
struct TraceResult {
  SetPartition partition;
  std::size_t depth = 0;
  std::size_t source_length = 0;
};

/// mu_0(B) < mu_1(B) < ...: the block minima visible below L. Always starts at 0.
std::vector<std::size_t> mu_sequence(const PartitionPrefix& b);

/// r_n(B) = B restricted to mu_n(B); r_0 is empty.
SetPartition approx_r(const PartitionPrefix& b, std::size_t n);

TraceResult trace(const PartitionPrefix& a, const PartitionPrefix& b, std::size_t n);

/// The unique m with dom(s) = {0, ..., mu_m(B) - 1}. Throws NotACut when
/// |s| is visibly not a block minimum of B.
std::size_t depth(const PartitionPrefix& b, const SetPartition& s);

/// Window approximation of B in [s, A]: s = r_k(B) for some k, and B <= A on
/// the common window.
bool cube_member(const SetPartition& s, const PartitionPrefix& a, const PartitionPrefix& b);

/// B <= A restricted to the shorter of the two windows.
bool prefix_coarsens(const PartitionPrefix& coarse, const PartitionPrefix& fine);

/// h(t): merge B-blocks i, j < M' exactly when i t j; blocks >= M' untouched.
PartitionPrefix induced_coarsening_h(const SetPartition& t, const PartitionPrefix& b, std::size_t m_prime);

/// g(C): when C restricted to mu_{M'}(B) coarsens r_{M'}(B), the partition of
/// {0, ..., M'-1} with i ~ j iff mu_i(B) C mu_j(B); otherwise discrete.
SetPartition project_g(const PartitionPrefix& c, const PartitionPrefix& b, std::size_t m_prime);

}  // namespace cslab
