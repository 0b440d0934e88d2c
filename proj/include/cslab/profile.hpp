#pragma once

#include "cslab/bigint.hpp"
#include "cslab/set_partition.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace cslab {

/// Size data of one block, measured in units of N: `k` units of N points of
/// which `m` are distinguished (lie in {0, ..., m-1}).
struct BlockShape {
  std::size_t k = 0;
  std::size_t m = 0;
  friend bool operator==(const BlockShape&, const BlockShape&) = default;
};

/// A block X_i of the coarse partition t, with the sub-blocks X_{i,1}, ...
/// into which a refinement h of t splits it. `splits` is empty when no
/// refinement has been recorded; otherwise splits[0] is the sub-block
/// holding min(X_i).
struct ProfileBlock {
  BlockShape shape;
  std::vector<BlockShape> splits;
};

/// The (u, k_i, m_i, k_{i,j}, m_{i,j}) data of a pair t <= h, as used when
/// counting equipartitions above t and above h.
struct CoarseningProfile {
  std::vector<ProfileBlock> blocks;

  std::size_t u() const noexcept { return blocks.size(); }
  /// Throws DomainError unless the block data sums to (k, m) and every
  /// 0 <= m <= k bound holds, for the blocks and for any recorded splits.
  void validate(std::size_t k, std::size_t m) const;
  /// True when some block is split strictly (k_{i,1} < k_i).
  bool strictly_split() const;
};

/// Profile of t as a coarsening of some element of Q_k^m(kN): nullopt when
/// no such element exists (a block size not divisible by N, or a block with
/// more distinguished points than N-blocks).
std::optional<CoarseningProfile> profile_of(const SetPartition& t, std::size_t block_size, std::size_t m);

/// Same, also recording how the refinement h (t <= h) splits each t-block.
/// nullopt when no element of Q_k^m(kN) lies above h.
std::optional<CoarseningProfile> profile_of(const SetPartition& t, const SetPartition& h,
                                            std::size_t block_size, std::size_t m);

/// |{s in Q_k^m(kN) : t <= s}| for any t with this profile:
///   (1 / ((N-1)!^m N!^(k-m))) * prod_i (k_i N - m_i)! / (k_i - m_i)!
BigInt count_extensions(const CoarseningProfile& profile, std::size_t k, std::size_t block_size, std::size_t m);

/// |{s in Q_k^m(kN) : h <= s}| from the recorded splits (same product taken
/// over the sub-blocks).
BigInt count_refined_extensions(const CoarseningProfile& profile, std::size_t k, std::size_t block_size,
                                std::size_t m);

}  // namespace cslab
