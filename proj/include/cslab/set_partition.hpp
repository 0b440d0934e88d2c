#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cslab {

class PartitionStream;

/// A partition of {0, ..., n-1} held as its restricted growth string: point i
/// lies in block rgs[i], and blocks are numbered by order of first occurrence,
/// so block j is also the block with the j-th smallest minimum.
///
/// Values are immutable once built. The zero-size partition is valid and
/// stands for the empty relation (the approximation r_0 of every prefix).
class SetPartition {
 public:
  using Label = std::uint32_t;

  SetPartition() = default;

  /// Validates `rgs` as a restricted growth string; throws DomainError.
  static SetPartition from_rgs(std::vector<Label> rgs);
  /// Canonical form of an arbitrary labelling (equal labels = same block).
  static SetPartition from_labels(std::span<const Label> labels);
  static SetPartition discrete(std::size_t n);
  static SetPartition single_block(std::size_t n);
  /// Parses the "0,0,1,2,1" text format. The empty string is the empty partition.
  static SetPartition parse(std::string_view text);

  std::size_t size() const noexcept { return rgs_.size(); }
  bool empty() const noexcept { return rgs_.empty(); }
  std::size_t block_count() const noexcept { return blocks_; }
  Label block_of(std::size_t point) const { return rgs_[point]; }
  bool related(std::size_t i, std::size_t j) const { return rgs_[i] == rgs_[j]; }
  std::span<const Label> rgs() const noexcept { return rgs_; }

  std::vector<std::vector<std::size_t>> blocks() const;
  /// Least element of every block, in block order (strictly increasing).
  std::vector<std::size_t> block_minima() const;
  std::vector<std::size_t> block_sizes() const;

  /// Restriction to {0, ..., len-1}.
  SetPartition restrict(std::size_t len) const;

  std::string to_string() const;

  friend bool operator==(const SetPartition&, const SetPartition&) = default;
  friend std::strong_ordering operator<=>(const SetPartition& a, const SetPartition& b) {
    return a.rgs_ <=> b.rgs_;
  }

 private:
  friend class PartitionStream;
  explicit SetPartition(std::vector<Label> rgs, std::size_t blocks)
      : rgs_(std::move(rgs)), blocks_(blocks) {}

  std::vector<Label> rgs_;
  std::size_t blocks_ = 0;
};

/// s <= t in the coarsening order: every t-block lies inside one s-block.
/// Coarser partitions sit lower; the single block is the bottom element.
bool is_coarsening(const SetPartition& s, const SetPartition& t);

/// Common refinement: i ~ j iff i ~ j in both. Both inputs are <= the result.
SetPartition meet_refine(const SetPartition& a, const SetPartition& b);

}  // namespace cslab

template <>
struct std::hash<cslab::SetPartition> {
  std::size_t operator()(const cslab::SetPartition& p) const noexcept;
};
