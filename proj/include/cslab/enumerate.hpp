#pragma once

#include "cslab/bigint.hpp"
#include "cslab/set_partition.hpp"

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <vector>

namespace cslab {

/// What a PartitionStream enumerates.
struct StreamShape {
  std::size_t n = 1;
  /// Points 0..separated-1 lie in pairwise distinct blocks (the Q^m(n) condition).
  std::size_t separated = 0;
  /// At most this many blocks (equipartitions: exactly k).
  std::optional<std::size_t> max_blocks;
  /// At most this many points per block (equipartitions: exactly N).
  std::optional<std::size_t> max_block_size;
  /// Shard prefix: only partitions whose rgs starts with these labels.
  std::vector<SetPartition::Label> prefix;
};

/// Lazy single-consumer stream over the partitions described by a StreamShape,
/// in lexicographic rgs order. Nothing is materialized; the current element is
/// updated in place.
class PartitionStream {
 public:
  explicit PartitionStream(StreamShape shape);

  /// Advances to the next partition; false once exhausted. The first call
  /// positions the stream on the first element.
  bool next();
  const SetPartition& current() const noexcept { return current_; }

  struct Sentinel {};
  class Iterator {
   public:
    using value_type = SetPartition;
    using difference_type = std::ptrdiff_t;
    Iterator() = default;
    explicit Iterator(PartitionStream* stream) : stream_(stream) {}
    const SetPartition& operator*() const { return stream_->current(); }
    const SetPartition* operator->() const { return &stream_->current(); }
    Iterator& operator++() {
      if (!stream_->next()) stream_ = nullptr;
      return *this;
    }
    void operator++(int) { ++*this; }
    friend bool operator==(const Iterator& it, Sentinel) { return it.stream_ == nullptr; }

   private:
    PartitionStream* stream_ = nullptr;
  };

  Iterator begin() {
    Iterator it(this);
    if (!next()) return Iterator();
    return it;
  }
  Sentinel end() const { return {}; }

 private:
  bool fill_from(std::size_t pos);
  bool feasible_label(std::size_t pos, SetPartition::Label label) const;
  void place(std::size_t pos, SetPartition::Label label);
  void unplace(std::size_t pos);

  StreamShape shape_;
  std::size_t fixed_ = 0;  // positions that never change
  std::vector<SetPartition::Label> rgs_;
  std::vector<std::size_t> counts_;        // points per block
  std::vector<SetPartition::Label> open_;  // open_[i] = number of blocks among positions < i
  SetPartition current_;
  bool started_ = false;
  bool done_ = false;
};

/// Q^m(n) in lexicographic order; m = 0 or 1 gives all of Q(n).
/// Throws DomainError for n = 0 or m > n.
PartitionStream enumerate_partitions(std::size_t n, std::size_t m);

/// Q_k^m(kN): k blocks of exactly N points, 0..m-1 pairwise separated.
PartitionStream enumerate_equipartitions(std::size_t k, std::size_t block_size, std::size_t m);

/// Disjoint shard prefixes of length `depth` covering the stream for `shape`,
/// in lexicographic order. Concatenating the shards reproduces the stream.
std::vector<std::vector<SetPartition::Label>> shard_prefixes(const StreamShape& shape, std::size_t depth);

/// Bell number |Q(n)| via the Bell triangle.
BigInt count_partitions(std::size_t n);

/// |Q_k^m(kN)| in closed form: (kN-m)! / ((N-1)!^m N!^(k-m) (k-m)!).
BigInt count_equipartitions(std::size_t k, std::size_t block_size, std::size_t m);

std::vector<SetPartition> collect(PartitionStream stream);

/// Rank/unrank for the lexicographic enumeration of Q(n), n <= 25 (so that
/// every rank fits in 64 bits).
class PartitionRanker {
 public:
  explicit PartitionRanker(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t rank(const SetPartition& p) const;
  SetPartition unrank(std::uint64_t index) const;

 private:
  std::uint64_t completions(std::size_t pos, std::size_t open) const {
    return table_[pos * (n_ + 2) + open];
  }

  std::size_t n_;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> table_;  // completions for positions pos..n-1 with `open` blocks used
};

inline constexpr std::size_t kMaxRankedSize = 25;

}  // namespace cslab
