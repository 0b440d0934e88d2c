#pragma once

#include "cslab/bigint.hpp"
#include "cslab/comb_lemma.hpp"
#include "cslab/report.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cslab {

/// Finite set of naturals as a bitset. Ordered by sorted element tuple.
class PointSet {
 public:
  PointSet() = default;
  static PointSet of(std::initializer_list<std::uint32_t> points);
  static PointSet of(const std::vector<std::uint32_t>& points);

  void insert(std::uint32_t p);
  bool contains(std::uint32_t p) const;
  bool empty() const;
  std::size_t size() const;
  bool subset_of(const PointSet& other) const;
  PointSet united(const PointSet& other) const;
  std::vector<std::uint32_t> elements() const;
  /// "{0,2,5}".
  std::string to_string() const;

  friend bool operator==(const PointSet& a, const PointSet& b);
  friend std::strong_ordering operator<=>(const PointSet& a, const PointSet& b);

 private:
  std::vector<std::uint64_t> words_;  // no trailing zero words
};

/// A (k,N)-partition P of a finite X: k disjoint blocks, each of size >= N.
class BlockPartitionKN {
 public:
  /// Throws DomainError on empty, overlapping, or undersized blocks.
  BlockPartitionKN(std::vector<std::vector<std::uint32_t>> blocks, std::size_t min_block_size);
  /// X_i = {iN, ..., iN + N - 1}.
  static BlockPartitionKN equal_blocks(std::size_t k, std::size_t block_size);

  std::size_t k() const noexcept { return blocks_.size(); }
  std::size_t min_block_size() const noexcept { return n_; }
  const std::vector<std::vector<std::uint32_t>>& blocks() const noexcept { return blocks_; }
  const std::vector<std::uint32_t>& ground() const noexcept { return ground_; }

  /// |T(P)| = prod (|X_i| + 1) and |CT(P)| = prod |X_i|.
  BigInt section_count() const;
  BigInt complete_section_count() const;

  /// Mixed-radix index of a section (digit 0 = block missed); throws
  /// DomainError when `f` is not a section.
  std::uint64_t section_index(const PointSet& f) const;
  PointSet section_at(std::uint64_t index) const;
  bool is_section(const PointSet& f) const;
  bool is_complete_section(const PointSet& f) const;

  /// First `size` points of every block: the equal-block (k, size)-partition inside P.
  BlockPartitionKN shrink(std::size_t size) const;

 private:
  std::vector<std::vector<std::uint32_t>> blocks_;  // each sorted
  std::size_t n_;
  std::vector<std::uint32_t> ground_;               // sorted
  std::vector<std::int64_t> block_of_;              // per point value, -1 outside X
  std::vector<std::uint32_t> position_;             // per point value, index within its block
};

/// Every section (or every complete section), each once, in mixed-radix order.
std::vector<PointSet> enumerate_sections(const BlockPartitionKN& p, bool complete_only);

/// A total map e : T(P) -> subsets of the naturals, indexed by section_index.
class SectionMapTable {
 public:
  explicit SectionMapTable(const BlockPartitionKN& p);
  SectionMapTable(const BlockPartitionKN& p, const std::function<PointSet(const PointSet&)>& rule);

  void set(const PointSet& section, PointSet value);
  const PointSet& at(const PointSet& section) const;
  const PointSet& at_index(std::uint64_t index) const { return values_.at(index); }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  const BlockPartitionKN* p_;
  std::vector<PointSet> values_;
};

/// e(F) subset F or e(F) not subset E, for every F subset E.
bool section_witness_holds(const SectionMapTable& e, const BlockPartitionKN& p, const PointSet& e_candidate);

/// Complete sections E with some bad F, computed from the F side.
struct SectionCensus {
  std::vector<char> bad;  // per complete section, in enumerate_sections order
  std::uint64_t bad_count = 0;
  std::optional<PointSet> witness;  // least good E in point-set order
};
SectionCensus section_census(const SectionMapTable& e, const BlockPartitionKN& p);

/// Least E in CT(P) (point-set order) with the witness property; absent if none.
std::optional<PointSet> find_section_witness(const SectionMapTable& e, const BlockPartitionKN& p);

/// The same map restricted to the sections of a sub-partition whose blocks
/// lie inside the blocks of `p` (values unchanged).
SectionMapTable restrict_map(const SectionMapTable& e, const BlockPartitionKN& p, const BlockPartitionKN& sub);

using TreeStrategy = std::variant<Exhaustive, Sampled>;

struct TreeOptions {
  unsigned jobs = 1;
  BigInt exhaustive_cap = 1000000;
};

/// Tests maps e : T(P) -> P(X) on the equal-block (k,N)-partition. The
/// report carries the worst measured |{E : some F bad}| / |CT(P)|, the bound
/// 2^k (1 - ((N-1)/N)^k), and the least N with bound < 1 for this k.
WitnessReport verify_tree(std::size_t k, std::size_t block_size, const TreeStrategy& strategy,
                          const TreeOptions& options = {});

}  // namespace cslab
