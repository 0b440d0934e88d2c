#include "cslab/enumerate.hpp"

#include "cslab/error.hpp"

#include <algorithm>

namespace cslab {

PartitionStream::PartitionStream(StreamShape shape) : shape_(std::move(shape)) {
  const std::size_t n = shape_.n;
  if (n == 0) throw DomainError("partition streams need at least one point");
  if (shape_.separated > n) {
    throw DomainError("cannot separate " + std::to_string(shape_.separated) + " points in a domain of " +
                      std::to_string(n));
  }
  if (shape_.prefix.size() > n) throw DomainError("shard prefix longer than the domain");
  if (shape_.max_block_size && *shape_.max_block_size == 0) throw DomainError("block size cap must be positive");
  if (shape_.max_blocks && *shape_.max_blocks == 0) throw DomainError("block count cap must be positive");

  rgs_.assign(n, 0);
  counts_.assign(n + 1, 0);
  open_.assign(n + 1, 0);
  fixed_ = std::max<std::size_t>({1, shape_.prefix.size(), shape_.separated});

  // Streams whose caps cannot hold n points are empty.
  if (shape_.max_blocks && shape_.max_block_size &&
      *shape_.max_blocks * *shape_.max_block_size < n) {
    done_ = true;
  }
}

bool PartitionStream::feasible_label(std::size_t pos, SetPartition::Label label) const {
  if (label > open_[pos]) return false;
  if (shape_.max_blocks && label >= *shape_.max_blocks) return false;
  if (shape_.max_block_size && counts_[label] >= *shape_.max_block_size) return false;
  return true;
}

void PartitionStream::place(std::size_t pos, SetPartition::Label label) {
  rgs_[pos] = label;
  open_[pos + 1] = label == open_[pos] ? open_[pos] + 1 : open_[pos];
  ++counts_[label];
}

void PartitionStream::unplace(std::size_t pos) { --counts_[rgs_[pos]]; }

bool PartitionStream::fill_from(std::size_t pos) {
  for (std::size_t j = pos; j < shape_.n; ++j) {
    SetPartition::Label label = 0;
    while (label <= open_[j] && !feasible_label(j, label)) ++label;
    if (label > open_[j]) {
      while (j-- > pos) unplace(j);
      return false;
    }
    place(j, label);
  }
  return true;
}

bool PartitionStream::next() {
  if (done_) return false;
  const std::size_t n = shape_.n;
  bool found = false;
  if (!started_) {
    started_ = true;
    found = true;
    for (std::size_t i = 0; i < fixed_ && found; ++i) {
      SetPartition::Label label;
      if (i < shape_.prefix.size()) {
        label = shape_.prefix[i];
        if (i < shape_.separated && label != i) found = false;
      } else {
        label = static_cast<SetPartition::Label>(i);  // forced by separation
      }
      if (found && !feasible_label(i, label)) found = false;
      if (found) place(i, label);
    }
    found = found && fill_from(fixed_);
  } else {
    for (std::size_t pos = n; pos-- > fixed_ && !found;) {
      SetPartition::Label label = rgs_[pos];
      unplace(pos);
      for (++label; label <= open_[pos]; ++label) {
        if (!feasible_label(pos, label)) continue;
        place(pos, label);
        if (fill_from(pos + 1)) {
          found = true;
          break;
        }
        unplace(pos);
      }
    }
  }
  if (!found) {
    done_ = true;
    return false;
  }
  current_.rgs_.assign(rgs_.begin(), rgs_.end());
  current_.blocks_ = open_[n];
  return true;
}

PartitionStream enumerate_partitions(std::size_t n, std::size_t m) {
  if (n == 0) throw DomainError("enumerate_partitions: n must be positive");
  if (m > n) throw DomainError("enumerate_partitions: m = " + std::to_string(m) + " exceeds n = " + std::to_string(n));
  return PartitionStream(StreamShape{.n = n, .separated = m});
}

PartitionStream enumerate_equipartitions(std::size_t k, std::size_t block_size, std::size_t m) {
  if (k == 0 || block_size == 0) throw DomainError("enumerate_equipartitions: k and N must be positive");
  if (m > k) throw DomainError("enumerate_equipartitions: m = " + std::to_string(m) + " exceeds k = " + std::to_string(k));
  return PartitionStream(StreamShape{
      .n = k * block_size, .separated = m, .max_blocks = k, .max_block_size = block_size});
}

std::vector<std::vector<SetPartition::Label>> shard_prefixes(const StreamShape& shape, std::size_t depth) {
  depth = std::min(depth, shape.n);
  if (depth < shape.prefix.size()) throw DomainError("shard depth shorter than the existing prefix");
  StreamShape head = shape;
  head.n = depth;
  head.separated = std::min(shape.separated, depth);
  std::vector<std::vector<SetPartition::Label>> out;
  PartitionStream stream(std::move(head));
  while (stream.next()) {
    auto rgs = stream.current().rgs();
    out.emplace_back(rgs.begin(), rgs.end());
  }
  return out;
}

BigInt count_partitions(std::size_t n) {
  // Bell triangle: each row starts with the last entry of the previous row and
  // every later entry adds its left neighbour and the entry above that neighbour.
  std::vector<BigInt> row{1};
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<BigInt> next;
    next.reserve(row.size() + 1);
    next.push_back(row.back());
    for (const auto& above : row) next.push_back(next.back() + above);
    row = std::move(next);
  }
  return row.back();
}

BigInt count_equipartitions(std::size_t k, std::size_t block_size, std::size_t m) {
  if (k == 0 || block_size == 0 || m > k) throw DomainError("count_equipartitions: need k, N >= 1 and m <= k");
  BigInt denominator = power(factorial(block_size - 1), m) * power(factorial(block_size), k - m) * factorial(k - m);
  return factorial(k * block_size - m) / denominator;
}

std::vector<SetPartition> collect(PartitionStream stream) {
  std::vector<SetPartition> out;
  while (stream.next()) out.push_back(stream.current());
  return out;
}

PartitionRanker::PartitionRanker(std::size_t n) : n_(n), table_((n + 1) * (n + 2), 0) {
  if (n == 0 || n > kMaxRankedSize) {
    throw DomainError("partition ranking supports 1 <= n <= " + std::to_string(kMaxRankedSize));
  }
  for (std::size_t open = 0; open <= n + 1; ++open) table_[n * (n + 2) + open] = 1;
  for (std::size_t pos = n; pos-- > 1;) {
    // Only open <= pos is reachable, which keeps every entry below Bell(n).
    for (std::size_t open = 1; open <= pos; ++open) {
      table_[pos * (n + 2) + open] = open * completions(pos + 1, open) + completions(pos + 1, open + 1);
    }
  }
  total_ = completions(1, 1);
}

std::uint64_t PartitionRanker::rank(const SetPartition& p) const {
  if (p.size() != n_) throw DomainError("rank: partition size does not match the ranker");
  std::uint64_t r = 0;
  std::size_t open = 1;
  for (std::size_t i = 1; i < n_; ++i) {
    auto label = p.block_of(i);
    r += label * completions(i + 1, open);
    if (label == open) ++open;
  }
  return r;
}

SetPartition PartitionRanker::unrank(std::uint64_t index) const {
  if (index >= total_) throw DomainError("unrank: index out of range");
  std::vector<SetPartition::Label> rgs(n_, 0);
  std::size_t open = 1;
  for (std::size_t i = 1; i < n_; ++i) {
    std::uint64_t per = completions(i + 1, open);
    std::uint64_t label = std::min<std::uint64_t>(index / per, open);
    index -= label * per;
    rgs[i] = static_cast<SetPartition::Label>(label);
    if (label == open) ++open;
  }
  return SetPartition::from_rgs(std::move(rgs));
}

}  // namespace cslab
