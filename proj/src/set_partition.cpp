#include "cslab/set_partition.hpp"

#include "cslab/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>

namespace cslab {

namespace {

constexpr std::size_t kInlineBlocks = 64;

// Scratch remap table: stack storage for small block counts, heap otherwise.
class RemapTable {
 public:
  explicit RemapTable(std::size_t size) : size_(size) {
    if (size > kInlineBlocks) heap_.resize(size);
    std::fill_n(data(), size_, kUnset);
  }
  SetPartition::Label& operator[](std::size_t i) { return data()[i]; }
  static constexpr SetPartition::Label kUnset = ~SetPartition::Label{0};

 private:
  SetPartition::Label* data() { return size_ > kInlineBlocks ? heap_.data() : inline_.data(); }
  std::size_t size_;
  std::array<SetPartition::Label, kInlineBlocks> inline_{};
  std::vector<SetPartition::Label> heap_;
};

}  // namespace

SetPartition SetPartition::from_rgs(std::vector<Label> rgs) {
  std::size_t blocks = 0;
  for (std::size_t i = 0; i < rgs.size(); ++i) {
    if (rgs[i] > blocks) {
      throw DomainError("not a restricted growth string: entry " + std::to_string(i) + " is " +
                        std::to_string(rgs[i]) + " but at most " + std::to_string(blocks) +
                        " is allowed");
    }
    if (rgs[i] == blocks) ++blocks;
  }
  return SetPartition(std::move(rgs), blocks);
}

SetPartition SetPartition::from_labels(std::span<const Label> labels) {
  std::vector<Label> rgs(labels.size());
  std::vector<std::pair<Label, Label>> seen;  // (label, block) in first-occurrence order
  Label blocks = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = std::find_if(seen.begin(), seen.end(),
                           [&](const auto& entry) { return entry.first == labels[i]; });
    if (it == seen.end()) {
      seen.emplace_back(labels[i], blocks);
      rgs[i] = blocks++;
    } else {
      rgs[i] = it->second;
    }
  }
  return SetPartition(std::move(rgs), blocks);
}

SetPartition SetPartition::discrete(std::size_t n) {
  std::vector<Label> rgs(n);
  for (std::size_t i = 0; i < n; ++i) rgs[i] = static_cast<Label>(i);
  return SetPartition(std::move(rgs), n);
}

SetPartition SetPartition::single_block(std::size_t n) {
  return SetPartition(std::vector<Label>(n, 0), n == 0 ? 0 : 1);
}

SetPartition SetPartition::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
      s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  std::vector<Label> rgs;
  if (text.empty()) return from_rgs(std::move(rgs));
  while (true) {
    auto comma = text.find(',');
    auto field = trim(text.substr(0, comma));
    Label value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
      throw DomainError("malformed partition text: '" + std::string(field) + "'");
    }
    rgs.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return from_rgs(std::move(rgs));
}

std::vector<std::vector<std::size_t>> SetPartition::blocks() const {
  std::vector<std::vector<std::size_t>> out(blocks_);
  for (std::size_t i = 0; i < rgs_.size(); ++i) out[rgs_[i]].push_back(i);
  return out;
}

std::vector<std::size_t> SetPartition::block_minima() const {
  std::vector<std::size_t> minima;
  minima.reserve(blocks_);
  for (std::size_t i = 0; i < rgs_.size(); ++i) {
    if (rgs_[i] == minima.size()) minima.push_back(i);
  }
  return minima;
}

std::vector<std::size_t> SetPartition::block_sizes() const {
  std::vector<std::size_t> sizes(blocks_, 0);
  for (Label b : rgs_) ++sizes[b];
  return sizes;
}

SetPartition SetPartition::restrict(std::size_t len) const {
  if (len > rgs_.size()) {
    throw InsufficientTruncation("cannot restrict a partition of " + std::to_string(rgs_.size()) +
                                 " points to " + std::to_string(len) + " points");
  }
  std::vector<Label> rgs(rgs_.begin(), rgs_.begin() + static_cast<std::ptrdiff_t>(len));
  Label blocks = 0;
  for (Label b : rgs) blocks = std::max<Label>(blocks, b + 1);
  return SetPartition(std::move(rgs), blocks);
}

std::string SetPartition::to_string() const {
  std::string out;
  out.reserve(rgs_.size() * 3);
  for (std::size_t i = 0; i < rgs_.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(rgs_[i]);
  }
  return out;
}

bool is_coarsening(const SetPartition& s, const SetPartition& t) {
  if (s.size() != t.size()) {
    throw DomainError("coarsening test on partitions of different sizes (" +
                      std::to_string(s.size()) + " vs " + std::to_string(t.size()) + ")");
  }
  // Once s has more blocks than t it cannot be coarser.
  if (s.block_count() > t.block_count()) return false;
  RemapTable image(t.block_count());
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto& slot = image[t.block_of(i)];
    if (slot == RemapTable::kUnset) {
      slot = s.block_of(i);
    } else if (slot != s.block_of(i)) {
      return false;
    }
  }
  return true;
}

SetPartition meet_refine(const SetPartition& a, const SetPartition& b) {
  if (a.size() != b.size()) {
    throw DomainError("meet of partitions of different sizes (" + std::to_string(a.size()) +
                      " vs " + std::to_string(b.size()) + ")");
  }
  // Pair (a-block, b-block) -> new block, numbered on first occurrence.
  const std::size_t width = b.block_count();
  std::vector<SetPartition::Label> pair_block(a.block_count() * width, RemapTable::kUnset);
  std::vector<SetPartition::Label> rgs(a.size());
  SetPartition::Label next = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto& slot = pair_block[a.block_of(i) * width + b.block_of(i)];
    if (slot == RemapTable::kUnset) slot = next++;
    rgs[i] = slot;
  }
  return SetPartition::from_rgs(std::move(rgs));
}

}  // namespace cslab

std::size_t std::hash<cslab::SetPartition>::operator()(const cslab::SetPartition& p) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ p.size();
  for (auto label : p.rgs()) {
    h ^= label;
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}
