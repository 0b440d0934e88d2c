#include "cslab/cs_space.hpp"

#include "cslab/error.hpp"

#include <algorithm>
#include <charconv>

namespace cslab {

namespace {

// mu_n(B), which requires block n to be visible.
std::size_t mu_at(const PartitionPrefix& b, std::size_t n, const char* op) {
  if (n >= b.visible_blocks()) {
    throw InsufficientTruncation(std::string(op) + ": mu_" + std::to_string(n) + " is not visible in a prefix of length " +
                                 std::to_string(b.length()) + " with " + std::to_string(b.visible_blocks()) +
                                 " blocks");
  }
  return mu_sequence(b)[n];
}

}  // namespace

PartitionPrefix PartitionPrefix::parse(std::string_view text) {
  auto semi = text.find(';');
  if (text.substr(0, 2) != "L=" || semi == std::string_view::npos) {
    throw DomainError("partition prefix must look like 'L=<n>;<rgs>'");
  }
  auto header = text.substr(2, semi - 2);
  std::size_t length = 0;
  auto [ptr, ec] = std::from_chars(header.data(), header.data() + header.size(), length);
  if (header.empty() || ec != std::errc{} || ptr != header.data() + header.size()) {
    throw DomainError("malformed prefix header '" + std::string(text.substr(0, semi)) + "'");
  }
  auto relation = SetPartition::parse(text.substr(semi + 1));
  if (relation.size() != length) {
    throw DomainError("prefix header says L=" + std::to_string(length) + " but the rgs has " +
                      std::to_string(relation.size()) + " entries");
  }
  return PartitionPrefix(std::move(relation));
}

std::string PartitionPrefix::to_string() const {
  return "L=" + std::to_string(length()) + ";" + relation_.to_string();
}

std::vector<std::size_t> mu_sequence(const PartitionPrefix& b) { return b.relation().block_minima(); }

SetPartition approx_r(const PartitionPrefix& b, std::size_t n) {
  if (n == 0) return SetPartition{};
  return b.relation().restrict(mu_at(b, n, "approx_r"));
}

TraceResult trace(const PartitionPrefix& a, const PartitionPrefix& b, std::size_t n) {
  const std::size_t cut = n == 0 ? 0 : mu_at(b, n, "trace");
  if (cut > a.length()) {
    throw InsufficientTruncation("trace: mu_" + std::to_string(n) + "(B) = " + std::to_string(cut) +
                                 " exceeds the length of A (" + std::to_string(a.length()) + ")");
  }
  return TraceResult{a.relation().restrict(cut), n, a.length()};
}

std::size_t depth(const PartitionPrefix& b, const SetPartition& s) {
  const std::size_t size = s.size();
  if (size == 0) return 0;
  if (size >= b.length()) {
    throw InsufficientTruncation("depth: cannot tell whether " + std::to_string(size) +
                                 " is a block minimum of a prefix of length " + std::to_string(b.length()));
  }
  const auto minima = mu_sequence(b);
  auto it = std::lower_bound(minima.begin(), minima.end(), size);
  if (it == minima.end() || *it != size) {
    throw NotACut("depth: " + std::to_string(size) + " is not a block minimum of B");
  }
  return static_cast<std::size_t>(it - minima.begin());
}

bool prefix_coarsens(const PartitionPrefix& coarse, const PartitionPrefix& fine) {
  const std::size_t common = std::min(coarse.length(), fine.length());
  return is_coarsening(coarse.relation().restrict(common), fine.relation().restrict(common));
}

bool cube_member(const SetPartition& s, const PartitionPrefix& a, const PartitionPrefix& b) {
  const std::size_t size = s.size();
  if (size > b.length()) {
    throw InsufficientTruncation("cube_member: s is longer than the window of B");
  }
  if (size > a.length()) {
    throw InsufficientTruncation("cube_member: s is longer than the window of A");
  }
  if (b.relation().restrict(size) != s) return false;
  if (size == b.length() && size != 0) {
    // s matches all of B's window, but whether |s| opens a new B-block is unknown.
    throw InsufficientTruncation("cube_member: end-extension undecidable at the window edge");
  }
  const bool at_cut = size == 0 || b.relation().block_of(size) == b.relation().restrict(size).block_count();
  if (!at_cut) return false;
  return prefix_coarsens(b, a);
}

PartitionPrefix induced_coarsening_h(const SetPartition& t, const PartitionPrefix& b, std::size_t m_prime) {
  if (t.size() != m_prime) {
    throw DomainError("induced_coarsening_h: t has " + std::to_string(t.size()) + " points, expected M' = " +
                      std::to_string(m_prime));
  }
  if (b.visible_blocks() < m_prime) {
    throw InsufficientTruncation("induced_coarsening_h: B shows " + std::to_string(b.visible_blocks()) +
                                 " blocks, fewer than M' = " + std::to_string(m_prime));
  }
  const auto shift = static_cast<SetPartition::Label>(t.block_count());
  std::vector<SetPartition::Label> labels(b.length());
  for (std::size_t p = 0; p < b.length(); ++p) {
    const auto block = b.relation().block_of(p);
    labels[p] = block < m_prime ? t.block_of(block) : shift + (block - static_cast<SetPartition::Label>(m_prime));
  }
  return PartitionPrefix(SetPartition::from_labels(labels));
}

SetPartition project_g(const PartitionPrefix& c, const PartitionPrefix& b, std::size_t m_prime) {
  const std::size_t cut = m_prime == 0 ? 0 : mu_at(b, m_prime, "project_g");
  if (c.length() < cut) {
    throw InsufficientTruncation("project_g: C is shorter than mu_M'(B) = " + std::to_string(cut));
  }
  const SetPartition below = c.relation().restrict(cut);
  const SetPartition reference = b.relation().restrict(cut);
  if (!is_coarsening(below, reference)) return SetPartition::discrete(m_prime);
  const auto minima = mu_sequence(b);
  std::vector<SetPartition::Label> labels(m_prime);
  for (std::size_t i = 0; i < m_prime; ++i) labels[i] = below.block_of(minima[i]);
  return SetPartition::from_labels(labels);
}

}  // namespace cslab
