#include "cslab/profile.hpp"

#include "cslab/error.hpp"

namespace cslab {

namespace {

std::optional<BlockShape> shape_of(const std::vector<std::size_t>& points, std::size_t block_size, std::size_t m) {
  if (points.size() % block_size != 0) return std::nullopt;
  BlockShape shape{points.size() / block_size, 0};
  for (auto p : points) shape.m += p < m ? 1 : 0;
  if (shape.m > shape.k) return std::nullopt;
  return shape;
}

BigInt block_term(const BlockShape& b, std::size_t block_size) {
  return factorial(b.k * block_size - b.m) / factorial(b.k - b.m);
}

BigInt normaliser(std::size_t k, std::size_t block_size, std::size_t m) {
  return power(factorial(block_size - 1), m) * power(factorial(block_size), k - m);
}

BigInt exact_quotient(const BigInt& num, const BigInt& den) {
  BigInt q, r;
  boost::multiprecision::divide_qr(num, den, q, r);
  if (r != 0) throw LabError("extension count is not integral; profile arithmetic is inconsistent");
  return q;
}

}  // namespace

void CoarseningProfile::validate(std::size_t k, std::size_t m) const {
  std::size_t sum_k = 0, sum_m = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    if (b.shape.k == 0) throw DomainError("profile block " + std::to_string(i) + " has k_i = 0");
    if (b.shape.m > b.shape.k) throw DomainError("profile block " + std::to_string(i) + " has m_i > k_i");
    sum_k += b.shape.k;
    sum_m += b.shape.m;
    if (b.splits.empty()) continue;
    std::size_t split_k = 0, split_m = 0;
    for (const auto& s : b.splits) {
      if (s.k == 0) throw DomainError("profile block " + std::to_string(i) + " has an empty split");
      if (s.m > s.k) throw DomainError("profile block " + std::to_string(i) + " has a split with m_ij > k_ij");
      split_k += s.k;
      split_m += s.m;
    }
    if (split_k != b.shape.k || split_m != b.shape.m) {
      throw DomainError("profile block " + std::to_string(i) + " splits do not sum to (k_i, m_i)");
    }
  }
  if (sum_k != k) throw DomainError("profile k_i sum to " + std::to_string(sum_k) + ", expected " + std::to_string(k));
  if (sum_m != m) throw DomainError("profile m_i sum to " + std::to_string(sum_m) + ", expected " + std::to_string(m));
}

bool CoarseningProfile::strictly_split() const {
  for (const auto& b : blocks) {
    if (!b.splits.empty() && b.splits.front().k < b.shape.k) return true;
  }
  return false;
}

std::optional<CoarseningProfile> profile_of(const SetPartition& t, std::size_t block_size, std::size_t m) {
  if (block_size == 0) throw DomainError("profile_of: N must be positive");
  CoarseningProfile profile;
  for (const auto& block : t.blocks()) {
    auto shape = shape_of(block, block_size, m);
    if (!shape) return std::nullopt;
    profile.blocks.push_back({*shape, {}});
  }
  return profile;
}

std::optional<CoarseningProfile> profile_of(const SetPartition& t, const SetPartition& h,
                                            std::size_t block_size, std::size_t m) {
  if (!is_coarsening(t, h)) throw DomainError("profile_of: t must be a coarsening of h");
  auto profile = profile_of(t, block_size, m);
  if (!profile) return std::nullopt;
  // h-blocks are visited in order of their minima, so the first h-block seen
  // inside X_i is the one containing min(X_i).
  for (const auto& sub : h.blocks()) {
    auto shape = shape_of(sub, block_size, m);
    if (!shape) return std::nullopt;
    profile->blocks[t.block_of(sub.front())].splits.push_back(*shape);
  }
  return profile;
}

BigInt count_extensions(const CoarseningProfile& profile, std::size_t k, std::size_t block_size, std::size_t m) {
  if (block_size == 0) throw DomainError("count_extensions: N must be positive");
  profile.validate(k, m);
  BigInt product = 1;
  for (const auto& b : profile.blocks) product *= block_term(b.shape, block_size);
  return exact_quotient(product, normaliser(k, block_size, m));
}

BigInt count_refined_extensions(const CoarseningProfile& profile, std::size_t k, std::size_t block_size,
                                std::size_t m) {
  if (block_size == 0) throw DomainError("count_refined_extensions: N must be positive");
  profile.validate(k, m);
  BigInt product = 1;
  for (const auto& b : profile.blocks) {
    if (b.splits.empty()) throw DomainError("count_refined_extensions: profile has no recorded splits");
    for (const auto& s : b.splits) product *= block_term(s, block_size);
  }
  return exact_quotient(product, normaliser(k, block_size, m));
}

}  // namespace cslab
