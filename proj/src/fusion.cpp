#include "cslab/fusion.hpp"

#include "cslab/enumerate.hpp"
#include "cslab/error.hpp"
#include "cslab/rng.hpp"

#include <sstream>

namespace cslab {

void FTable::set(const PartitionPrefix& arg, PartitionPrefix value) {
  entries_[arg.to_string()] = {arg, std::move(value)};
}

const PartitionPrefix& FTable::at(const PartitionPrefix& arg) const {
  auto it = entries_.find(arg.to_string());
  if (it == entries_.end()) throw DomainError("f-table has no entry for " + arg.to_string());
  return it->second.second;
}

std::vector<std::pair<PartitionPrefix, PartitionPrefix>> FTable::entries() const {
  std::vector<std::pair<PartitionPrefix, PartitionPrefix>> out;
  out.reserve(entries_.size());
  for (const auto& [key, entry] : entries_) out.push_back(entry);
  return out;
}

std::string FTable::to_text() const {
  std::string out;
  for (const auto& [key, entry] : entries_) out += key + " -> " + entry.second.to_string() + "\n";
  return out;
}

FTable FTable::parse(std::string_view text) {
  FTable f;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto arrow = line.find("->");
    if (arrow == std::string::npos) throw DomainError("f-table line " + std::to_string(line_no) + " lacks '->'");
    auto trim = [](std::string_view s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string_view::npos ? std::string_view{} : s.substr(b, e - b + 1);
    };
    f.set(PartitionPrefix::parse(trim(std::string_view(line).substr(0, arrow))),
          PartitionPrefix::parse(trim(std::string_view(line).substr(arrow + 2))));
  }
  return f;
}

EMapTable fusion_e_map(const PartitionPrefix& b, const FTable& f, std::size_t m_prime) {
  EMapTable e(m_prime);
  for (const auto& t : collect(enumerate_partitions(m_prime, 0))) {
    e.set(t, project_g(f.at(induced_coarsening_h(t, b, m_prime)), b, m_prime));
  }
  return e;
}

FusionStep fusion_step_detail(const PartitionPrefix& b, const FTable& f, std::size_t n0, std::size_t ell,
                              std::size_t m_prime) {
  const std::size_t m = n0 + ell + 1;
  if (m > m_prime) {
    throw DomainError("fusion_step: n0 + ell + 1 = " + std::to_string(m) + " exceeds M' = " + std::to_string(m_prime));
  }
  if (b.visible_blocks() <= m_prime) {
    throw InsufficientTruncation("fusion_step: B shows " + std::to_string(b.visible_blocks()) +
                                 " blocks; mu_M'(B) must be visible");
  }
  const auto e = fusion_e_map(b, f, m_prime);
  // Exactly m blocks, so that mu_m(h(s')) = mu_M'(B).
  auto witness = find_witness(e, m, m_prime, m);
  if (!witness) {
    throw ThresholdError("fusion_step: no witness in Q^" + std::to_string(m) + "(" + std::to_string(m_prime) +
                         ") with " + std::to_string(m) + " blocks; enlarge M'");
  }
  return FusionStep{induced_coarsening_h(*witness, b, m_prime), *witness, m_prime};
}

bool check_condition_1(const PartitionPrefix& b, const PartitionPrefix& b_next, std::size_t n0, std::size_t ell) {
  return approx_r(b_next, n0 + ell) == approx_r(b, n0 + ell);
}

Condition2Check check_condition_2(const PartitionPrefix& b_next, const FTable& f, std::size_t n0, std::size_t ell) {
  const std::size_t m = n0 + ell + 1;
  const auto reference = approx_r(b_next, m);
  const std::size_t cut = reference.size();
  Condition2Check out;
  for (const auto& [a, fa] : f.entries()) {
    ++out.arguments;
    if (a.length() <= cut || !prefix_coarsens(a, b_next)) continue;
    const auto& rel = a.relation();
    const bool a_cut = cut == 0 || rel.block_of(cut) == rel.restrict(cut).block_count();
    if (!a_cut) continue;
    ++out.applicable;
    const auto image = trace(fa, b_next, m).partition;
    const auto own = trace(a, b_next, m).partition;
    if (is_coarsening(image, own) || !is_coarsening(image, reference)) continue;
    out.violations.push_back(a.to_string() + " -> " + fa.to_string());
  }
  return out;
}

std::optional<SetPartition> exhaustive_witness_recheck(const EMapTable& e, std::size_t m, std::size_t blocks) {
  for (const auto& s : collect(enumerate_partitions(e.m_prime(), 0))) {
    if (s.block_count() != blocks) continue;
    bool separated = true;
    for (std::size_t i = 0; i < m && separated; ++i) separated = s.block_of(i) == i;
    if (separated && witness_holds(e, s)) return s;
  }
  return std::nullopt;
}

FusionSearch fusion_search(const PartitionPrefix& b, const std::function<FTable(std::size_t)>& table_for,
                           std::size_t n0, std::size_t ell, std::size_t cap) {
  FusionSearch out;
  for (std::size_t m_prime = n0 + ell + 1; m_prime <= cap; m_prime *= 2) {
    out.tried.push_back(m_prime);
    try {
      out.step = fusion_step_detail(b, table_for(m_prime), n0, ell, m_prime);
      return out;
    } catch (const ThresholdError&) {
    }
  }
  return out;
}

FTable random_f_table(const PartitionPrefix& b, std::size_t m_prime, std::uint64_t seed) {
  const PartitionRanker ranker(m_prime);
  FTable f;
  std::uint64_t index = 0;
  for (const auto& t : collect(enumerate_partitions(m_prime, 0))) {
    auto rng = sample_rng(seed, index++);
    PartitionPrefix value;
    if (uniform_below(rng, 2) == 0) {
      value = induced_coarsening_h(ranker.unrank(uniform_below(rng, ranker.total())), b, m_prime);
    } else {
      std::vector<SetPartition::Label> labels(b.length());
      const auto colours = static_cast<std::uint64_t>(b.visible_blocks());
      for (auto& l : labels) l = static_cast<SetPartition::Label>(uniform_below(rng, colours));
      value = PartitionPrefix(SetPartition::from_labels(labels));
    }
    f.set(induced_coarsening_h(t, b, m_prime), std::move(value));
  }
  return f;
}

FTable identity_f_table(const PartitionPrefix& b, std::size_t m_prime) {
  FTable f;
  for (const auto& t : collect(enumerate_partitions(m_prime, 0))) {
    auto h = induced_coarsening_h(t, b, m_prime);
    f.set(h, h);
  }
  return f;
}

}  // namespace cslab
