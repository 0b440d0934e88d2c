#include "cslab/tree_lemma.hpp"

#include "cslab/bounds.hpp"
#include "cslab/error.hpp"
#include "cslab/rng.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <thread>

namespace cslab {

// ---------------------------------------------------------------- PointSet

PointSet PointSet::of(std::initializer_list<std::uint32_t> points) {
  PointSet s;
  for (auto p : points) s.insert(p);
  return s;
}

PointSet PointSet::of(const std::vector<std::uint32_t>& points) {
  PointSet s;
  for (auto p : points) s.insert(p);
  return s;
}

void PointSet::insert(std::uint32_t p) {
  if (words_.size() <= p / 64) words_.resize(p / 64 + 1, 0);
  words_[p / 64] |= std::uint64_t{1} << (p % 64);
}

bool PointSet::contains(std::uint32_t p) const {
  return p / 64 < words_.size() && ((words_[p / 64] >> (p % 64)) & 1U);
}

bool PointSet::empty() const { return words_.empty(); }

std::size_t PointSet::size() const {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool PointSet::subset_of(const PointSet& other) const {
  if (words_.size() > other.words_.size()) return false;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~other.words_[i]) return false;
  }
  return true;
}

PointSet PointSet::united(const PointSet& other) const {
  PointSet out = words_.size() >= other.words_.size() ? *this : other;
  const auto& small = words_.size() >= other.words_.size() ? other.words_ : words_;
  for (std::size_t i = 0; i < small.size(); ++i) out.words_[i] |= small[i];
  return out;
}

std::vector<std::uint32_t> PointSet::elements() const {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    for (auto w = words_[i]; w; w &= w - 1) {
      out.push_back(static_cast<std::uint32_t>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
    }
  }
  return out;
}

std::string PointSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (auto p : elements()) {
    if (!first) out += ',';
    out += std::to_string(p);
    first = false;
  }
  return out + "}";
}

bool operator==(const PointSet& a, const PointSet& b) { return a.words_ == b.words_; }

std::strong_ordering operator<=>(const PointSet& a, const PointSet& b) {
  const auto x = a.elements();
  const auto y = b.elements();
  return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end());
}

// ---------------------------------------------------------------- BlockPartitionKN

BlockPartitionKN::BlockPartitionKN(std::vector<std::vector<std::uint32_t>> blocks, std::size_t min_block_size)
    : blocks_(std::move(blocks)), n_(min_block_size) {
  if (blocks_.empty()) throw DomainError("(k,N)-partition needs at least one block");
  std::uint32_t top = 0;
  for (auto& b : blocks_) {
    if (b.size() < n_ || b.empty()) {
      throw DomainError("(k,N)-partition block of size " + std::to_string(b.size()) + " is below N = " +
                        std::to_string(n_));
    }
    std::sort(b.begin(), b.end());
    if (std::adjacent_find(b.begin(), b.end()) != b.end()) throw DomainError("(k,N)-partition block repeats a point");
    top = std::max(top, b.back());
  }
  block_of_.assign(static_cast<std::size_t>(top) + 1, -1);
  position_.assign(static_cast<std::size_t>(top) + 1, 0);
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    for (std::size_t j = 0; j < blocks_[i].size(); ++j) {
      const auto p = blocks_[i][j];
      if (block_of_[p] != -1) throw DomainError("(k,N)-partition blocks overlap at " + std::to_string(p));
      block_of_[p] = static_cast<std::int64_t>(i);
      position_[p] = static_cast<std::uint32_t>(j);
      ground_.push_back(p);
    }
  }
  std::sort(ground_.begin(), ground_.end());
}

BlockPartitionKN BlockPartitionKN::equal_blocks(std::size_t k, std::size_t block_size) {
  if (k == 0 || block_size == 0) throw DomainError("equal_blocks: k and N must be positive");
  std::vector<std::vector<std::uint32_t>> blocks(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < block_size; ++j) blocks[i].push_back(static_cast<std::uint32_t>(i * block_size + j));
  }
  return BlockPartitionKN(std::move(blocks), block_size);
}

BigInt BlockPartitionKN::section_count() const {
  BigInt total = 1;
  for (const auto& b : blocks_) total *= b.size() + 1;
  return total;
}

BigInt BlockPartitionKN::complete_section_count() const {
  BigInt total = 1;
  for (const auto& b : blocks_) total *= b.size();
  return total;
}

bool BlockPartitionKN::is_section(const PointSet& f) const {
  std::vector<char> hit(blocks_.size(), 0);
  for (auto p : f.elements()) {
    if (p >= block_of_.size() || block_of_[p] < 0) return false;
    auto& h = hit[static_cast<std::size_t>(block_of_[p])];
    if (h) return false;
    h = 1;
  }
  return true;
}

bool BlockPartitionKN::is_complete_section(const PointSet& f) const {
  return is_section(f) && f.size() == blocks_.size();
}

std::uint64_t BlockPartitionKN::section_index(const PointSet& f) const {
  std::vector<std::uint64_t> digit(blocks_.size(), 0);
  for (auto p : f.elements()) {
    if (p >= block_of_.size() || block_of_[p] < 0) throw DomainError(f.to_string() + " is not a section: leaves X");
    auto& d = digit[static_cast<std::size_t>(block_of_[p])];
    if (d) throw DomainError(f.to_string() + " is not a section: meets a block twice");
    d = position_[p] + 1;
  }
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) index = index * (blocks_[i].size() + 1) + digit[i];
  return index;
}

PointSet BlockPartitionKN::section_at(std::uint64_t index) const {
  PointSet f;
  for (std::size_t i = blocks_.size(); i-- > 0;) {
    const auto radix = blocks_[i].size() + 1;
    const auto d = index % radix;
    index /= radix;
    if (d) f.insert(blocks_[i][d - 1]);
  }
  return f;
}

BlockPartitionKN BlockPartitionKN::shrink(std::size_t size) const {
  if (size == 0 || size > n_) throw DomainError("shrink: size must lie in [1, N]");
  std::vector<std::vector<std::uint32_t>> blocks;
  for (const auto& b : blocks_) blocks.emplace_back(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(size));
  return BlockPartitionKN(std::move(blocks), size);
}

std::vector<PointSet> enumerate_sections(const BlockPartitionKN& p, bool complete_only) {
  const auto& blocks = p.blocks();
  const std::size_t low = complete_only ? 1 : 0;
  std::vector<std::size_t> digit(blocks.size(), low);
  std::vector<PointSet> out;
  while (true) {
    PointSet f;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (digit[i]) f.insert(blocks[i][digit[i] - 1]);
    }
    out.push_back(std::move(f));
    std::size_t i = blocks.size();
    while (i > 0) {
      --i;
      if (digit[i] < blocks[i].size()) {
        ++digit[i];
        break;
      }
      digit[i] = low;
      if (i == 0) return out;
    }
  }
}

// ---------------------------------------------------------------- SectionMapTable

SectionMapTable::SectionMapTable(const BlockPartitionKN& p) : p_(&p) {
  values_.resize(p.section_count().convert_to<std::size_t>());
}

SectionMapTable::SectionMapTable(const BlockPartitionKN& p, const std::function<PointSet(const PointSet&)>& rule)
    : SectionMapTable(p) {
  for (std::uint64_t i = 0; i < values_.size(); ++i) values_[i] = rule(p.section_at(i));
}

void SectionMapTable::set(const PointSet& section, PointSet value) {
  values_.at(p_->section_index(section)) = std::move(value);
}

const PointSet& SectionMapTable::at(const PointSet& section) const { return values_.at(p_->section_index(section)); }

// ---------------------------------------------------------------- witnesses

bool section_witness_holds(const SectionMapTable& e, const BlockPartitionKN& p, const PointSet& candidate) {
  if (!p.is_complete_section(candidate)) throw DomainError(candidate.to_string() + " is not a complete section");
  const auto points = candidate.elements();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << points.size()); ++mask) {
    PointSet f;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if ((mask >> i) & 1U) f.insert(points[i]);
    }
    const auto& v = e.at(f);
    if (!v.subset_of(f) && v.subset_of(candidate)) return false;
  }
  return true;
}

SectionCensus section_census(const SectionMapTable& e, const BlockPartitionKN& p) {
  const auto& blocks = p.blocks();
  const std::size_t k = blocks.size();
  const auto complete = enumerate_sections(p, true);
  SectionCensus out;
  out.bad.assign(complete.size(), 0);

  std::vector<std::uint64_t> weight(k, 1);  // mixed-radix weights of CT(P), block 0 most significant
  for (std::size_t i = k - 1; i-- > 0;) weight[i] = weight[i + 1] * blocks[i + 1].size();

  for (std::uint64_t j = 0; j < e.size(); ++j) {
    const auto f = p.section_at(j);
    const auto& v = e.at_index(j);
    if (v.subset_of(f)) continue;
    const auto g = f.united(v);
    if (!p.is_section(g)) continue;  // no complete section contains both
    // Fixed digits where g meets a block; every E extending g gets marked.
    std::vector<std::int64_t> fixed(k, -1);
    for (auto point : g.elements()) {
      for (std::size_t i = 0; i < k; ++i) {
        auto it = std::lower_bound(blocks[i].begin(), blocks[i].end(), point);
        if (it != blocks[i].end() && *it == point) fixed[i] = it - blocks[i].begin();
      }
    }
    std::vector<std::size_t> digit(k, 0);
    for (std::size_t i = 0; i < k; ++i) digit[i] = fixed[i] < 0 ? 0 : static_cast<std::size_t>(fixed[i]);
    while (true) {
      std::uint64_t index = 0;
      for (std::size_t i = 0; i < k; ++i) index += digit[i] * weight[i];
      out.bad[index] = 1;
      std::size_t i = k;
      bool done = true;
      while (i-- > 0) {
        if (fixed[i] >= 0) continue;
        if (digit[i] + 1 < blocks[i].size()) {
          ++digit[i];
          done = false;
          break;
        }
        digit[i] = 0;
      }
      if (done) break;
    }
  }
  for (std::size_t i = 0; i < complete.size(); ++i) {
    if (out.bad[i]) {
      ++out.bad_count;
    } else if (!out.witness || complete[i] < *out.witness) {
      out.witness = complete[i];
    }
  }
  return out;
}

std::optional<PointSet> find_section_witness(const SectionMapTable& e, const BlockPartitionKN& p) {
  std::optional<PointSet> best;
  for (const auto& candidate : enumerate_sections(p, true)) {
    if (best && !(candidate < *best)) continue;
    if (section_witness_holds(e, p, candidate)) best = candidate;
  }
  return best;
}

SectionMapTable restrict_map(const SectionMapTable& e, const BlockPartitionKN& p, const BlockPartitionKN& sub) {
  for (const auto& point : sub.ground()) {
    if (!p.is_section(PointSet::of({point}))) throw DomainError("restrict_map: sub-partition leaves X");
  }
  return SectionMapTable(sub, [&](const PointSet& f) { return e.at(f); });
}

// ---------------------------------------------------------------- campaigns

namespace {

struct TreeAggregate {
  std::uint64_t maps_tested = 0;
  std::uint64_t maps_failed = 0;
  std::optional<std::uint64_t> first_failure;
  std::optional<std::string> counterexample;
  std::optional<std::uint64_t> worst_index;
  std::uint64_t worst_bad = 0;
  std::optional<std::string> worst_witness;
  bool consistent = true;
  bool bound_respected = true;

  void merge(const TreeAggregate& o) {
    maps_tested += o.maps_tested;
    maps_failed += o.maps_failed;
    if (o.first_failure && (!first_failure || *o.first_failure < *first_failure)) {
      first_failure = o.first_failure;
      counterexample = o.counterexample;
    }
    if (o.worst_index && (!worst_index || o.worst_bad > worst_bad ||
                          (o.worst_bad == worst_bad && *o.worst_index < *worst_index))) {
      worst_index = o.worst_index;
      worst_bad = o.worst_bad;
      worst_witness = o.worst_witness;
    }
    consistent = consistent && o.consistent;
    bound_respected = bound_respected && o.bound_respected;
  }
};

std::string map_text(const SectionMapTable& e, const BlockPartitionKN& p) {
  std::string out;
  for (std::uint64_t j = 0; j < e.size(); ++j) {
    if (j) out += "; ";
    out += p.section_at(j).to_string() + "->" + e.at_index(j).to_string();
  }
  return out;
}

}  // namespace

WitnessReport verify_tree(std::size_t k, std::size_t block_size, const TreeStrategy& strategy,
                          const TreeOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const auto p = BlockPartitionKN::equal_blocks(k, block_size);
  const auto sections = p.section_count();
  const auto complete = p.complete_section_count();
  if (sections > 1000000) throw BudgetError("verify_tree: |T(P)| = " + to_string(sections) + " is too large");
  const std::size_t x = p.ground().size();
  const std::size_t table_size = sections.convert_to<std::size_t>();
  const BigInt map_space = power(BigInt(2), x * table_size);

  std::uint64_t total = 0;
  std::uint64_t seed = 0;
  if (std::holds_alternative<Exhaustive>(strategy)) {
    if (map_space > options.exhaustive_cap || x * table_size >= 64) {
      throw BudgetError("exhaustive verify_tree would enumerate " + to_string(map_space) +
                        " maps, above the cap of " + to_string(options.exhaustive_cap));
    }
    total = map_space.convert_to<std::uint64_t>();
  } else {
    total = std::get<Sampled>(strategy).count;
    seed = std::get<Sampled>(strategy).seed;
  }

  const Rational bound = tree_bound(k, block_size);
  auto make_map = [&](std::uint64_t index) {
    SectionMapTable e(p);
    if (std::holds_alternative<Exhaustive>(strategy)) {
      for (std::uint64_t j = 0; j < table_size; ++j) {
        PointSet v;
        for (std::size_t b = 0; b < x; ++b) {
          if ((index >> (j * x + b)) & 1U) v.insert(p.ground()[b]);
        }
        e.set(p.section_at(j), std::move(v));
      }
    } else {
      auto rng = sample_rng(seed, index);
      for (std::uint64_t j = 0; j < table_size; ++j) {
        PointSet v;
        for (std::size_t b = 0; b < x; ++b) {
          if (uniform_below(rng, 2)) v.insert(p.ground()[b]);
        }
        e.set(p.section_at(j), std::move(v));
      }
    }
    return e;
  };

  auto evaluate = [&](std::uint64_t index) {
    const auto e = make_map(index);
    const auto census = section_census(e, p);
    const auto direct = find_section_witness(e, p);
    TreeAggregate a;
    a.maps_tested = 1;
    a.worst_index = index;
    a.worst_bad = census.bad_count;
    if (census.witness) a.worst_witness = census.witness->to_string();
    a.consistent = census.witness == direct && (!direct || section_witness_holds(e, p, *direct));
    if (bound <= 1) a.bound_respected = Rational(census.bad_count, complete) <= bound;
    if (!census.witness) {
      a.maps_failed = 1;
      a.first_failure = index;
      a.counterexample = map_text(e, p);
    }
    return a;
  };

  const unsigned jobs = std::max(1u, options.jobs);
  std::vector<TreeAggregate> partial(jobs);
  auto work = [&](unsigned worker) {
    for (std::uint64_t i = worker; i < total; i += jobs) partial[worker].merge(evaluate(i));
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  TreeAggregate agg;
  for (const auto& part : partial) agg.merge(part);

  WitnessReport report;
  report.lemma = "tree";
  report.params = {{"k", k}, {"N", block_size}};
  report.strategy = std::holds_alternative<Exhaustive>(strategy) ? "exhaustive" : "sampled";
  report.seed = seed;
  report.witness = agg.worst_witness;
  report.bad_pair_count = agg.worst_bad;
  report.candidate_count = complete;
  report.pair_count = complete;
  report.ratio = Rational(report.bad_pair_count, complete);
  report.certificate_ratio = report.ratio;
  report.maps_tested = agg.maps_tested;
  report.maps_failed = agg.maps_failed;
  report.counterexample = agg.counterexample;
  report.certificate_consistent = agg.consistent;
  report.extra.emplace_back("section_count", to_string(sections));
  report.extra.emplace_back("bound", to_string(bound));
  report.extra.emplace_back("intermediate_bound", to_string(tree_intermediate_bound(k, block_size)));
  report.extra.emplace_back("bound_threshold", tree_bound_threshold(k));
  report.extra.emplace_back("bound_respected", agg.bound_respected);
  report.extra.emplace_back("witness_rate", agg.maps_tested == 0
                                                ? std::string("0")
                                                : to_string(Rational(agg.maps_tested - agg.maps_failed,
                                                                     agg.maps_tested)));
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace cslab
