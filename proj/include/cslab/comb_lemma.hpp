#pragma once

#include "cslab/bigint.hpp"
#include "cslab/enumerate.hpp"
#include "cslab/report.hpp"
#include "cslab/set_partition.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace cslab {

/// A finite map e : Q(M') -> Q(M'), stored as (argument rank, value rank)
/// pairs over the lexicographic enumeration of Q(M'). Entries not listed
/// explicitly fall back to the identity, to a constant, or (Fallback::None)
/// are undefined; reading an undefined entry throws DomainError.
class EMapTable {
 public:
  enum class Fallback { None, Identity, Constant };

  explicit EMapTable(std::size_t m_prime);
  static EMapTable identity(std::size_t m_prime);
  static EMapTable constant(std::size_t m_prime, const SetPartition& value);

  std::size_t m_prime() const noexcept { return ranker_.n(); }
  Fallback fallback() const noexcept { return fallback_; }

  void set(const SetPartition& arg, const SetPartition& value);
  bool defined_at(const SetPartition& arg) const;
  SetPartition at(const SetPartition& arg) const;
  bool is_total() const;

  /// Explicit entries sorted by argument rank.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> entries() const;

  /// One "arg -> value" line per explicit entry, in rank order.
  std::string to_text() const;
  /// Reads "arg -> value" lines; blank lines and '#' comments are skipped.
  static EMapTable parse(std::string_view text, std::size_t m_prime, Fallback fallback);

 private:
  PartitionRanker ranker_;
  std::unordered_map<std::uint64_t, std::uint64_t> entries_;
  Fallback fallback_ = Fallback::None;
  std::uint64_t constant_rank_ = 0;
};

/// Candidates of a witness search together with every t that coarsens at
/// least one candidate. Only those t can take part in a bad pair, so e-maps
/// are sampled and stored on them alone.
struct CombInstance {
  std::size_t points = 0;
  std::vector<SetPartition> candidates;
  std::vector<SetPartition> relevant;                    // lexicographic
  std::vector<std::vector<std::uint32_t>> coarsenings;   // per candidate: indices into relevant
  std::vector<std::vector<std::uint32_t>> above;         // per relevant t: candidates s with t <= s

  BigInt pair_count() const;
};

/// Candidates Q_k^m(kN).
CombInstance equipartition_instance(std::size_t k, std::size_t block_size, std::size_t m);
/// Candidates Q^m(M'), optionally only those with exactly `exact_blocks` blocks.
CombInstance general_instance(std::size_t m, std::size_t m_prime, std::optional<std::size_t> exact_blocks = {});

/// All t <= s, obtained by merging the blocks of s along each element of Q(|s|).
std::vector<SetPartition> coarsenings_of(const SetPartition& s);

/// (s, t) is bad when t <= s, e(t) <= s and not e(t) <= t.
inline bool is_bad_pair(const SetPartition& s, const SetPartition& t, const SetPartition& value) {
  return !is_coarsening(value, t) && is_coarsening(value, s);
}

/// Bad-pair census of one map given by its values on instance.relevant.
struct MapCensus {
  std::vector<std::uint64_t> per_candidate;
  std::uint64_t bad_pairs = 0;
  std::optional<std::size_t> witness;  // first candidate without bad pairs
  /// Sorted "t->e(t)" entries of every t occurring in a bad pair.
  std::vector<std::string> failing_entries;
};
MapCensus census(const CombInstance& instance, std::span<const SetPartition> values);

/// Exact census of B_e over Q_k^m(kN) x Q(kN), with ratio against |{(s, t) : t <= s}|.
/// e must be a map on Q(kN) defined at every coarsening of a candidate.
WitnessReport bad_pairs(const EMapTable& e, std::size_t k, std::size_t m, std::size_t block_size);

/// Least s in Q^m(M') (lexicographic rgs) such that every t <= s has
/// e(t) <= t or e(t) not <= s. With `exact_blocks`, only s with that many blocks.
std::optional<SetPartition> find_witness(const EMapTable& e, std::size_t m, std::size_t m_prime,
                                         std::optional<std::size_t> exact_blocks = {});

/// Same search over the equipartition candidates Q_k^m(kN).
std::optional<SetPartition> find_equipartition_witness(const EMapTable& e, std::size_t k, std::size_t m,
                                                       std::size_t block_size);

/// Re-validates a witness by scanning all of Q(|s|) for the t below s.
bool witness_holds(const EMapTable& e, const SetPartition& s);

struct Exhaustive {};
struct Sampled {
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
};
/// Greedy adversary: every relevant t gets a value invalidating as many
/// candidates as possible; ties are broken at random from `seed`. `budget`
/// maps are generated.
struct Adversarial {
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;
};
using Strategy = std::variant<Exhaustive, Sampled, Adversarial>;

std::string strategy_name(const Strategy& strategy);

/// Partial campaign state; merging is order-independent and ties always
/// resolve to the lowest map index, so results do not depend on sharding.
struct CampaignAggregate {
  std::uint64_t next_index = 0;
  std::uint64_t maps_tested = 0;
  std::uint64_t maps_failed = 0;
  std::optional<std::uint64_t> first_failure;
  std::optional<std::string> counterexample;
  std::optional<std::uint64_t> worst_index;
  std::uint64_t worst_bad = 0;
  std::optional<std::string> worst_witness;
  std::vector<std::uint64_t> worst_census;
  std::set<std::string> failing_shapes;
  bool certificate_consistent = true;

  void merge(const CampaignAggregate& other);
  nlohmann::ordered_json to_json() const;
  static CampaignAggregate from_json(const nlohmann::json& j);
};

struct CampaignOptions {
  unsigned jobs = 1;
  /// Largest number of e-maps an exhaustive run may enumerate.
  BigInt exhaustive_cap = 1000000;
  std::uint64_t checkpoint_every = 10000;
  std::function<void(const CampaignAggregate&)> on_checkpoint;
  std::optional<CampaignAggregate> resume;
};

/// Exhaustive cap from LAB_BUDGET_CAP, else `fallback`.
BigInt budget_cap_from_env(const BigInt& fallback = 1000000);

/// Tests e-maps on Q(kN) per `strategy` against the candidates Q_k^m(kN).
/// Each map gets a census-based witness and an independent direct search,
/// which must agree (certificate_consistent).
WitnessReport verify_comb(std::size_t k, std::size_t m, std::size_t block_size, const Strategy& strategy,
                          const CampaignOptions& options = {});

/// Number of e-maps an exhaustive verify_comb would enumerate.
BigInt exhaustive_map_count(const CombInstance& instance);

struct ThresholdSearch {
  /// Least N at which every sampled map had a witness and max |B_e| / |Q_k^m(kN)| < 1.
  /// Empirical: it bounds the lemma's threshold from below only for the maps tried.
  std::optional<std::size_t> threshold;
  std::vector<WitnessReport> runs;
};
ThresholdSearch min_threshold_comb(std::size_t k, std::size_t m, const Sampled& search, std::size_t n_max,
                                   const CampaignOptions& options = {});

}  // namespace cslab
