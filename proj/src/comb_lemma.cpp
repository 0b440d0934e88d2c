#include "cslab/comb_lemma.hpp"

#include "cslab/error.hpp"
#include "cslab/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace cslab {

namespace {

const std::vector<SetPartition>& all_partitions(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::vector<SetPartition>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<SetPartition> all;
    if (n == 0) {
      all.emplace_back();
    } else {
      all = collect(enumerate_partitions(n, 0));
    }
    it = cache.emplace(n, std::move(all)).first;
  }
  return it->second;
}

std::string entry_text(const SetPartition& arg, const SetPartition& value) {
  return arg.to_string() + "->" + value.to_string();
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

CombInstance build_instance(std::size_t points, std::vector<SetPartition> candidates) {
  CombInstance inst;
  inst.points = points;
  inst.candidates = std::move(candidates);
  std::unordered_map<SetPartition, std::uint32_t> index;
  std::vector<std::vector<SetPartition>> per_candidate;
  per_candidate.reserve(inst.candidates.size());
  for (const auto& s : inst.candidates) {
    per_candidate.push_back(coarsenings_of(s));
    for (const auto& t : per_candidate.back()) index.emplace(t, 0);
  }
  inst.relevant.reserve(index.size());
  for (const auto& [t, unused] : index) inst.relevant.push_back(t);
  std::sort(inst.relevant.begin(), inst.relevant.end());
  for (std::uint32_t j = 0; j < inst.relevant.size(); ++j) index[inst.relevant[j]] = j;

  inst.coarsenings.resize(inst.candidates.size());
  inst.above.resize(inst.relevant.size());
  for (std::uint32_t i = 0; i < inst.candidates.size(); ++i) {
    for (const auto& t : per_candidate[i]) {
      const auto j = index.at(t);
      inst.coarsenings[i].push_back(j);
      inst.above[j].push_back(i);
    }
  }
  return inst;
}

std::uint64_t bell_u64(std::size_t n) { return PartitionRanker(n).total(); }

constexpr std::size_t kListedShapes = 8;

}  // namespace

// ---------------------------------------------------------------- EMapTable

EMapTable::EMapTable(std::size_t m_prime) : ranker_(m_prime) {}

EMapTable EMapTable::identity(std::size_t m_prime) {
  EMapTable e(m_prime);
  e.fallback_ = Fallback::Identity;
  return e;
}

EMapTable EMapTable::constant(std::size_t m_prime, const SetPartition& value) {
  EMapTable e(m_prime);
  e.fallback_ = Fallback::Constant;
  e.constant_rank_ = e.ranker_.rank(value);
  return e;
}

void EMapTable::set(const SetPartition& arg, const SetPartition& value) {
  entries_[ranker_.rank(arg)] = ranker_.rank(value);
}

bool EMapTable::defined_at(const SetPartition& arg) const {
  return fallback_ != Fallback::None || entries_.count(ranker_.rank(arg)) != 0;
}

SetPartition EMapTable::at(const SetPartition& arg) const {
  const auto r = ranker_.rank(arg);
  if (auto it = entries_.find(r); it != entries_.end()) return ranker_.unrank(it->second);
  switch (fallback_) {
    case Fallback::Identity:
      return arg;
    case Fallback::Constant:
      return ranker_.unrank(constant_rank_);
    case Fallback::None:
      break;
  }
  throw DomainError("e-map is not defined at " + arg.to_string());
}

bool EMapTable::is_total() const { return fallback_ != Fallback::None || entries_.size() == ranker_.total(); }

std::vector<std::pair<std::uint64_t, std::uint64_t>> EMapTable::entries() const {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out(entries_.begin(), entries_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::string EMapTable::to_text() const {
  std::string out;
  for (const auto& [arg, value] : entries()) {
    out += ranker_.unrank(arg).to_string() + " -> " + ranker_.unrank(value).to_string() + "\n";
  }
  return out;
}

EMapTable EMapTable::parse(std::string_view text, std::size_t m_prime, Fallback fallback) {
  if (fallback == Fallback::Constant) throw DomainError("EMapTable::parse: constant fallback needs a value");
  EMapTable e(m_prime);
  e.fallback_ = fallback;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto arrow = line.find("->");
    if (arrow == std::string::npos) throw DomainError("e-map line " + std::to_string(line_no) + " lacks '->'");
    auto arg = SetPartition::parse(std::string_view(line).substr(0, arrow));
    auto value = SetPartition::parse(std::string_view(line).substr(arrow + 2));
    if (arg.size() != m_prime || value.size() != m_prime) {
      throw DomainError("e-map line " + std::to_string(line_no) + " is not over Q(" + std::to_string(m_prime) + ")");
    }
    e.set(arg, value);
  }
  return e;
}

// ---------------------------------------------------------------- instances

BigInt CombInstance::pair_count() const {
  BigInt total = 0;
  for (const auto& c : coarsenings) total += c.size();
  return total;
}

std::vector<SetPartition> coarsenings_of(const SetPartition& s) {
  const auto& merges = all_partitions(s.block_count());
  std::vector<SetPartition> out;
  out.reserve(merges.size());
  std::vector<SetPartition::Label> rgs(s.size());
  for (const auto& merge : merges) {
    // s is canonical and merge is an rgs over s's blocks, so the composite is canonical too.
    for (std::size_t i = 0; i < s.size(); ++i) rgs[i] = merge.block_of(s.block_of(i));
    out.push_back(SetPartition::from_rgs(rgs));
  }
  return out;
}

CombInstance equipartition_instance(std::size_t k, std::size_t block_size, std::size_t m) {
  return build_instance(k * block_size, collect(enumerate_equipartitions(k, block_size, m)));
}

CombInstance general_instance(std::size_t m, std::size_t m_prime, std::optional<std::size_t> exact_blocks) {
  StreamShape shape{.n = m_prime, .separated = m};
  if (exact_blocks) shape.max_blocks = *exact_blocks;
  if (m > m_prime) throw DomainError("general_instance: m exceeds M'");
  std::vector<SetPartition> candidates;
  PartitionStream stream(shape);
  while (stream.next()) {
    if (!exact_blocks || stream.current().block_count() == *exact_blocks) candidates.push_back(stream.current());
  }
  return build_instance(m_prime, std::move(candidates));
}

// ---------------------------------------------------------------- census

MapCensus census(const CombInstance& instance, std::span<const SetPartition> values) {
  if (values.size() != instance.relevant.size()) throw DomainError("census: one value per relevant argument expected");
  std::vector<char> below_arg(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) below_arg[j] = is_coarsening(values[j], instance.relevant[j]);

  MapCensus out;
  out.per_candidate.assign(instance.candidates.size(), 0);
  std::vector<char> failing(values.size(), 0);
  for (std::size_t i = 0; i < instance.candidates.size(); ++i) {
    const auto& s = instance.candidates[i];
    std::uint64_t bad = 0;
    for (auto j : instance.coarsenings[i]) {
      if (!below_arg[j] && is_coarsening(values[j], s)) {
        ++bad;
        failing[j] = 1;
      }
    }
    out.per_candidate[i] = bad;
    out.bad_pairs += bad;
    if (bad == 0 && !out.witness) out.witness = i;
  }
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (failing[j]) out.failing_entries.push_back(entry_text(instance.relevant[j], values[j]));
  }
  return out;
}

WitnessReport bad_pairs(const EMapTable& e, std::size_t k, std::size_t m, std::size_t block_size) {
  const auto start = std::chrono::steady_clock::now();
  if (e.m_prime() != k * block_size) {
    throw DomainError("bad_pairs: e is a map on Q(" + std::to_string(e.m_prime()) + "), expected Q(" +
                      std::to_string(k * block_size) + ")");
  }
  const auto inst = equipartition_instance(k, block_size, m);
  std::vector<SetPartition> values;
  values.reserve(inst.relevant.size());
  for (const auto& t : inst.relevant) values.push_back(e.at(t));
  const auto c = census(inst, values);

  WitnessReport report;
  report.params = {{"k", k}, {"m", m}, {"N", block_size}};
  if (c.witness) report.witness = inst.candidates[*c.witness].to_string();
  report.bad_pair_count = c.bad_pairs;
  report.candidate_count = inst.candidates.size();
  report.pair_count = inst.pair_count();
  report.ratio = Rational(report.bad_pair_count, report.pair_count);
  report.certificate_ratio = Rational(report.bad_pair_count, report.candidate_count);
  report.failure_census = c.per_candidate;
  if (!c.failing_entries.empty()) report.failing_shapes.push_back(join(c.failing_entries, "; "));
  report.maps_tested = 1;
  report.maps_failed = c.witness ? 0 : 1;
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ---------------------------------------------------------------- witness search

namespace {

bool candidate_holds(const EMapTable& e, const SetPartition& s) {
  for (const auto& t : coarsenings_of(s)) {
    if (is_bad_pair(s, t, e.at(t))) return false;
  }
  return true;
}

std::optional<SetPartition> first_witness(const EMapTable& e, PartitionStream stream,
                                          std::optional<std::size_t> exact_blocks) {
  while (stream.next()) {
    const auto& s = stream.current();
    if (exact_blocks && s.block_count() != *exact_blocks) continue;
    if (candidate_holds(e, s)) return s;
  }
  return std::nullopt;
}

}  // namespace

std::optional<SetPartition> find_witness(const EMapTable& e, std::size_t m, std::size_t m_prime,
                                         std::optional<std::size_t> exact_blocks) {
  if (e.m_prime() != m_prime) throw DomainError("find_witness: e is not a map on Q(M')");
  if (m > m_prime) throw DomainError("find_witness: m exceeds M'");
  StreamShape shape{.n = m_prime, .separated = m};
  if (exact_blocks) shape.max_blocks = *exact_blocks;
  return first_witness(e, PartitionStream(shape), exact_blocks);
}

std::optional<SetPartition> find_equipartition_witness(const EMapTable& e, std::size_t k, std::size_t m,
                                                       std::size_t block_size) {
  if (e.m_prime() != k * block_size) throw DomainError("find_equipartition_witness: e is not a map on Q(kN)");
  return first_witness(e, enumerate_equipartitions(k, block_size, m), std::nullopt);
}

bool witness_holds(const EMapTable& e, const SetPartition& s) {
  for (const auto& t : all_partitions(s.size())) {
    if (is_coarsening(t, s) && is_bad_pair(s, t, e.at(t))) return false;
  }
  return true;
}

// ---------------------------------------------------------------- campaigns

std::string strategy_name(const Strategy& strategy) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Exhaustive>) return "exhaustive";
        else if constexpr (std::is_same_v<T, Sampled>) return "sampled";
        else return "adversarial";
      },
      strategy);
}

void CampaignAggregate::merge(const CampaignAggregate& other) {
  next_index = std::max(next_index, other.next_index);
  maps_tested += other.maps_tested;
  maps_failed += other.maps_failed;
  if (other.first_failure && (!first_failure || *other.first_failure < *first_failure)) {
    first_failure = other.first_failure;
    counterexample = other.counterexample;
  }
  if (other.worst_index) {
    const bool better = !worst_index || other.worst_bad > worst_bad ||
                        (other.worst_bad == worst_bad && *other.worst_index < *worst_index);
    if (better) {
      worst_index = other.worst_index;
      worst_bad = other.worst_bad;
      worst_witness = other.worst_witness;
      worst_census = other.worst_census;
    }
  }
  failing_shapes.insert(other.failing_shapes.begin(), other.failing_shapes.end());
  certificate_consistent = certificate_consistent && other.certificate_consistent;
}

nlohmann::ordered_json CampaignAggregate::to_json() const {
  nlohmann::ordered_json j;
  j["next_index"] = next_index;
  j["maps_tested"] = maps_tested;
  j["maps_failed"] = maps_failed;
  j["first_failure"] = first_failure ? nlohmann::ordered_json(*first_failure) : nlohmann::ordered_json(nullptr);
  j["counterexample"] = counterexample ? nlohmann::ordered_json(*counterexample) : nlohmann::ordered_json(nullptr);
  j["worst_index"] = worst_index ? nlohmann::ordered_json(*worst_index) : nlohmann::ordered_json(nullptr);
  j["worst_bad"] = worst_bad;
  j["worst_witness"] = worst_witness ? nlohmann::ordered_json(*worst_witness) : nlohmann::ordered_json(nullptr);
  j["worst_census"] = worst_census;
  j["failing_shapes"] = std::vector<std::string>(failing_shapes.begin(), failing_shapes.end());
  j["certificate_consistent"] = certificate_consistent;
  return j;
}

CampaignAggregate CampaignAggregate::from_json(const nlohmann::json& j) {
  CampaignAggregate a;
  a.next_index = j.at("next_index").get<std::uint64_t>();
  a.maps_tested = j.at("maps_tested").get<std::uint64_t>();
  a.maps_failed = j.at("maps_failed").get<std::uint64_t>();
  if (!j.at("first_failure").is_null()) a.first_failure = j.at("first_failure").get<std::uint64_t>();
  if (!j.at("counterexample").is_null()) a.counterexample = j.at("counterexample").get<std::string>();
  if (!j.at("worst_index").is_null()) a.worst_index = j.at("worst_index").get<std::uint64_t>();
  a.worst_bad = j.at("worst_bad").get<std::uint64_t>();
  if (!j.at("worst_witness").is_null()) a.worst_witness = j.at("worst_witness").get<std::string>();
  a.worst_census = j.at("worst_census").get<std::vector<std::uint64_t>>();
  for (const auto& s : j.at("failing_shapes")) a.failing_shapes.insert(s.get<std::string>());
  a.certificate_consistent = j.at("certificate_consistent").get<bool>();
  return a;
}

BigInt budget_cap_from_env(const BigInt& fallback) {
  const char* raw = std::getenv("LAB_BUDGET_CAP");
  if (!raw || !*raw) return fallback;
  try {
    BigInt cap(raw);
    if (cap < 0) throw DomainError("LAB_BUDGET_CAP must be non-negative");
    return cap;
  } catch (const std::runtime_error&) {
    throw DomainError(std::string("LAB_BUDGET_CAP is not an integer: ") + raw);
  }
}

BigInt exhaustive_map_count(const CombInstance& instance) {
  return power(BigInt(bell_u64(instance.points)), instance.relevant.size());
}

namespace {

// Produces the values of map `index` on instance.relevant.
class MapSource {
 public:
  MapSource(const CombInstance& inst, const Strategy& strategy) : inst_(inst), strategy_(strategy), ranker_(inst.points) {
    if (std::holds_alternative<Adversarial>(strategy_)) prepare_adversary();
  }

  std::vector<SetPartition> values(std::uint64_t index) const {
    std::vector<SetPartition> out;
    out.reserve(inst_.relevant.size());
    if (std::holds_alternative<Exhaustive>(strategy_)) {
      const std::uint64_t radix = ranker_.total();
      for (std::size_t j = 0; j < inst_.relevant.size(); ++j) {
        out.push_back(ranker_.unrank(index % radix));
        index /= radix;
      }
    } else if (const auto* sampled = std::get_if<Sampled>(&strategy_)) {
      auto rng = sample_rng(sampled->seed, index);
      for (std::size_t j = 0; j < inst_.relevant.size(); ++j) {
        out.push_back(ranker_.unrank(uniform_below(rng, ranker_.total())));
      }
    } else {
      auto rng = sample_rng(std::get<Adversarial>(strategy_).seed, index);
      for (std::size_t j = 0; j < inst_.relevant.size(); ++j) {
        const auto& ties = best_values_[j];
        out.push_back(inst_.relevant[ties[uniform_below(rng, ties.size())]]);
      }
    }
    return out;
  }

 private:
  // Score of value v at argument t: candidates s >= t that v invalidates.
  // Values outside the relevant set coarsen no candidate and score zero.
  void prepare_adversary() {
    const auto& rel = inst_.relevant;
    best_values_.resize(rel.size());
    for (std::size_t j = 0; j < rel.size(); ++j) {
      std::uint64_t best = 0;
      std::vector<std::uint32_t> ties;
      for (std::uint32_t v = 0; v < rel.size(); ++v) {
        if (is_coarsening(rel[v], rel[j])) continue;
        std::uint64_t score = 0;
        for (auto i : inst_.above[j]) score += is_coarsening(rel[v], inst_.candidates[i]) ? 1 : 0;
        if (score > best) {
          best = score;
          ties.clear();
        }
        if (score == best && score > 0) ties.push_back(v);
      }
      if (ties.empty()) ties.push_back(static_cast<std::uint32_t>(j));  // nothing to gain: e(t) = t
      best_values_[j] = std::move(ties);
    }
  }

  const CombInstance& inst_;
  Strategy strategy_;
  PartitionRanker ranker_;
  std::vector<std::vector<std::uint32_t>> best_values_;
};

CampaignAggregate evaluate_map(const CombInstance& inst, const MapSource& source, std::uint64_t index,
                               std::size_t k, std::size_t m, std::size_t block_size) {
  const auto values = source.values(index);
  const auto c = census(inst, values);

  // Independent route: direct lazy search through an e-map table.
  EMapTable table(inst.points);
  for (std::size_t j = 0; j < values.size(); ++j) table.set(inst.relevant[j], values[j]);
  const auto direct = find_equipartition_witness(table, k, m, block_size);

  CampaignAggregate a;
  a.next_index = index + 1;
  a.maps_tested = 1;
  a.worst_index = index;
  a.worst_bad = c.bad_pairs;
  a.worst_census = c.per_candidate;
  if (c.witness) a.worst_witness = inst.candidates[*c.witness].to_string();
  const bool census_found = c.witness.has_value();
  const bool agree = census_found == direct.has_value() && (!direct || *direct == inst.candidates[*c.witness]);
  const bool pigeonhole_ok = c.bad_pairs >= inst.candidates.size() || direct.has_value();
  a.certificate_consistent = agree && pigeonhole_ok && (!direct || witness_holds(table, *direct));
  if (!census_found) {
    a.maps_failed = 1;
    a.first_failure = index;
    std::vector<std::string> entries;
    for (std::size_t j = 0; j < values.size(); ++j) entries.push_back(entry_text(inst.relevant[j], values[j]));
    a.counterexample = join(entries, "; ");
    a.failing_shapes.insert(join(c.failing_entries, "; "));
  }
  return a;
}

}  // namespace

WitnessReport verify_comb(std::size_t k, std::size_t m, std::size_t block_size, const Strategy& strategy,
                          const CampaignOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (k == 0 || block_size == 0) throw DomainError("verify_comb: k and N must be positive");
  if (m > k) throw DomainError("verify_comb: m exceeds k");
  if (k * block_size > kMaxRankedSize) throw DomainError("verify_comb: kN exceeds the rankable range");

  const auto inst = equipartition_instance(k, block_size, m);
  std::uint64_t total = 0;
  std::uint64_t seed = 0;
  BigInt map_space = exhaustive_map_count(inst);
  if (std::holds_alternative<Exhaustive>(strategy)) {
    if (map_space > options.exhaustive_cap) {
      throw BudgetError("exhaustive verify_comb would enumerate " + to_string(map_space) +
                        " e-maps, above the cap of " + to_string(options.exhaustive_cap));
    }
    total = map_space.convert_to<std::uint64_t>();
  } else if (const auto* s = std::get_if<Sampled>(&strategy)) {
    total = s->count;
    seed = s->seed;
  } else {
    total = std::get<Adversarial>(strategy).budget;
    seed = std::get<Adversarial>(strategy).seed;
  }

  const MapSource source(inst, strategy);
  CampaignAggregate agg = options.resume.value_or(CampaignAggregate{});
  const unsigned jobs = std::max(1u, options.jobs);
  const std::uint64_t chunk = std::max<std::uint64_t>(1, options.checkpoint_every);

  while (agg.next_index < total) {
    const std::uint64_t begin = agg.next_index;
    const std::uint64_t end = std::min(total, begin + chunk);
    std::vector<CampaignAggregate> partial(jobs);
    auto work = [&](unsigned worker) {
      for (std::uint64_t i = begin + worker; i < end; i += jobs) {
        partial[worker].merge(evaluate_map(inst, source, i, k, m, block_size));
      }
    };
    if (jobs == 1) {
      work(0);
    } else {
      std::vector<std::thread> threads;
      for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(work, w);
      for (auto& t : threads) t.join();
    }
    for (const auto& p : partial) agg.merge(p);
    agg.next_index = end;
    if (options.on_checkpoint) options.on_checkpoint(agg);
  }

  WitnessReport report;
  report.params = {{"k", k}, {"m", m}, {"N", block_size}};
  report.strategy = strategy_name(strategy);
  report.seed = seed;
  report.witness = agg.worst_witness;
  report.bad_pair_count = agg.worst_bad;
  report.candidate_count = inst.candidates.size();
  report.pair_count = inst.pair_count();
  report.ratio = Rational(report.bad_pair_count, report.pair_count);
  report.certificate_ratio = Rational(report.bad_pair_count, report.candidate_count);
  report.failure_census = agg.worst_census;
  report.maps_tested = agg.maps_tested;
  report.maps_failed = agg.maps_failed;
  report.counterexample = agg.counterexample;
  // Distinct failing shapes can number in the thousands; list the least few.
  for (const auto& shape : agg.failing_shapes) {
    if (report.failing_shapes.size() == kListedShapes) break;
    report.failing_shapes.push_back(shape);
  }
  report.certificate_consistent = agg.certificate_consistent;
  report.extra.emplace_back("worst_map_index",
                            agg.worst_index ? nlohmann::ordered_json(*agg.worst_index) : nlohmann::ordered_json(nullptr));
  report.extra.emplace_back("failing_shape_count", agg.failing_shapes.size());
  report.extra.emplace_back("relevant_arguments", inst.relevant.size());
  report.extra.emplace_back("map_space", to_string(map_space));
  if (std::holds_alternative<Adversarial>(strategy)) {
    report.extra.emplace_back("note", "greedy adversary; results are lower bounds on difficulty");
  }
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ThresholdSearch min_threshold_comb(std::size_t k, std::size_t m, const Sampled& search, std::size_t n_max,
                                   const CampaignOptions& options) {
  ThresholdSearch out;
  for (std::size_t n = 1; n <= n_max; ++n) {
    CampaignOptions per_run = options;
    per_run.resume.reset();
    auto report = verify_comb(k, m, n, search, per_run);
    const bool passed = report.maps_failed == 0 && report.certificate_ratio < 1;
    out.runs.push_back(std::move(report));
    if (passed) {
      out.threshold = n;
      break;
    }
  }
  return out;
}

}  // namespace cslab
