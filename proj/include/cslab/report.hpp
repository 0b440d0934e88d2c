#pragma once

#include "cslab/bigint.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cslab {

/// Outcome of a witness search or a lemma campaign. Campaign fields
/// (maps_tested onward) stay at their defaults for single-map runs.
struct WitnessReport {
  std::string lemma = "comb";  // "comb", "comb-general" or "tree"
  std::map<std::string, std::uint64_t> params;
  std::string strategy = "single";
  std::uint64_t seed = 0;

  std::optional<std::string> witness;
  BigInt bad_pair_count = 0;
  BigInt candidate_count = 0;
  BigInt pair_count = 0;      // |{(s, t) : t <= s}| (tree: |CT(P)|)
  Rational ratio = 0;         // bad_pair_count / pair_count
  Rational certificate_ratio = 0;  // bad_pair_count / candidate_count
  std::vector<std::uint64_t> failure_census;  // bad pairs per candidate, in candidate order
  double elapsed_ms = 0;

  std::uint64_t maps_tested = 0;
  std::uint64_t maps_failed = 0;
  std::optional<std::string> counterexample;
  std::vector<std::string> failing_shapes;
  bool certificate_consistent = true;
  /// Further labelled values, kept in insertion order.
  std::vector<std::pair<std::string, nlohmann::ordered_json>> extra;
};

nlohmann::ordered_json to_json(const WitnessReport& report);

/// CSV with the same top-level columns as the JSON document.
std::string csv_header();
std::string to_csv_row(const WitnessReport& report);

}  // namespace cslab
