#include "cslab/report.hpp"

#include <sstream>

namespace cslab {

nlohmann::ordered_json to_json(const WitnessReport& report) {
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [name, value] : report.params) params[name] = value;

  nlohmann::ordered_json out;
  out["lemma"] = report.lemma;
  out["params"] = params;
  out["strategy"] = report.strategy;
  out["seed"] = report.seed;
  out["witness"] = report.witness ? nlohmann::ordered_json(*report.witness) : nlohmann::ordered_json(nullptr);
  out["bad_pair_count"] = to_string(report.bad_pair_count);
  out["candidate_count"] = to_string(report.candidate_count);
  out["pair_count"] = to_string(report.pair_count);
  out["ratio"] = to_string(report.ratio);
  out["certificate_ratio"] = to_string(report.certificate_ratio);
  out["failure_census"] = report.failure_census;
  out["maps_tested"] = report.maps_tested;
  out["maps_failed"] = report.maps_failed;
  out["counterexample"] =
      report.counterexample ? nlohmann::ordered_json(*report.counterexample) : nlohmann::ordered_json(nullptr);
  out["failing_shapes"] = report.failing_shapes;
  out["certificate_consistent"] = report.certificate_consistent;
  for (const auto& [name, value] : report.extra) out[name] = value;
  out["elapsed_ms"] = report.elapsed_ms;
  return out;
}

namespace {

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char c : raw) {
    if (c == '"') quoted.push_back('"');
    quoted.push_back(c);
  }
  quoted.push_back('"');
  return quoted;
}

}  // namespace

std::string csv_header() {
  return "lemma,params,strategy,seed,witness,bad_pair_count,candidate_count,ratio,maps_tested,maps_failed,elapsed_ms";
}

std::string to_csv_row(const WitnessReport& report) {
  std::string params;
  for (const auto& [name, value] : report.params) {
    if (!params.empty()) params += ';';
    params += name + "=" + std::to_string(value);
  }
  std::ostringstream row;
  row << csv_field(report.lemma) << ',' << csv_field(params) << ',' << csv_field(report.strategy) << ','
      << report.seed << ',' << csv_field(report.witness.value_or("null")) << ','
      << to_string(report.bad_pair_count) << ',' << to_string(report.candidate_count) << ','
      << to_string(report.ratio) << ',' << report.maps_tested << ',' << report.maps_failed << ','
      << report.elapsed_ms;
  return row.str();
}

}  // namespace cslab
