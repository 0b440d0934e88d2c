// cslab: command-line front end for the partition lab.
//
// Exit status: 0 pass, 1 counterexample found, 2 usage error,
// 3 budget or threshold error.

#include "cslab/bigint.hpp"
#include "cslab/bounds.hpp"
#include "cslab/comb_lemma.hpp"
#include "cslab/cs_space.hpp"
#include "cslab/e1.hpp"
#include "cslab/enumerate.hpp"
#include "cslab/error.hpp"
#include "cslab/fusion.hpp"
#include "cslab/report.hpp"
#include "cslab/tree_lemma.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using cslab::BigInt;
using nlohmann::ordered_json;

enum Exit : int { kPass = 0, kCounterexample = 1, kUsage = 2, kBudget = 3 };

struct Config {
  std::string subcommand;
  std::size_t k = 2;
  std::size_t m = 0;
  std::size_t n = 1;
  std::size_t m_prime = 0;
  std::size_t horizon = 0;
  std::string strategy = "sampled";
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string out;
  std::string format;  // empty: table for count, json otherwise

  // Subcommand-specific inputs.
  std::size_t bell = 0;
  std::size_t b_max = 64;
  std::size_t n_max = 8;
  std::uint64_t a1 = 1, a2 = 1, b1 = 0, b2 = 0;
  bool equipartitions = false;
  std::size_t n0 = 0;
  std::size_t ell = 0;
  std::string prefix_a;
  std::string prefix_b;
  std::string prefix_d;
  std::string table_path;
  std::string grid_path;
  std::string emap_path;
  std::string fallback = "none";
  std::string checkpoint;
  bool resume = false;
};

ordered_json config_json(const Config& c) {
  ordered_json j;
  j["subcommand"] = c.subcommand;
  j["k"] = c.k;
  j["m"] = c.m;
  j["N"] = c.n;
  j["Mprime"] = c.m_prime;
  j["L"] = c.horizon;
  j["strategy"] = c.strategy;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["jobs"] = c.jobs;
  j["format"] = c.format;
  const std::string& s = c.subcommand;
  if (s == "count") j["bell"] = c.bell;
  if (s == "entropy-check") j["b_max"] = c.b_max;
  if (s == "find-threshold" || s == "ratio") j["n_max"] = c.n_max;
  if (s == "ratio") j["a1"] = c.a1, j["a2"] = c.a2, j["b1"] = c.b1, j["b2"] = c.b2;
  if (s == "enumerate") j["equipartitions"] = c.equipartitions;
  if (s == "fusion-demo") j["n0"] = c.n0, j["ell"] = c.ell, j["B"] = c.prefix_b, j["table"] = c.table_path;
  if (s == "reduce-e1") j["grid"] = c.grid_path;
  if (s == "blowup") j["A"] = c.prefix_a, j["D"] = c.prefix_d;
  if (s == "encode") j["A"] = c.prefix_a;
  if (s == "bad-pairs") j["emap"] = c.emap_path, j["fallback"] = c.fallback;
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cslab::DomainError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_atomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw cslab::DomainError("cannot write " + tmp);
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    write_atomically(c.out, text.back() == '\n' ? text : text + "\n");
  }
}

// Report document: the config first, then the report fields.
void emit_report(const Config& c, const cslab::WitnessReport& report) {
  if (c.format == "csv") {
    emit(c, cslab::csv_header() + "\n" + cslab::to_csv_row(report) + "\n");
    return;
  }
  ordered_json doc;
  doc["config"] = config_json(c);
  const auto fields = cslab::to_json(report);
  for (const auto& [key, value] : fields.items()) doc[key] = value;
  if (c.format == "table") {
    std::string text;
    for (const auto& [key, value] : doc.items()) {
      if (key == "config") continue;
      text += key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
    }
    emit(c, text);
    return;
  }
  emit(c, doc.dump(2));
}

// Small result documents for the non-campaign subcommands.
void emit_result(const Config& c, const ordered_json& result, const std::string& table_text) {
  if (c.format == "table") {
    emit(c, table_text);
    return;
  }
  if (c.format == "csv") {
    std::string header;
    std::string row;
    for (const auto& [key, value] : result.items()) {
      if (value.is_structured()) continue;
      header += (header.empty() ? "" : ",") + key;
      row += (row.empty() ? "" : ",") + (value.is_string() ? value.get<std::string>() : value.dump());
    }
    emit(c, header + "\n" + row + "\n");
    return;
  }
  ordered_json doc;
  doc["config"] = config_json(c);
  doc["seed"] = c.seed;
  for (const auto& [key, value] : result.items()) doc[key] = value;
  emit(c, doc.dump(2));
}

void check_jobs(const Config& c) {
  if (c.jobs == 0) throw cslab::DomainError("--jobs must be at least 1");
}

int run_enumerate(const Config& c) {
  const BigInt cap = cslab::budget_cap_from_env(BigInt(100000000));
  const BigInt total = c.equipartitions ? cslab::count_equipartitions(c.k, c.n, c.m) : cslab::count_partitions(c.n);
  if (total > cap) throw cslab::BudgetError("enumeration of " + cslab::to_string(total) + " partitions exceeds the cap");
  auto stream = c.equipartitions ? cslab::enumerate_equipartitions(c.k, c.n, c.m) : cslab::enumerate_partitions(c.n, c.m);
  if (c.format == "json") {
    ordered_json list = ordered_json::array();
    std::uint64_t count = 0;
    for (const auto& p : stream) {
      list.push_back(p.to_string());
      ++count;
    }
    emit_result(c, ordered_json{{"count", count}, {"partitions", list}}, "");
  } else {
    std::string text;
    for (const auto& p : stream) text += p.to_string() + "\n";
    emit(c, text);
  }
  return kPass;
}

int run_count(const Config& c) {
  BigInt value;
  if (c.bell > 0) {
    value = cslab::count_partitions(c.bell);
  } else {
    value = cslab::count_equipartitions(c.k, c.n, c.m);
  }
  const auto text = cslab::to_string(value);
  if (c.format == "table") {
    emit(c, text + "\n");
  } else {
    emit_result(c, ordered_json{{"count", text}}, text + "\n");
  }
  return kPass;
}

cslab::Strategy comb_strategy(const Config& c) {
  if (c.strategy == "exhaustive") return cslab::Exhaustive{};
  if (c.strategy == "sampled") return cslab::Sampled{c.samples, c.seed};
  if (c.strategy == "adversarial") return cslab::Adversarial{c.samples, c.seed};
  throw cslab::DomainError("unknown strategy " + c.strategy);
}

int run_verify_comb(const Config& c) {
  check_jobs(c);
  cslab::CampaignOptions options;
  options.jobs = c.jobs;
  options.exhaustive_cap = cslab::budget_cap_from_env();
  const auto replay = config_json(c);
  if (!c.checkpoint.empty()) {
    if (c.resume && std::filesystem::exists(c.checkpoint)) {
      const auto state = nlohmann::json::parse(read_file(c.checkpoint));
      auto saved = state.at("config");
      auto wanted = nlohmann::json(replay);
      for (const char* loose : {"jobs", "format"}) saved.erase(loose), wanted.erase(loose);
      if (saved != wanted) {
        throw cslab::DomainError("checkpoint " + c.checkpoint + " was written for a different configuration");
      }
      options.resume = cslab::CampaignAggregate::from_json(state.at("aggregate"));
    }
    options.on_checkpoint = [&](const cslab::CampaignAggregate& agg) {
      ordered_json state;
      state["config"] = replay;
      state["aggregate"] = agg.to_json();
      write_atomically(c.checkpoint, state.dump(2) + "\n");
    };
  }
  const auto report = cslab::verify_comb(c.k, c.m, c.n, comb_strategy(c), options);
  emit_report(c, report);
  return report.maps_failed > 0 || !report.certificate_consistent ? kCounterexample : kPass;
}

int run_verify_tree(const Config& c) {
  check_jobs(c);
  cslab::TreeStrategy strategy;
  if (c.strategy == "exhaustive") {
    strategy = cslab::Exhaustive{};
  } else if (c.strategy == "sampled") {
    strategy = cslab::Sampled{c.samples, c.seed};
  } else {
    throw cslab::DomainError("verify-tree supports exhaustive and sampled strategies");
  }
  const auto report = cslab::verify_tree(c.k, c.n, strategy, {c.jobs, cslab::budget_cap_from_env()});
  emit_report(c, report);
  return report.maps_failed > 0 || !report.certificate_consistent ? kCounterexample : kPass;
}

int run_bad_pairs(const Config& c) {
  if (c.emap_path.empty()) throw cslab::DomainError("bad-pairs needs --emap");
  cslab::EMapTable::Fallback fallback = cslab::EMapTable::Fallback::None;
  if (c.fallback == "identity") fallback = cslab::EMapTable::Fallback::Identity;
  else if (c.fallback != "none") throw cslab::DomainError("--fallback must be none or identity");
  const auto e = cslab::EMapTable::parse(read_file(c.emap_path), c.k * c.n, fallback);
  auto report = cslab::bad_pairs(e, c.k, c.m, c.n);
  report.seed = c.seed;
  emit_report(c, report);
  return report.witness ? kPass : kCounterexample;
}

int run_find_threshold(const Config& c) {
  check_jobs(c);
  cslab::CampaignOptions options;
  options.jobs = c.jobs;
  const auto search = cslab::min_threshold_comb(c.k, c.m, cslab::Sampled{c.samples, c.seed}, c.n_max, options);
  ordered_json runs = ordered_json::array();
  for (const auto& r : search.runs) {
    runs.push_back({{"N", r.params.at("N")},
                    {"maps_failed", r.maps_failed},
                    {"max_bad_pairs", cslab::to_string(r.bad_pair_count)},
                    {"candidate_count", cslab::to_string(r.candidate_count)},
                    {"certificate_ratio", cslab::to_string(r.certificate_ratio)}});
  }
  ordered_json result;
  result["threshold"] = search.threshold ? ordered_json(*search.threshold) : ordered_json(nullptr);
  result["note"] = "empirical: least N at which every sampled map had a witness; not the lemma's constant";
  result["runs"] = runs;
  emit_result(c, result,
              "threshold: " + (search.threshold ? std::to_string(*search.threshold) : std::string("none")) + "\n");
  return search.threshold ? kPass : kBudget;
}

int run_entropy_check(const Config& c) {
  std::uint64_t checked = 0;
  ordered_json failures = ordered_json::array();
  for (std::uint64_t b = 0; b <= c.b_max; ++b) {
    for (std::uint64_t a = 0; a <= b; ++a) {
      ++checked;
      if (!cslab::entropy_bounds(a, b).holds()) failures.push_back({{"a", a}, {"b", b}});
    }
  }
  const bool ok = failures.empty();
  emit_result(c, ordered_json{{"checked", checked}, {"all_hold", ok}, {"failures", failures}},
              std::string(ok ? "all " : "NOT all ") + std::to_string(checked) + " sandwiches hold\n");
  return ok ? kPass : kCounterexample;
}

int run_ratio(const Config& c) {
  const auto r = cslab::ratio_R(c.a1, c.a2, c.b1, c.b2, c.n);
  const auto threshold = cslab::ratio_threshold(c.a1, c.a2, c.b1, c.b2, c.n_max);
  ordered_json result;
  result["ratio"] = cslab::to_string(r);
  result["below_one"] = r < 1;
  result["threshold"] = threshold ? ordered_json(*threshold) : ordered_json(nullptr);
  emit_result(c, result, cslab::to_string(r) + "\n");
  return kPass;
}

int run_fusion_demo(const Config& c) {
  const auto b = c.prefix_b.empty() ? cslab::PartitionPrefix::discrete(c.horizon ? c.horizon : 12)
                                    : cslab::PartitionPrefix::parse(c.prefix_b);
  const std::size_t cap = c.m_prime ? c.m_prime : b.visible_blocks() - 1;
  std::function<cslab::FTable(std::size_t)> table_for;
  if (c.table_path == "identity") {
    table_for = [&](std::size_t mp) { return cslab::identity_f_table(b, mp); };
  } else if (!c.table_path.empty()) {
    const auto table = cslab::FTable::parse(read_file(c.table_path));
    table_for = [table](std::size_t) { return table; };
  } else {
    table_for = [&](std::size_t mp) { return cslab::random_f_table(b, mp, c.seed); };
  }
  const auto search = cslab::fusion_search(b, table_for, c.n0, c.ell, cap);
  ordered_json result;
  result["B"] = b.to_string();
  result["tried_Mprime"] = search.tried;
  if (!search.step) {
    result["result"] = nullptr;
    emit_result(c, result, "no witness up to M' = " + std::to_string(cap) + "\n");
    return kBudget;
  }
  const auto& step = *search.step;
  const auto table = table_for(step.m_prime);
  const bool cond1 = cslab::check_condition_1(b, step.result, c.n0, c.ell);
  const auto cond2 = cslab::check_condition_2(step.result, table, c.n0, c.ell);
  result["Mprime"] = step.m_prime;
  result["witness"] = step.witness.to_string();
  result["result"] = step.result.to_string();
  result["condition_1"] = cond1;
  result["condition_2"] = cond2.holds();
  result["condition_2_applicable"] = cond2.applicable;
  result["condition_2_violations"] = cond2.violations;
  emit_result(c, result, step.result.to_string() + "\n");
  return cond1 && cond2.holds() ? kPass : kCounterexample;
}

int run_reduce_e1(const Config& c) {
  if (c.grid_path.empty()) throw cslab::DomainError("reduce-e1 needs --grid");
  const auto grid = cslab::BinaryGrid::parse(read_file(c.grid_path));
  const std::size_t horizon = c.horizon ? c.horizon : cslab::reduce_f_horizon(grid.rows(), grid.cols());
  const auto prefix = cslab::reduce_f(grid, horizon);
  emit_result(c, ordered_json{{"L", horizon}, {"result", prefix.to_string()}}, prefix.to_string() + "\n");
  return kPass;
}

int run_blowup(const Config& c) {
  const auto a = cslab::PartitionPrefix::parse(c.prefix_a);
  const auto d = cslab::PartitionPrefix::parse(c.prefix_d);
  const auto image = cslab::blowup_iso(a, d);
  emit_result(c, ordered_json{{"result", image.to_string()}}, image.to_string() + "\n");
  return kPass;
}

int run_encode(const Config& c) {
  const auto grid = cslab::cs_encode(cslab::PartitionPrefix::parse(c.prefix_a));
  emit_result(c, ordered_json{{"grid", grid.to_text()}}, grid.to_text());
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Set-partition lab: enumeration, lemma campaigns, reductions"};
  app.require_subcommand(1);
  Config c;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--k", c.k, "Number of blocks");
    sub->add_option("--m", c.m, "Separated points");
    sub->add_option("--N", c.n, "Block size (or n for enumerate)");
    sub->add_option("--Mprime", c.m_prime, "Size parameter M'");
    sub->add_option("--L", c.horizon, "Window length");
    sub->add_option("--strategy", c.strategy, "exhaustive | sampled | adversarial");
    sub->add_option("--samples", c.samples, "Sample count or adversarial budget");
    sub->add_option("--seed", c.seed, "64-bit seed");
    sub->add_option("--jobs", c.jobs, "Worker threads");
    sub->add_option("--out", c.out, "Output file (default stdout)");
    sub->add_option("--format", c.format, "json | csv | table")
        ->check(CLI::IsMember({"json", "csv", "table"}));
  };

  auto* enumerate = app.add_subcommand("enumerate", "List Q^m(n), or Q_k^m(kN) with --equipartitions");
  common(enumerate);
  enumerate->add_flag("--equipartitions", c.equipartitions, "Enumerate equipartitions Q_k^m(kN)");
  auto* count = app.add_subcommand("count", "Bell numbers or equipartition counts");
  common(count);
  count->add_option("--bell", c.bell, "Print the Bell number |Q(n)|");
  auto* verify_comb = app.add_subcommand("verify-comb", "Witness campaign over e-maps on Q(kN)");
  common(verify_comb);
  verify_comb->add_option("--checkpoint", c.checkpoint, "Resumable state file");
  verify_comb->add_flag("--resume", c.resume, "Continue from --checkpoint");
  auto* verify_tree = app.add_subcommand("verify-tree", "Witness campaign for sections of a (k,N)-partition");
  common(verify_tree);
  auto* bad_pairs = app.add_subcommand("bad-pairs", "Bad-pair census of one e-map");
  common(bad_pairs);
  bad_pairs->add_option("--emap", c.emap_path, "File of 'arg -> value' lines over Q(kN)")->required();
  bad_pairs->add_option("--fallback", c.fallback, "Value of unlisted entries: none | identity");
  auto* find_threshold = app.add_subcommand("find-threshold", "Least N at which sampled maps all have witnesses");
  common(find_threshold);
  find_threshold->add_option("--n-max", c.n_max, "Largest N to try");
  auto* entropy = app.add_subcommand("entropy-check", "Exact entropy sandwich for 0 <= a <= b <= b-max");
  common(entropy);
  entropy->add_option("--b-max", c.b_max, "Largest b");
  auto* ratio = app.add_subcommand("ratio", "Exact factorial-combination ratio R");
  common(ratio);
  ratio->add_option("--a1", c.a1)->required();
  ratio->add_option("--a2", c.a2)->required();
  ratio->add_option("--b1", c.b1)->required();
  ratio->add_option("--b2", c.b2)->required();
  ratio->add_option("--n-max", c.n_max, "Search the least N with R < 1 up to this bound");
  auto* fusion = app.add_subcommand("fusion-demo", "One fusion step with M' doubling");
  common(fusion);
  fusion->add_option("--B", c.prefix_b, "Prefix 'L=<n>;<rgs>' (default: discrete of length --L)");
  fusion->add_option("--n0", c.n0);
  fusion->add_option("--ell", c.ell);
  fusion->add_option("--table", c.table_path, "f-table file, or 'identity' (default: random from --seed)");
  auto* reduce = app.add_subcommand("reduce-e1", "Reduction map f on a .grid file");
  common(reduce);
  reduce->add_option("--grid", c.grid_path, ".grid file")->required();
  auto* blowup = app.add_subcommand("blowup", "Blow-up of A along the blocks of D");
  common(blowup);
  blowup->add_option("--A", c.prefix_a, "Prefix 'L=<n>;<rgs>'")->required();
  blowup->add_option("--D", c.prefix_d, "Prefix 'L=<n>;<rgs>'")->required();
  auto* encode = app.add_subcommand("encode", "CS matrix of a prefix");
  common(encode);
  encode->add_option("--A", c.prefix_a, "Prefix 'L=<n>;<rgs>'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? kPass : kUsage;
  }

  c.subcommand = app.get_subcommands().front()->get_name();
  if (c.format.empty()) c.format = c.subcommand == "count" ? "table" : "json";
  try {
    if (c.subcommand == "enumerate") return run_enumerate(c);
    if (c.subcommand == "count") return run_count(c);
    if (c.subcommand == "verify-comb") return run_verify_comb(c);
    if (c.subcommand == "verify-tree") return run_verify_tree(c);
    if (c.subcommand == "bad-pairs") return run_bad_pairs(c);
    if (c.subcommand == "find-threshold") return run_find_threshold(c);
    if (c.subcommand == "entropy-check") return run_entropy_check(c);
    if (c.subcommand == "ratio") return run_ratio(c);
    if (c.subcommand == "fusion-demo") return run_fusion_demo(c);
    if (c.subcommand == "reduce-e1") return run_reduce_e1(c);
    if (c.subcommand == "blowup") return run_blowup(c);
    if (c.subcommand == "encode") return run_encode(c);
  } catch (const cslab::BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return kBudget;
  } catch (const cslab::ThresholdError& e) {
    std::cerr << "threshold error: " << e.what() << "\n";
    return kBudget;
  } catch (const cslab::LabError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
