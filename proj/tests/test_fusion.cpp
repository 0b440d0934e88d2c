#include "oracles.hpp"

#include "cslab/error.hpp"
#include "cslab/fusion.hpp"

#include <doctest.h>

using namespace cslab;

namespace {
SetPartition P(const char* text) { return SetPartition::parse(text); }
PartitionPrefix B(const char* rgs) { return PartitionPrefix(SetPartition::parse(rgs)); }
}  // namespace

TEST_CASE("FTable lookup and text") {
  FTable f;
  f.set(B("0,0,1"), B("0,1,2"));
  CHECK(f.contains(B("0,0,1")));
  CHECK(f.at(B("0,0,1")) == B("0,1,2"));
  CHECK_THROWS_AS(f.at(B("0,1,2")), DomainError);
  const auto back = FTable::parse("# note\n" + f.to_text());
  CHECK(back.size() == 1);
  CHECK(back.at(B("0,0,1")) == B("0,1,2"));
  CHECK_THROWS_AS(FTable::parse("L=1;0"), DomainError);
}

TEST_CASE("identity f-table: fusion returns h of the least candidate") {
  const auto b = B("0,1,0,2,1,3,4,2,5");
  for (std::size_t n0 = 0; n0 <= 1; ++n0) {
    for (std::size_t ell = 0; ell <= 1; ++ell) {
      const std::size_t m = n0 + ell + 1;
      for (std::size_t mp = m; mp <= 4; ++mp) {
        const auto step = fusion_step_detail(b, identity_f_table(b, mp), n0, ell, mp);
        std::vector<SetPartition::Label> least(mp, 0);
        for (std::size_t i = 0; i < m; ++i) least[i] = static_cast<SetPartition::Label>(i);
        CHECK(step.witness == SetPartition::from_rgs(least));
        CHECK(step.result == induced_coarsening_h(step.witness, b, mp));
        CHECK(check_condition_1(b, step.result, n0, ell));
        CHECK(check_condition_2(step.result, identity_f_table(b, mp), n0, ell).holds());
      }
    }
  }
}

TEST_CASE("fusion_step errors") {
  const auto b = PartitionPrefix::discrete(4);
  CHECK_THROWS_AS(fusion_step(b, identity_f_table(b, 2), 1, 1, 2), DomainError);
  CHECK_THROWS_AS(fusion_step(b, identity_f_table(b, 4), 0, 0, 4), InsufficientTruncation);
  FTable partial;
  CHECK_THROWS_AS(fusion_step(b, partial, 0, 0, 2), DomainError);
}

TEST_CASE("embedded N=1 counterexample raises a threshold error") {
  // Every h(t) goes to B, so e = g o f o h is constantly discrete: e([0,0]) = [0,1].
  const auto b = PartitionPrefix::discrete(4);
  FTable f;
  f.set(induced_coarsening_h(P("0,0"), b, 2), b);
  f.set(induced_coarsening_h(P("0,1"), b, 2), b);
  CHECK_THROWS_AS(fusion_step(b, f, 0, 1, 2), ThresholdError);
  CHECK_FALSE(exhaustive_witness_recheck(fusion_e_map(b, f, 2), 2, 2));
  // Doubling M' with the same rule recovers.
  const auto big = PartitionPrefix::discrete(6);
  auto search = fusion_search(
      big,
      [&](std::size_t mp) {
        FTable g;
        for (const auto& t : oracle::partitions(mp)) g.set(induced_coarsening_h(t, big, mp), big);
        return g;
      },
      0, 1, 4);
  CHECK(search.tried.front() == 2);
  REQUIRE(search.step);
  CHECK(search.step->m_prime == 4);
}

TEST_CASE("constant f-tables: step succeeds exactly when a scan finds a witness") {
  const auto b = PartitionPrefix::discrete(6);
  for (std::size_t mp = 2; mp <= 4; ++mp) {
    for (const auto& c : oracle::partitions(6)) {
      if (!oracle::coarsens(c, b.relation())) continue;
      FTable f;
      for (const auto& t : oracle::partitions(mp)) f.set(induced_coarsening_h(t, b, mp), PartitionPrefix(c));
      for (std::size_t m = 1; m <= mp; ++m) {
        const auto scan = exhaustive_witness_recheck(fusion_e_map(b, f, mp), m, m);
        try {
          const auto step = fusion_step_detail(b, f, 0, m - 1, mp);
          REQUIRE(scan);
          CHECK(step.witness == *scan);
        } catch (const ThresholdError&) {
          CHECK_FALSE(scan);
        }
      }
    }
  }
}

TEST_CASE("random f-tables cover the h-image and satisfy the step conditions") {
  const auto b = B("0,1,2,0,3,1,4,5,2");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t mp = 3;
    const auto f = random_f_table(b, mp, seed);
    CHECK(f.size() == 5);
    for (const auto& t : oracle::partitions(mp)) CHECK(f.contains(induced_coarsening_h(t, b, mp)));
    try {
      const auto step = fusion_step_detail(b, f, 1, 0, mp);
      CHECK(check_condition_1(b, step.result, 1, 0));
      CHECK(check_condition_2(step.result, f, 1, 0).holds());
    } catch (const ThresholdError&) {
      CHECK_FALSE(exhaustive_witness_recheck(fusion_e_map(b, f, mp), 2, 2));
    }
  }
}
