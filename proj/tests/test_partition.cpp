#include "oracles.hpp"

#include "cslab/enumerate.hpp"
#include "cslab/error.hpp"
#include "cslab/set_partition.hpp"

#include <doctest.h>

#include <set>

using namespace cslab;

namespace {
SetPartition P(const char* text) { return SetPartition::parse(text); }
}  // namespace

TEST_CASE("rgs validation") {
  CHECK_NOTHROW(SetPartition::from_rgs({0, 1, 0, 2}));
  CHECK_THROWS_AS(SetPartition::from_rgs({1, 0}), DomainError);
  CHECK_THROWS_AS(SetPartition::from_rgs({0, 2}), DomainError);
  CHECK_THROWS_AS(SetPartition::parse("0,x"), DomainError);
  CHECK(SetPartition::parse("").empty());
  CHECK(SetPartition::from_labels(std::vector<SetPartition::Label>{7, 3, 7}) == P("0,1,0"));
  CHECK(P("0,0,1,2,1").to_string() == "0,0,1,2,1");
}

TEST_CASE("block structure") {
  const auto p = P("0,1,0,1,2,3");
  CHECK(p.block_count() == 4);
  CHECK(p.block_minima() == std::vector<std::size_t>{0, 1, 4, 5});
  CHECK(p.block_sizes() == std::vector<std::size_t>{2, 2, 1, 1});
  CHECK(p.restrict(4) == P("0,1,0,1"));
}

TEST_CASE("enumerate_partitions examples") {
  auto one = collect(enumerate_partitions(1, 0));
  REQUIRE(one.size() == 1);
  CHECK(one[0] == P("0"));
  CHECK(collect(enumerate_partitions(3, 0)).size() == 5);
  const auto sep = collect(enumerate_partitions(3, 2));
  // Q(3) minus [0,0,0] and [0,0,1].
  CHECK(sep.size() == 3);
  for (const auto& s : sep) CHECK_FALSE(s.related(0, 1));
  CHECK_THROWS_AS(enumerate_partitions(0, 0), DomainError);
  CHECK_THROWS_AS(enumerate_partitions(3, 4), DomainError);
}

TEST_CASE("enumerate_partitions matches block-insertion oracle") {
  for (std::size_t n = 1; n <= 7; ++n) {
    for (std::size_t m = 0; m <= n; ++m) {
      CAPTURE(n);
      CAPTURE(m);
      const auto got = collect(enumerate_partitions(n, m));
      CHECK(got == oracle::separated_partitions(n, m));
    }
  }
}

TEST_CASE("enumerate_equipartitions examples") {
  const auto two = collect(enumerate_equipartitions(2, 2, 2));
  CHECK(two == std::vector<SetPartition>{P("0,1,0,1"), P("0,1,1,0")});
  CHECK(collect(enumerate_equipartitions(3, 2, 3)).size() == 6);
  const auto single = collect(enumerate_equipartitions(1, 5, 1));
  REQUIRE(single.size() == 1);
  CHECK(single[0] == SetPartition::single_block(5));
  CHECK_THROWS_AS(enumerate_equipartitions(2, 2, 3), DomainError);
}

TEST_CASE("equipartitions match oracle and closed-form count") {
  for (std::size_t k = 1; k <= 3; ++k) {
    for (std::size_t n = 1; n <= 3; ++n) {
      for (std::size_t m = 0; m <= k; ++m) {
        CAPTURE(k);
        CAPTURE(n);
        CAPTURE(m);
        const auto got = collect(enumerate_equipartitions(k, n, m));
        CHECK(got == oracle::equipartitions(k, n, m));
        CHECK(count_equipartitions(k, n, m) == BigInt(got.size()));
      }
    }
  }
}

TEST_CASE("count_partitions") {
  CHECK(count_partitions(1) == 1);
  CHECK(count_partitions(3) == 5);
  CHECK(count_partitions(12) == 4213597);
  for (std::size_t n = 1; n <= 40; ++n) CHECK(count_partitions(n) == oracle::bell(n));
}

TEST_CASE("is_coarsening examples and oracle") {
  CHECK(is_coarsening(P("0,0,0"), P("0,1,2")));
  CHECK_FALSE(is_coarsening(P("0,1,2"), P("0,0,0")));
  CHECK_THROWS_AS(is_coarsening(P("0,0"), P("0,0,0")), DomainError);
  const auto q4 = oracle::partitions(4);
  for (const auto& s : q4) {
    CHECK(is_coarsening(s, s));
    for (const auto& t : q4) {
      CHECK(is_coarsening(s, t) == oracle::coarsens(s, t));
      CHECK(oracle::coarsens_pairwise(s, t) == oracle::coarsens(s, t));
    }
  }
}

TEST_CASE("coarsening is a partial order on Q(4)") {
  const auto q4 = oracle::partitions(4);
  for (const auto& a : q4) {
    for (const auto& b : q4) {
      if (a != b && is_coarsening(a, b)) CHECK_FALSE(is_coarsening(b, a));
      for (const auto& c : q4) {
        if (is_coarsening(a, b) && is_coarsening(b, c)) CHECK(is_coarsening(a, c));
      }
    }
  }
}

TEST_CASE("meet_refine examples and oracle") {
  CHECK(meet_refine(P("0,0,1"), P("0,1,1")) == P("0,1,2"));
  CHECK_THROWS_AS(meet_refine(P("0"), P("0,1")), DomainError);
  const auto q5 = oracle::partitions(5);
  for (const auto& t : q5) {
    CHECK(meet_refine(t, t) == t);
    CHECK(meet_refine(SetPartition::single_block(5), t) == t);
  }
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const auto a = q5[rng() % q5.size()];
    const auto b = q5[rng() % q5.size()];
    const auto m = meet_refine(a, b);
    CHECK(m == oracle::meet(a, b));
    CHECK(m == meet_refine(b, a));
    CHECK(is_coarsening(a, m));
    CHECK(is_coarsening(b, m));
  }
}

TEST_CASE("ranker round-trips and follows stream order") {
  for (std::size_t n = 1; n <= 8; ++n) {
    PartitionRanker ranker(n);
    CHECK(BigInt(ranker.total()) == count_partitions(n));
    std::uint64_t index = 0;
    for (const auto& p : enumerate_partitions(n, 0)) {
      CHECK(ranker.rank(p) == index);
      CHECK(ranker.unrank(index) == p);
      ++index;
    }
  }
  PartitionRanker big(kMaxRankedSize);
  CHECK(BigInt(big.total()) == count_partitions(kMaxRankedSize));
  CHECK_THROWS_AS(PartitionRanker(kMaxRankedSize + 1), DomainError);
}

TEST_CASE("shards concatenate to the full stream") {
  StreamShape shape{.n = 7, .separated = 2};
  std::vector<SetPartition> joined;
  for (const auto& prefix : shard_prefixes(shape, 4)) {
    auto sub = shape;
    sub.prefix = prefix;
    for (const auto& p : PartitionStream(sub)) joined.push_back(p);
  }
  CHECK(joined == collect(enumerate_partitions(7, 2)));
}
