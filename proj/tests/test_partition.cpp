#include <set>

#include "doctest.h"
#include "loopsoup/partition.hpp"

using namespace loopsoup;

TEST_CASE("canonical form and equality") {
  const Partition a = Partition::from_blocks(4, {{2, 3}, {1}, {0}});
  const Partition b = Partition::from_blocks(4, {{0}, {1}, {3, 2}});
  CHECK(a == b);
  CHECK(a.blocks() == std::vector<std::vector<int>>{{0}, {1}, {2, 3}});
  CHECK(a.block_of(3) == 2);
  CHECK(a.to_string() == "{{0},{1},{2,3}}");
}

TEST_CASE("from_blocks validates") {
  CHECK_THROWS_AS(Partition::from_blocks(3, {{0, 1}}), std::invalid_argument);           // not covering
  CHECK_THROWS_AS(Partition::from_blocks(3, {{0, 1}, {1, 2}}), std::invalid_argument);   // overlap
  CHECK_THROWS_AS(Partition::from_blocks(3, {{0, 1, 2}, {}}), std::invalid_argument);    // empty block
  CHECK_THROWS_AS(Partition::from_blocks(3, {{0, 1, 2, 3}}), std::invalid_argument);     // out of range
}

TEST_CASE("refines: examples") {
  const Partition fine = Partition::singletons(3);
  const Partition pi = Partition::from_blocks(3, {{0}, {1, 2}});
  CHECK(refines(fine, pi));                      // singletons refine everything
  CHECK(refines(fine, Partition::single_block(3)));
  const Partition sigma = Partition::from_blocks(3, {{0, 1}, {2}});
  CHECK_FALSE(refines(sigma, pi));               // incomparable pair
  CHECK(refines(pi, pi));                        // reflexive
  CHECK_THROWS_AS(refines(Partition::singletons(2), pi), std::invalid_argument);
}

TEST_CASE("refinement is a partial order on n <= 5") {
  for (int n = 2; n <= 5; ++n) {
    const auto all = all_partitions(n);
    for (const auto& a : all) {
      CHECK(refines(a, a));
      for (const auto& b : all) {
        if (refines(a, b) && refines(b, a)) CHECK(a == b);
        for (const auto& c : all) {
          if (refines(a, b) && refines(b, c)) CHECK(refines(a, c));
        }
      }
    }
  }
}

TEST_CASE("restrict_to") {
  const Partition pi = Partition::from_blocks(4, {{0, 1}, {2, 3}});
  const std::vector<int> a{0, 2};
  CHECK(restrict_to(pi, a) == Partition::singletons(2));  // {{a},{c}} relabeled by rank

  const Partition whole = Partition::single_block(3);
  const std::vector<int> ab{0, 1};
  CHECK(restrict_to(whole, ab) == Partition::single_block(2));

  std::vector<int> ground(4);
  for (int i = 0; i < 4; ++i) ground[static_cast<std::size_t>(i)] = i;
  CHECK(restrict_to(pi, ground) == pi);  // identity on the full ground set

  CHECK_THROWS_AS(restrict_to(pi, std::vector<int>{}), std::invalid_argument);
  CHECK_THROWS_AS(restrict_to(pi, std::vector<int>{1, 1}), std::invalid_argument);
}

TEST_CASE("enumerate_all counts are Bell numbers") {
  CHECK(all_partitions(1).size() == 1);
  CHECK(all_partitions(3).size() == 5);
  CHECK(all_partitions(5).size() == 52);
  CHECK(all_partitions(6).size() == 203);
  // distinct and canonical
  const auto all = all_partitions(6);
  std::set<Partition> seen(all.begin(), all.end());
  CHECK(seen.size() == all.size());
}

TEST_CASE("enumeration cap reports the required count") {
  CHECK_THROWS_WITH_AS(for_each_partition(6, [](const Partition&) {}, 100),
                       "for_each_partition: enumeration needs 203 partitions, cap is 100",
                       std::length_error);
}

TEST_CASE("enumerate_refinements") {
  SUBCASE("single block of 3 has Bell(3) refinements") {
    CHECK(refinements_of(Partition::single_block(3)).size() == 5);
  }
  SUBCASE("singletons refine only to themselves") {
    const auto r = refinements_of(Partition::singletons(3));
    REQUIRE(r.size() == 1);
    CHECK(r[0] == Partition::singletons(3));
  }
  SUBCASE("two blocks of two give 2*2 refinements") {
    const Partition pi = Partition::from_blocks(4, {{0, 1}, {2, 3}});
    CHECK(refinements_of(pi).size() == 4);
  }
  SUBCASE("every refinement refines pi, count matches the Bell product") {
    const Partition pi = Partition::from_blocks(6, {{0, 2, 4}, {1, 5}, {3}});
    const auto r = refinements_of(pi);
    CHECK(r.size() == bell_number(3) * bell_number(2) * bell_number(1));
    std::set<Partition> seen;
    for (const auto& p : r) {
      CHECK(refines(p, pi));
      seen.insert(p);
    }
    CHECK(seen.size() == r.size());
  }
  SUBCASE("cap exceeded throws") {
    CHECK_THROWS_AS(refinements_of(Partition::single_block(12), 1000), std::length_error);
  }
}

TEST_CASE("mobius_weight") {
  const Partition triple = Partition::single_block(3);
  const Partition fine3 = Partition::singletons(3);
  CHECK(mobius_weight(triple, triple) == 1);              // pi_tilde == pi
  CHECK(mobius_weight(fine3, triple) == 2);               // (-1)^{3-1} 2!
  const Partition pair = Partition::from_blocks(3, {{0, 1}, {2}});
  CHECK(mobius_weight(fine3, pair) == -1);                // (-1)^{3-2} 1! 0!
  CHECK_THROWS_AS(mobius_weight(pair, Partition::from_blocks(3, {{0}, {1, 2}})),
                  std::invalid_argument);                 // incomparable
}

TEST_CASE("json round trip") {
  const Partition pi = Partition::from_blocks(4, {{0, 2}, {1}, {3}});
  const auto j = pi.to_json();
  CHECK(j.dump() == "[[0,2],[1],[3]]");
  CHECK(Partition::from_json(j, 4) == pi);
}
