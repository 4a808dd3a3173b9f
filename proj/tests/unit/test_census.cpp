#include "annulus/census.hpp"
#include "annulus/sparsity.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace annulus;

TEST_CASE("canonical code identifies isomorphic maps") {
  auto l2 = AnnulusMap::build({"b", "a"}, {{"x", 1, 0}, {"y", 1, 0}}, {{1, 3}, {0, 2}}, {0, 2});
  CHECK(canonical_code(fx::L()) == canonical_code(l2));
  CHECK(canonical_code(fx::fig_b()) == canonical_code(fx::fig_b().mirrored()));
  CHECK(canonical_code(fx::K()) != canonical_code(fx::L()));
}

TEST_CASE("small census") {
  auto one = enumerate_maps(1);
  // point, K, and the loop with ends together or apart
  CHECK(one.size() == 4);
  auto all = enumerate_maps(3);
  for (size_t i = 0; i < all.size(); ++i) {
    CHECK(all[i].connected());
    if (all[i].num_edges() > 0) CHECK(euler_check(all[i]));
  }
  for (size_t i = 0; i < all.size() && i < 60; ++i)
    for (size_t j = i + 1; j < all.size() && j < 60; ++j) CHECK_FALSE(isomorphic(all[i], all[j]));
}

TEST_CASE("fast checker agrees with oracle on the census") {
  for (const auto& m : enumerate_maps(4))
    for (int l : {1, 2}) {
      auto a = check_sparse(m, l), b = oracle_sparse(m, l);
      CHECK(a.sparse == b.sparse);
      CHECK(a.tight == b.tight);
    }
}

TEST_CASE("random maps are valid and deterministic") {
  std::mt19937_64 r1(11), r2(11);
  for (int i = 0; i < 50; ++i) {
    auto a = random_map(1 + i % 8, r1), b = random_map(1 + i % 8, r2);
    CHECK(a.num_edges() == 1 + i % 8);
    CHECK(a.same_as(b));
    for (int l : {1, 2}) CHECK(check_sparse(a, l).sparse == oracle_sparse(a, l).sparse);
  }
}
