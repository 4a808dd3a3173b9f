#include <algorithm>
#include <random>

#include "annulus/sparsity.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace annulus;

namespace {

AnnulusMap L_plus_parallel() {
  // Third ab edge lies in one of L's digons.
  return AnnulusMap::build({"a", "b"}, {{"e1", 0, 1}, {"e2", 0, 1}, {"e3", 0, 1}},
                           {{0, 4, 2}, {1, 3, 5}}, {0, 2});
}

AnnulusMap k_with_path() {
  // a-b is the K edge; b-c-d hangs off b.
  return AnnulusMap::build({"a", "b", "c", "d"}, {{"e1", 0, 1}, {"e2", 1, 2}, {"e3", 2, 3}},
                           {{0}, {1, 2}, {3, 4}, {5}}, {0, 0});
}

}  // namespace

TEST_CASE("oracle verdicts on small maps") {
  auto v = oracle_sparse(fx::K(), 2);
  CHECK(v.sparse);
  CHECK(v.tight);
  v = oracle_sparse(L_plus_parallel(), 2);
  CHECK_FALSE(v.sparse);
  REQUIRE(v.violator);
  auto c = fx::fig_c();
  CHECK(oracle_sparse(c, 1).tight);
  CHECK_FALSE(oracle_sparse(c, 2).sparse);
  CHECK(oracle_sparse(fx::L(), 2).tight);
  CHECK(oracle_sparse(fx::M(), 1).tight);
  CHECK_FALSE(oracle_sparse(fx::M(), 2).sparse);
}

TEST_CASE("oracle refuses large inputs") {
  std::vector<Edge> es;
  std::vector<std::vector<int>> rot(2);
  for (int i = 0; i < 21; ++i) {
    es.push_back({"e" + std::to_string(i), 0, 1});
    rot[0].push_back(dart(i, true));
  }
  for (int i = 20; i >= 0; --i) rot[1].push_back(dart(i, false));
  auto m = AnnulusMap::build({"a", "b"}, es, rot, {0, 0});
  CHECK_THROWS_WITH_AS(oracle_sparse(m, 2), doctest::Contains("TooLarge"), Error);
}

TEST_CASE("fast checker agrees with oracle on drawn and base maps") {
  for (const auto& m : {fx::K(), fx::L(), fx::M(), fx::fig_a(), fx::fig_b(), fx::fig_c(),
                        L_plus_parallel(), k_with_path(), fx::point()})
    for (int l : {1, 2}) {
      auto a = check_sparse(m, l), b = oracle_sparse(m, l);
      CHECK(a.sparse == b.sparse);
      CHECK(a.tight == b.tight);
      if (a.violator) CHECK(violates(m, *a.violator, l));
    }
  CHECK(check_sparse(fx::fig_a(), 2).tight);
  CHECK(check_sparse(fx::fig_b(), 2).tight);
  CHECK(check_sparse(fx::point(), 1).tight);
}

TEST_CASE("max tight subgraph") {
  auto b = fx::fig_b();
  for (int e = 0; e < b.num_edges(); ++e) CHECK(max_tight_subgraph(b, 2, e).size() == 6);
  auto kp = k_with_path();
  auto s = max_tight_subgraph(kp, 2, 0);
  CHECK(s.size() == 1);
  CHECK(s.member[0]);
  auto single = AnnulusMap::build({"a", "b"}, {{"e1", 0, 1}}, {{0}, {1}}, {0, 0});
  s = max_tight_subgraph(single, 2, 0);
  CHECK(s.size() == 1);
  CHECK(single.f_count(s) == 3);
  CHECK(single.is_balanced(s));
}

TEST_CASE("f is modular on vertex-closed intersections") {
  std::mt19937_64 rng(7);
  for (const auto& m : {fx::fig_a(), fx::fig_b(), fx::fig_c()}) {
    const int E = m.num_edges();
    for (int t = 0; t < 200; ++t) {
      EdgeSubset b = m.empty_subset(), c = m.empty_subset();
      for (int e = 0; e < E; ++e) {
        b.member[e] = rng() & 1;
        c.member[e] = rng() & 1;
      }
      auto vb = m.subset_vertices(b), vc = m.subset_vertices(c);
      EdgeSubset u = m.empty_subset(), i = m.empty_subset();
      for (int e = 0; e < E; ++e) {
        u.member[e] = b.member[e] || c.member[e];
        i.member[e] = b.member[e] && c.member[e];
      }
      // The intersection subgraph keeps every common vertex.
      for (int v : vb)
        if (std::find(vc.begin(), vc.end(), v) != vc.end()) i.extra_vertices.push_back(v);
      CHECK(m.f_count(u) + m.f_count(i) == m.f_count(b) + m.f_count(c));
    }
  }
}

TEST_CASE("unbalanced tight subgraphs with common vertices: union and intersection tight") {
  auto b = fx::fig_b();
  const int E = b.num_edges();
  std::vector<EdgeSubset> tight_unbal;
  for (int mask = 1; mask < (1 << E); ++mask) {
    EdgeSubset s = b.empty_subset();
    for (int e = 0; e < E; ++e) s.member[e] = (mask >> e) & 1;
    if (subset_is_tight(b, s, 2) && !b.is_balanced(s)) tight_unbal.push_back(s);
  }
  REQUIRE(tight_unbal.size() >= 2);
  for (const auto& x : tight_unbal)
    for (const auto& y : tight_unbal) {
      EdgeSubset u = b.empty_subset(), i = b.empty_subset();
      for (int e = 0; e < E; ++e) {
        u.member[e] = x.member[e] || y.member[e];
        i.member[e] = x.member[e] && y.member[e];
      }
      auto vx = b.subset_vertices(x), vy = b.subset_vertices(y);
      for (int v : vx)
        if (std::find(vy.begin(), vy.end(), v) != vy.end()) i.extra_vertices.push_back(v);
      if (i.extra_vertices.empty()) continue;
      CHECK(subset_is_tight(b, u, 2));
      CHECK(b.f_count(i) == 2);
    }
}

TEST_CASE("tight maps are connected") {
  for (const auto& m : {fx::K(), fx::L(), fx::M(), fx::fig_a(), fx::fig_b(), fx::fig_c()})
    CHECK(m.connected());
}
