#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"

using namespace annulus;

namespace {

std::vector<int> face_degrees(const AnnulusMap& m) {
  std::vector<int> out;
  for (const auto& f : m.faces()) out.push_back(f.degree());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("base maps: faces, balance, counts") {
  auto k = fx::K(), l = fx::L(), m = fx::M();
  CHECK(face_degrees(k) == std::vector<int>{2});
  CHECK(k.balanced());
  CHECK(k.f_count() == 3);
  CHECK(face_degrees(l) == std::vector<int>{2, 2});
  CHECK_FALSE(l.balanced());
  CHECK(l.f_count() == 2);
  CHECK(face_degrees(m) == std::vector<int>{1, 1});
  CHECK_FALSE(m.balanced());
  CHECK(m.f_count() == 1);
  CHECK(fx::point().f_count() == 2);
  CHECK(fx::point().num_faces() == 1);
}

TEST_CASE("gains are tree-normalized and wind on unbalanced maps") {
  auto l = fx::L();
  const auto& g = l.edge_gains();
  CHECK(g[0] == 0);
  CHECK(std::abs(g[1]) == 1);
  auto m = fx::M();
  CHECK(std::abs(m.edge_gains()[0]) == 1);
  auto k = fx::K();
  CHECK(k.edge_gains()[0] == 0);
}

TEST_CASE("drawn examples") {
  auto a = fx::fig_a();
  CHECK(face_degrees(a) == std::vector<int>{3, 3, 4});
  CHECK(a.balanced());
  CHECK(a.face_darts()[a.end_faces()[0]].size() == 4);
  auto b = fx::fig_b();
  CHECK_FALSE(b.balanced());
  CHECK(b.f_count() == 2);
  auto c = fx::fig_c();
  CHECK_FALSE(c.balanced());
  CHECK(c.f_count() == 1);
}

TEST_CASE("balance: face test agrees with gain test on every subset") {
  for (const auto& m : {fx::K(), fx::L(), fx::M(), fx::fig_a(), fx::fig_b(), fx::fig_c()}) {
    const int E = m.num_edges();
    for (int mask = 0; mask < (1 << E); ++mask) {
      EdgeSubset s = m.empty_subset();
      for (int e = 0; e < E; ++e) s.member[e] = (mask >> e) & 1;
      bool face = m.is_balanced(s);
      CHECK(face == m.is_balanced_by_gains(s));
      CHECK(face == m.is_balanced_mask(static_cast<std::uint64_t>(mask)));
      // hereditary
      if (face)
        for (int e = 0; e < E; ++e)
          if (s.member[e]) {
            EdgeSubset t = s;
            t.member[e] = 0;
            CHECK(m.is_balanced(t));
          }
    }
  }
}

TEST_CASE("forest subsets are balanced") {
  auto b = fx::fig_b();
  EdgeSubset s = b.empty_subset();
  s.member[0] = s.member[3] = s.member[4] = 1;
  CHECK(b.is_balanced(s));
  CHECK_FALSE(b.is_balanced(b.full_subset()));
}

TEST_CASE("isomorphism") {
  auto l = fx::L();
  auto l2 = AnnulusMap::build({"b", "a"}, {{"x", 1, 0}, {"y", 1, 0}}, {{1, 3}, {0, 2}}, {0, 2});
  CHECK(isomorphic(l, l2));
  CHECK_FALSE(isomorphic(fx::K(), l));
  auto m = fx::M();
  auto m2 = m.with_end_darts({1, 0});
  CHECK(m.edge_gains()[0] == -m2.edge_gains()[0]);
  CHECK(isomorphic(m, m2));
  CHECK(isomorphic(fx::fig_b(), fx::fig_b().mirrored()));
  CHECK_FALSE(isomorphic(fx::fig_b(), fx::fig_a()));
  // same graph, ends moved to a different pair of faces
  auto a = fx::fig_a();
  int tri = -1;
  for (int f = 0; f < a.num_faces(); ++f)
    if (a.face_darts()[f].size() == 3) tri = f;
  auto a2 = a.with_end_darts({a.face_darts()[tri][0], a.face_darts()[tri][0]});
  CHECK_FALSE(isomorphic(a, a2));
}

TEST_CASE("euler identity on base and drawn maps") {
  for (const auto& m : {fx::K(), fx::L(), fx::M(), fx::fig_a(), fx::fig_b(), fx::fig_c()})
    CHECK(euler_check(m));
}

TEST_CASE("build rejects malformed input") {
  CHECK_THROWS_WITH_AS(AnnulusMap::build({"a", "b", "c"}, {{"e1", 0, 1}}, {{0}, {1}, {}}, {0, 0}),
                       doctest::Contains("NotConnected"), Error);
  CHECK_THROWS_WITH_AS(AnnulusMap::build({"a", "b"}, {{"e1", 0, 1}}, {{0, 1}, {}}, {0, 0}),
                       doctest::Contains("BadRotation"), Error);
  CHECK_THROWS_WITH_AS(AnnulusMap::build({"a", "b"}, {{"e1", 0, 1}}, {{0}, {1}}, {0, 5}),
                       doctest::Contains("UnknownEndFace"), Error);
  // Two loops at one vertex interleaved: a torus-like rotation.
  CHECK_THROWS_WITH_AS(
      AnnulusMap::build({"a"}, {{"e1", 0, 0}, {"e2", 0, 0}}, {{0, 2, 1, 3}}, {0, 0}),
      doctest::Contains("NotGenusZero"), Error);
}
