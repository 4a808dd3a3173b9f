#include "annulus/pseudo.hpp"

#include "doctest.h"
#include "fixtures.hpp"

using namespace annulus;

namespace {

AngleReport check_ppt(const PptRealization& r, const AnnulusMap& expect) {
  AngleReport rep = validate_ppt(r);
  CHECK(isomorphic(ppt_quotient_graph(r), expect));
  CHECK(rep.c == 2 * rep.m - rep.n);
  for (char p : rep.pointed) CHECK(p);
  return rep;
}

}  // namespace

TEST_CASE("surfaces parse and map to groups") {
  CHECK(FlatSurface::parse("cylinder").level() == 2);
  CHECK(FlatSurface::parse("cone:2").level() == 2);
  CHECK(FlatSurface::parse("cone:5").level() == 1);
  CHECK(FlatSurface::parse("plane").level() == 0);
  CHECK(FlatSurface::parse("cone:6").describe() == "cone:6");
  CHECK(FlatSurface::of(SymmetryGroup::translation()).kind == FlatSurface::Kind::Cylinder);
  CHECK(FlatSurface::cone(4).group().order == 4);
  CHECK_THROWS_AS(FlatSurface::parse("torus"), Error);
  CHECK_THROWS_AS(FlatSurface::parse("cone:0"), Error);
}

TEST_CASE("base drawings validate") {
  for (auto s : {FlatSurface::cylinder(), FlatSurface::cone(2), FlatSurface::cone(3),
                 FlatSurface::cone(4), FlatSurface::cone(6), FlatSurface::plane()})
    CHECK(check_ppt(realize_ppt_base("K", s), fx::K()).c == 0);
  for (auto s : {FlatSurface::cylinder(), FlatSurface::cone(2)})
    CHECK(check_ppt(realize_ppt_base("L", s), fx::L()).c == 2);
  for (int k : {3, 4, 5, 6}) {
    auto rep = check_ppt(realize_ppt_base("M", FlatSurface::cone(k)), fx::M());
    CHECK(rep.c == 1);
  }
}

TEST_CASE("base and surface must agree") {
  CHECK_THROWS_WITH_AS(realize_ppt_base("M", FlatSurface::cylinder()),
                       doctest::Contains("SurfaceLevelMismatch"), Error);
  CHECK_THROWS_WITH_AS(realize_ppt_base("L", FlatSurface::cone(3)),
                       doctest::Contains("SurfaceLevelMismatch"), Error);
  CHECK_THROWS_WITH_AS(realize_ppt(decompose(fx::fig_c(), 1), FlatSurface::cylinder()),
                       doctest::Contains("SurfaceLevelMismatch"), Error);
}

TEST_CASE("drawn maps realize with the right corner counts") {
  for (const auto& g : {fx::fig_a(), fx::fig_b()}) {
    auto rep = check_ppt(realize_ppt(decompose(g, 2), FlatSurface::cylinder()), g);
    CHECK(rep.c == 3 * (rep.f - 2) + (g.balanced() ? 3 : 2));
    CHECK(rep.m == 2 * rep.n - (g.balanced() ? 3 : 2));
  }
  for (int k : {3, 4, 6}) {
    auto r = realize_ppt(decompose(fx::fig_c(), 1), FlatSurface::cone(k));
    auto rep = check_ppt(r, fx::fig_c());
    CHECK(rep.c == 3 * (rep.f - 2) + 1);
    CHECK(rep.m == 2 * rep.n - 1);
    int cone = 0, outer = 0;
    for (size_t f = 0; f < rep.face_kind.size(); ++f) {
      if (rep.face_kind[f] == "cone") cone += rep.face_convex[f];
      if (rep.face_kind[f] == "outer") outer += 1 + rep.face_convex[f];
    }
    CHECK(cone == 1);
    CHECK(outer == 1);
    CHECK(r.log.size() == decompose(fx::fig_c(), 1).steps.size() + 1);
  }
}

TEST_CASE("generated maps realize on every exact surface") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto g2 = generate_random_tight(2, 7, seed);
    check_ppt(realize_ppt(decompose(g2, 2), FlatSurface::cylinder()), g2);
    check_ppt(realize_ppt(decompose(g2, 2), FlatSurface::cone(2)), g2);
    auto g1 = generate_random_tight(1, 6, seed);
    for (int k : {3, 4, 6}) check_ppt(realize_ppt(decompose(g1, 1), FlatSurface::cone(k)), g1);
  }
}

TEST_CASE("zero budget exhausts immediately") {
  auto seq = decompose(fx::fig_b(), 2);
  REQUIRE(!seq.steps.empty());
  ConstructionSequence empty = seq;
  empty.steps.clear();
  auto r = realize_ppt(empty, FlatSurface::cylinder());
  CHECK_THROWS_WITH_AS(ppt_split(r, seq.steps[0], PptOptions{0}),
                       doctest::Contains("EpsilonExhausted"), Error);
}

TEST_CASE("validation catches bad drawings") {
  SUBCASE("straightened vertex") {
    // v3 has degree 2; moving it onto the segment between its neighbours
    // keeps the embedding but leaves no reflex angle there.
    auto g = generate_random_tight(2, 6, 1);
    auto r = realize_ppt(decompose(g, 2), FlatSurface::cylinder());
    auto& x = std::get<PptT<Rational>>(r.variant());
    const int v = x.graph.vertex_index("v3");
    const auto& R = x.graph.rotation()[v];
    REQUIRE(R.size() == 2);
    Point<Rational> mid{0, 0};
    for (int d : R) {
      const int p = (d & 1) ? -x.power[edge_of(d)] : x.power[edge_of(d)];
      const auto& q = x.pos[x.graph.dst(d)];
      mid.x += (q.x + p) / 2;
      mid.y += q.y / 2;
    }
    x.pos[v] = mid;
    CHECK_THROWS_WITH_AS(validate_ppt(r), doctest::Contains("NotPointed"), Error);
  }
  SUBCASE("crossing") {
    auto g = fx::fig_a();
    auto r = realize_ppt(decompose(g, 2), FlatSurface::cylinder());
    auto& x = std::get<PptT<Rational>>(r.variant());
    x.pos[0] = x.pos[1];
    CHECK_THROWS_WITH_AS(validate_ppt(r), doctest::Contains("CrossingEdges"), Error);
  }
  SUBCASE("wrong power") {
    auto r = realize_ppt_base("M", FlatSurface::cone(4));
    std::get<PptT<Rational>>(r.variant()).power[0] = 2;
    CHECK_THROWS_AS(validate_ppt(r), Error);
  }
}

TEST_CASE("symmetric rigidity") {
  auto v = decide_symmetric_rigidity(fx::M(), 3);
  CHECK(v.rigid);
  REQUIRE(v.witness);
  check_ppt(*v.witness, fx::M());

  int rigid = 0;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto g1 = generate_random_tight(1, 5, seed);
    auto w = decide_symmetric_rigidity(g1, 4);
    CHECK(w.rigid == check_sparse(g1, 1).tight);
    CHECK(w.witness.has_value() == w.rigid);
    if (w.witness) check_ppt(*w.witness, g1);
    rigid += w.rigid;
  }
  CHECK(rigid == 8);

  auto p = decide_symmetric_rigidity(fx::point(), 3);
  CHECK_FALSE(p.rigid);
  CHECK_FALSE(p.witness);
  CHECK(!p.reason.empty());

  // K is balanced and tight, so it counts as rigid; dropping its edge does not.
  CHECK(decide_symmetric_rigidity(fx::K(), 3).rigid);

  CHECK_THROWS_WITH_AS(decide_symmetric_rigidity(fx::M(), 2),
                       doctest::Contains("UnsupportedGroup"), Error);
}
