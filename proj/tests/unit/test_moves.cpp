#include "annulus/moves.hpp"
#include "annulus/reduction.hpp"
#include "annulus/sparsity.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace annulus;

namespace {

int cellular_face(const AnnulusMap& m, size_t degree) {
  auto ends = m.end_faces();
  for (int f = 0; f < m.num_faces(); ++f)
    if (f != ends[0] && f != ends[1] && m.face_darts()[f].size() == degree) return f;
  return -1;
}

// Every contraction of every cellular triangle and quad; each one checks
// internally that replaying its record restores the input.
int contract_everything(const AnnulusMap& m) {
  int ok = 0;
  auto ends = m.end_faces();
  for (int f = 0; f < m.num_faces(); ++f) {
    if (f == ends[0] || f == ends[1]) continue;
    auto n = m.face_darts()[f].size();
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
          try {
            Contraction k = n == 3 ? triangle_contract(m, f, a % 3, b)
                                   : quad_contract(m, f, a % 2, b, c);
            CHECK(same_by_names(apply_split(k.result, k.record), m));
            CHECK(k.result.num_vertices() == m.num_vertices() - 1);
            CHECK(k.result.num_edges() == m.num_edges() - 2);
            ++ok;
          } catch (const Error& e) {
            CHECK_FALSE(e.internal());
          }
        }
  }
  return ok;
}

}  // namespace

TEST_CASE("classify faces") {
  auto q = fx::quad_vertex_repeat();
  int f = cellular_face(q, 4);
  REQUIRE(f >= 0);
  CHECK(classify_face(q, f) == FaceClass::Quad232_vertexRepeat);
  auto l = fx::quad_loops();
  f = cellular_face(l, 4);
  REQUIRE(f >= 0);
  CHECK(classify_face(l, f) == FaceClass::Quad231_loopA);
  auto t = fx::tri_loop();
  f = cellular_face(t, 3);
  REQUIRE(f >= 0);
  CHECK(classify_face(t, f) == FaceClass::Tri231_loop);
  auto s = fx::square();
  f = cellular_face(s, 4);
  REQUIRE(f >= 0);
  CHECK(classify_face(s, f) == FaceClass::NonDegenerate);
  CHECK_THROWS_WITH_AS(classify_face(fx::K(), 0), doctest::Contains("WrongDegree"), Error);
}

TEST_CASE("triangle contraction of the two-triangle map") {
  auto a = fx::fig_a();
  int f = cellular_face(a, 3);
  REQUIRE(f >= 0);
  for (int p = 0; p < 3; ++p) {
    auto k = triangle_contract(a, f, p, 0);
    CHECK(k.result.num_vertices() == 3);
    CHECK(k.result.num_edges() == 3);
    CHECK(k.result.f_count() == 3);
  }
}

TEST_CASE("degenerate triangle contracts along its non-loop edge") {
  auto t = fx::tri_loop();
  CHECK(check_sparse(t, 1).tight);
  int f = cellular_face(t, 3);
  int done = 0;
  for (int p = 0; p < 3; ++p) {
    if (t.is_loop(edge_of(t.face_darts()[f][p]))) {
      CHECK_THROWS_WITH_AS(triangle_contract(t, f, p, 0), doctest::Contains("LoopPivot"), Error);
      continue;
    }
    for (int d = 0; d < 2; ++d) {
      try {
        auto k = triangle_contract(t, f, p, d);
        CHECK(check_sparse(k.result, 1).sparse);
        ++done;
      } catch (const Error& e) {
        CHECK_FALSE(e.internal());
      }
    }
  }
  CHECK(done > 0);
}

TEST_CASE("triangle contraction errors") {
  CHECK_THROWS_WITH_AS(triangle_contract(fx::K(), 0, 0, 0), doctest::Contains("NotTriangle"), Error);
}

TEST_CASE("quad contractions") {
  auto s = fx::square();
  int f = cellular_face(s, 4);
  auto k = quad_contract(s, f, 0, 0, 0);
  CHECK(k.result.num_vertices() == 3);
  CHECK(k.result.num_edges() == 2);

  auto l = fx::quad_loops();
  f = cellular_face(l, 4);
  int made_m = 0;
  for (int s0 = 0; s0 < 2; ++s0)
    for (int d1 = 0; d1 < 2; ++d1)
      for (int d2 = 0; d2 < 2; ++d2) {
        try {
          auto c = quad_contract(l, f, s0, d1, d2);
          if (c.result.num_vertices() == 1 && isomorphic(c.result, fx::M())) ++made_m;
        } catch (const Error& e) {
          CHECK_FALSE(e.internal());
        }
      }
  CHECK(made_m > 0);

  // Corners 0 and 2 of the repeated-vertex quad may sit on the same vertex.
  auto q = fx::quad_vertex_repeat();
  f = cellular_face(q, 4);
  auto w = q.face_walk(f);
  int same = w.corners[0].vertex == w.corners[2].vertex ? 0 : 1;
  CHECK_THROWS_WITH_AS(quad_contract(q, f, same, 0, 0), doctest::Contains("DiagonalDegenerate"),
                       Error);
  CHECK_THROWS_WITH_AS(quad_contract(fx::K(), 0, 0, 0, 0), doctest::Contains("NotQuad"), Error);
}

TEST_CASE("deleting the same edge twice is rejected") {
  auto l = fx::quad_loops();
  int f = cellular_face(l, 4);
  auto w = l.face_darts()[f];
  bool hit = false;
  for (int s = 0; s < 2 && !hit; ++s)
    for (int d1 = 0; d1 < 2 && !hit; ++d1)
      for (int d2 = 0; d2 < 2 && !hit; ++d2)
        if (edge_of(w[s + d1]) == edge_of(w[(s + 2 + d2) % 4])) {
          CHECK_THROWS_WITH_AS(quad_contract(l, f, s, d1, d2), doctest::Contains("BadPartition"),
                               Error);
          hit = true;
        }
  CHECK(hit);
}

TEST_CASE("split records replay to the original on drawn and generated maps") {
  int total = 0;
  for (const auto& m : {fx::fig_a(), fx::fig_b(), fx::fig_c(), fx::tri_loop(), fx::quad_loops(),
                        fx::quad_vertex_repeat(), fx::square()})
    total += contract_everything(m);
  for (int l : {1, 2})
    for (std::uint64_t seed = 1; seed <= 6; ++seed)
      total += contract_everything(generate_random_tight(l, 6, seed));
  CHECK(total > 50);
}

TEST_CASE("split of K and M") {
  // Split K at a with nothing moved, then close a triangle: contract back to K.
  auto g1 = vertex_split(fx::K(), 0, 0, 1, "c", "e2");
  CHECK(g1.num_vertices() == 3);
  auto m = fx::M();
  auto g2 = vertex_split(m, 0, 0, 1, "b", "e2");
  CHECK(g2.num_vertices() == 2);
  CHECK(check_sparse(g2, 1).sparse);
}

TEST_CASE("apply_split rejects a non-contiguous arc") {
  auto b = generate_random_tight(2, 8, 1);
  int v = -1;
  for (int x = 0; x < b.num_vertices(); ++x)
    if (b.degree(x) >= 4) v = x;
  REQUIRE(v >= 0);
  const auto& R = b.rotation()[v];
  SplitRecord r;
  r.vertex = b.vertex_name(v);
  r.new_vertex = "new";
  r.moved = {dart_string(b, R[0]), dart_string(b, R[2])};
  r.after = dart_string(b, R[R.size() - 1]);
  r.pivot = {"p", r.vertex, "new"};
  r.end_faces = {name_corner(b, b.end_corners()[0]), name_corner(b, b.end_corners()[1])};
  CHECK_THROWS_WITH_AS(apply_split(b, r), doctest::Contains("BadPartition"), Error);
}
