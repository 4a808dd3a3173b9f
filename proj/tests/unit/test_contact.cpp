#include "annulus/contact.hpp"

#include "annulus/sparsity.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace annulus;

namespace {

void check_system(const ContactSystem& sys, const AnnulusMap& expect, int level) {
  ContactCert cert = extract_quotient_graph(sys);
  REQUIRE(cert.graph);
  CHECK(isomorphic(*cert.graph, expect));
  CHECK(cert.free_ends == expect.f_count());
  CHECK(check_sparse(*cert.graph, level).tight);
  CHECK(sweep_check(sys) >= 0);
}

}  // namespace

TEST_CASE("base configurations") {
  auto l = realize_base("L", SymmetryGroup::translation());
  check_system(l, fx::L(), 2);
  CHECK(extract_quotient_graph(l).free_ends == 2);
  check_system(realize_base("L", SymmetryGroup::rotation(2)), fx::L(), 2);
  for (int k : {3, 4, 5, 6, 8}) {
    auto m = realize_base("M", SymmetryGroup::rotation(k));
    check_system(m, fx::M(), 1);
    CHECK(extract_quotient_graph(m).free_ends == 1);
  }
  for (auto g : {SymmetryGroup::translation(), SymmetryGroup::rotation(1),
                 SymmetryGroup::rotation(3), SymmetryGroup::rotation(4)})
    check_system(realize_base("K", g), fx::K(), 2);
  CHECK_THROWS_WITH_AS(realize_base("M", SymmetryGroup::translation()),
                       doctest::Contains("GroupLevelMismatch"), Error);
  CHECK_THROWS_WITH_AS(realize_base("L", SymmetryGroup::rotation(3)),
                       doctest::Contains("GroupLevelMismatch"), Error);
}

TEST_CASE("translation vector and center are honored") {
  check_system(realize_base("L", SymmetryGroup::translation(2, 1)), fx::L(), 2);
  check_system(realize_base("M", SymmetryGroup::rotation(4, 5, -3)), fx::M(), 1);
}

TEST_CASE("realize round trips on drawn maps") {
  auto t = SymmetryGroup::translation();
  check_system(realize(decompose(fx::fig_a(), 2), t), fx::fig_a(), 2);
  check_system(realize(decompose(fx::fig_b(), 2), t), fx::fig_b(), 2);
  for (int k : {3, 4, 6})
    check_system(realize(decompose(fx::fig_c(), 1), SymmetryGroup::rotation(k)), fx::fig_c(), 1);
}

TEST_CASE("realize round trips on generated maps") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto g2 = generate_random_tight(2, 7, seed);
    check_system(realize(decompose(g2, 2), SymmetryGroup::translation()), g2, 2);
    auto g1 = generate_random_tight(1, 6, seed);
    check_system(realize(decompose(g1, 1), SymmetryGroup::rotation(4)), g1, 1);
    check_system(realize(decompose(g1, 1), SymmetryGroup::rotation(3)), g1, 1);
  }
}

TEST_CASE("splits next to crowded or nearly collinear contacts") {
  // Seed 1085: a side contact 2^-15 along z plus a neighbour almost collinear
  // with z. Seed 1125: a gap whose coarsest dyadic hugs one end.
  const auto a = generate_random_tight(1, 8, 1085);
  for (int k : {3, 4, 6}) check_system(realize(decompose(a, 1), SymmetryGroup::rotation(k)), a, 1);
  const auto b = generate_random_tight(1, 8, 1125);
  for (int k : {4, 6}) check_system(realize(decompose(b, 1), SymmetryGroup::rotation(k)), b, 1);
}

TEST_CASE("level and group must agree") {
  auto seq = decompose(fx::fig_c(), 1);
  CHECK_THROWS_WITH_AS(realize(seq, SymmetryGroup::translation()),
                       doctest::Contains("GroupLevelMismatch"), Error);
}

TEST_CASE("zero budget exhausts immediately") {
  auto seq = decompose(fx::fig_b(), 2);
  REQUIRE(!seq.steps.empty());
  auto base = realize_base(seq.base, SymmetryGroup::translation());
  ConstructionSequence empty = seq;
  empty.steps.clear();
  auto sys = realize(empty, SymmetryGroup::translation());
  CHECK_THROWS_WITH_AS(apply_split_geometry(sys, seq.steps[0], RealizeOptions{0}),
                       doctest::Contains("EpsilonExhausted"), Error);
}

TEST_CASE("shortening drops exactly one contact") {
  auto g = fx::fig_b();
  auto sys = realize(decompose(g, 2), SymmetryGroup::translation());
  int before = static_cast<int>(extract_quotient_graph(sys).contacts.size());
  auto cut = shorten(sys, 0, 0, Rational(1, 100));
  auto cert = extract_quotient_graph(cut);
  int had = 0;
  // endpoint 0 of rep 0 may have been free already
  for (const auto& c : extract_quotient_graph(sys).contacts) had += c.rep == 0 && c.end == 0;
  CHECK(static_cast<int>(cert.contacts.size()) == before - had);
}
