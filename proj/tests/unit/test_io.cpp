#include <random>

#include "annulus/census.hpp"
#include "annulus/io.hpp"
#include "annulus/pseudo.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace annulus;

TEST_CASE("graph json round trip") {
  std::mt19937_64 rng(3);
  std::vector<AnnulusMap> maps{fx::K(), fx::L(), fx::M(), fx::point(), fx::fig_b(), fx::fig_c()};
  for (int i = 0; i < 40; ++i) maps.push_back(random_map(1 + i % 9, rng));
  for (const auto& m : maps) {
    auto j = io::to_json(m);
    auto back = io::graph_from_json(io::json::parse(j.dump()));
    CHECK(back.same_as(m));
    CHECK(io::to_json(back) == j);
  }
}

TEST_CASE("graph parser accepts the unicode minus and rejects unknown fields") {
  auto j = io::to_json(fx::L());
  std::string text = j.dump();
  auto pos = text.find("e1-");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 3, "e1\xE2\x88\x92");
  CHECK(io::graph_from_json(io::json::parse(text)).same_as(fx::L()));
  auto bad = j;
  bad["colour"] = "red";
  CHECK_THROWS_WITH_AS(io::graph_from_json(bad), doctest::Contains("unknown field"), Error);
  bad = j;
  bad["edges"][0]["weight"] = 1;
  CHECK_THROWS_WITH_AS(io::graph_from_json(bad), doctest::Contains("ParseError"), Error);
  bad = j;
  bad["end_faces"][0]["out"] = "zz+";
  CHECK_THROWS_WITH_AS(io::graph_from_json(bad), doctest::Contains("UnknownEndFace"), Error);
}

TEST_CASE("certificate json round trip") {
  for (int l : {1, 2})
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto g = generate_random_tight(l, 7, seed);
      auto seq = decompose(g, l);
      auto j = io::to_json(seq);
      auto back = io::cert_from_json(io::json::parse(j.dump()));
      CHECK(io::to_json(back) == j);
      CHECK(isomorphic(rebuild(back), g));
    }
  auto j = io::to_json(decompose(fx::fig_b(), 2));
  j["steps"][0]["comment"] = "x";
  CHECK_THROWS_WITH_AS(io::cert_from_json(j), doctest::Contains("unknown field"), Error);
}

TEST_CASE("group json round trip") {
  for (const auto& g : {SymmetryGroup::translation(), SymmetryGroup::translation(Rational(2, 3), -1),
                        SymmetryGroup::rotation(3), SymmetryGroup::rotation(5, Rational(1, 2), 4)}) {
    auto back = io::group_from_json(io::json::parse(io::to_json(g).dump()));
    CHECK(back.describe() == g.describe());
  }
  CHECK_THROWS_WITH_AS(io::group_from_json({{"kind", "reflection"}}), doctest::Contains("ParseError"),
                       Error);
}

TEST_CASE("contact system json round trip") {
  std::vector<ContactSystem> systems{
      realize(decompose(fx::fig_b(), 2), SymmetryGroup::translation()),
      realize(decompose(fx::fig_c(), 1), SymmetryGroup::rotation(3)),
      realize(decompose(fx::fig_c(), 1), SymmetryGroup::rotation(4)),
      realize_base("M", SymmetryGroup::rotation(5))};
  for (const auto& s : systems) {
    auto j = io::to_json(s);
    CHECK(io::classify(j) == io::DocKind::ContactSystem);
    auto back = io::system_from_json(io::json::parse(j.dump()));
    CHECK(io::to_json(back) == j);
    CHECK(isomorphic(*extract_quotient_graph(back).graph, s.graph()));
  }
  auto j = io::to_json(systems[0]);
  j["number_system"] = "float";
  CHECK_THROWS_WITH_AS(io::system_from_json(j), doctest::Contains("number_system"), Error);
  j = io::to_json(systems[0]);
  j["reps"][0]["colour"] = 1;
  CHECK_THROWS_WITH_AS(io::system_from_json(j), doctest::Contains("unknown field"), Error);
  j = io::to_json(systems[0]);
  j["reps"][0]["ends"][0][0] = {"1", "0"};
  CHECK_THROWS_WITH_AS(io::system_from_json(j), doctest::Contains("denominator"), Error);
}

TEST_CASE("exact coordinates are integer fractions") {
  auto j = io::to_json(realize_ppt_base("M", FlatSurface::cone(3)));
  CHECK(j["number_system"] == "sqrt3");
  CHECK(j["positions"]["a"][0].contains("sqrt3"));
  auto f = io::to_json(realize_ppt_base("M", FlatSurface::cone(5)));
  CHECK(f["positions"]["a"][0].is_string());
  auto r = io::to_json(realize_ppt_base("L", FlatSurface::cylinder()));
  CHECK(r["positions"].begin().value()[0] == io::json::array({"3", "10"}));
}

TEST_CASE("ppt json round trip") {
  std::vector<PptRealization> drawings{
      realize_ppt(decompose(fx::fig_a(), 2), FlatSurface::cylinder()),
      realize_ppt(decompose(fx::fig_c(), 1), FlatSurface::cone(6)),
      realize_ppt(decompose(fx::fig_c(), 1), FlatSurface::cone(4)),
      realize_ppt_base("M", FlatSurface::cone(5))};
  for (const auto& r : drawings) {
    auto j = io::to_json(r);
    CHECK(io::classify(j) == io::DocKind::Ppt);
    auto back = io::ppt_from_json(io::json::parse(j.dump()));
    CHECK(io::to_json(back) == j);
    CHECK(back.log == r.log);
    validate_ppt(back);
  }
  auto j = io::to_json(drawings[0]);
  j["surface"] = "cone:3";
  CHECK_THROWS_WITH_AS(io::ppt_from_json(j), doctest::Contains("surface"), Error);
}
