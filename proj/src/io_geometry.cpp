#include <cstdio>
#include <map>

#include "annulus/io.hpp"

namespace annulus::io {

namespace {

std::string str_of(const json& j, const std::string& what) {
  if (!j.is_string()) fail("ParseError", what + ": expected a string");
  return j.get<std::string>();
}

json rat_json(const Rational& q) { return json::array({q.get_num().get_str(), q.get_den().get_str()}); }

Rational rat_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) fail("ParseError", what + ": expected [\"p\", \"q\"]");
  mpz_class p, q;
  try {
    p = mpz_class(str_of(j[0], what), 10);
    q = mpz_class(str_of(j[1], what), 10);
  } catch (const std::invalid_argument&) {
    fail("ParseError", what + ": not an integer fraction");
  }
  if (q <= 0) fail("ParseError", what + ": denominator must be positive");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

json num_json(const Rational& x) { return rat_json(x); }
json num_json(const QSqrt3& x) { return {{"rational", rat_json(x.a)}, {"sqrt3", rat_json(x.b)}}; }
json num_json(const Approx& x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x.v);
  return std::string(buf);
}

template <class S>
S num_from(const json& j, const std::string& what);

template <>
Rational num_from<Rational>(const json& j, const std::string& what) {
  return rat_from(j, what);
}

template <>
QSqrt3 num_from<QSqrt3>(const json& j, const std::string& what) {
  check_keys(j, {"rational", "sqrt3"}, {"rational", "sqrt3"}, what);
  return {rat_from(j.at("rational"), what + ".rational"), rat_from(j.at("sqrt3"), what + ".sqrt3")};
}

template <>
Approx num_from<Approx>(const json& j, const std::string& what) {
  const std::string s = str_of(j, what);
  size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail("ParseError", what + ": not a decimal number");
  }
  if (used != s.size()) fail("ParseError", what + ": not a decimal number");
  return Approx(v);
}

template <class S>
json pt_json(const Point<S>& p) {
  return json::array({num_json(p.x), num_json(p.y)});
}

template <class S>
Point<S> pt_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) fail("ParseError", what + ": expected [x, y]");
  return {num_from<S>(j[0], what + "[0]"), num_from<S>(j[1], what + "[1]")};
}

std::array<Rational, 2> rat_pair(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) fail("ParseError", what + ": expected [x, y]");
  return {rat_from(j[0], what), rat_from(j[1], what)};
}

void check_number_system(const json& j, const SymmetryGroup& g, const std::string& what) {
  const std::string ns = str_of(j.at("number_system"), what + ".number_system");
  if (ns != g.number_system())
    fail("ParseError", what + ": number_system \"" + ns + "\" does not match the group (expected " +
                           g.number_system() + ")");
}

int vertex_of(const AnnulusMap& g, const json& j, const std::string& what) {
  const int v = g.vertex_index(str_of(j, what));
  if (v < 0) fail("ParseError", what + ": unknown vertex " + j.get<std::string>());
  return v;
}

template <class S>
json system_json(const SystemT<S>& s) {
  json reps = json::array();
  for (size_t i = 0; i < s.reps.size(); ++i) {
    const auto& r = s.reps[i];
    json targets = json::array(), darts = json::array();
    for (int e = 0; e < 2; ++e) {
      const Target& t = r.target[e];
      targets.push_back(t.free() ? json(nullptr)
                                 : json{{"rep", s.graph.vertex_name(t.rep)}, {"power", t.power}});
      darts.push_back(r.dart[e] < 0 ? json(nullptr) : json(dart_string(s.graph, r.dart[e])));
    }
    reps.push_back({{"vertex", s.graph.vertex_name(static_cast<int>(i))},
                    {"line", json::array({pt_json(r.line[0]), pt_json(r.line[1])})},
                    {"ends", json::array({pt_json(r.end[0]), pt_json(r.end[1])})},
                    {"targets", targets},
                    {"darts", darts}});
  }
  return reps;
}

template <class S>
SystemT<S> system_from(const json& j, const SymmetryGroup& grp, AnnulusMap graph) {
  SystemT<S> s;
  s.group = grp;
  s.graph = std::move(graph);
  const json& reps = j.at("reps");
  if (!reps.is_array() || static_cast<int>(reps.size()) != s.graph.num_vertices())
    fail("ParseError", "contact system: need one entry in reps per vertex");
  s.reps.resize(reps.size());
  std::vector<char> seen(reps.size(), 0);
  for (const auto& r : reps) {
    const std::string what = "contact system rep";
    check_keys(r, {"vertex", "line", "ends", "targets", "darts"},
               {"vertex", "line", "ends", "targets", "darts"}, what);
    const int v = vertex_of(s.graph, r.at("vertex"), what + ".vertex");
    if (seen[v]) fail("ParseError", what + ": vertex listed twice");
    seen[v] = 1;
    auto& seg = s.reps[v];
    for (const char* key : {"line", "ends", "targets", "darts"})
      if (!r.at(key).is_array() || r.at(key).size() != 2)
        fail("ParseError", what + "." + key + ": expected two entries");
    for (int e = 0; e < 2; ++e) {
      seg.line[e] = pt_from<S>(r.at("line")[e], what + ".line");
      seg.end[e] = pt_from<S>(r.at("ends")[e], what + ".ends");
      const json& t = r.at("targets")[e];
      if (!t.is_null()) {
        check_keys(t, {"rep", "power"}, {"rep", "power"}, what + ".targets");
        if (!t.at("power").is_number_integer()) fail("ParseError", what + ".targets.power: expected integer");
        seg.target[e] = {vertex_of(s.graph, t.at("rep"), what + ".targets.rep"), t.at("power").get<int>()};
      }
      const json& d = r.at("darts")[e];
      seg.dart[e] = d.is_null() ? -1 : parse_dart(s.graph, str_of(d, what + ".darts"));
    }
  }
  return s;
}

template <class S>
json ppt_json(const PptT<S>& r) {
  json pos = json::object(), pw = json::object();
  for (int v = 0; v < r.graph.num_vertices(); ++v) pos[r.graph.vertex_name(v)] = pt_json(r.pos[v]);
  for (int e = 0; e < r.graph.num_edges(); ++e) pw[r.graph.edge(e).id] = r.power[e];
  return {{"positions", pos}, {"powers", pw}};
}

template <class S>
PptT<S> ppt_from(const json& j, const SymmetryGroup& grp, AnnulusMap graph) {
  PptT<S> r;
  r.group = grp;
  r.graph = std::move(graph);
  const json& pos = j.at("positions");
  const json& pw = j.at("powers");
  if (!pos.is_object() || static_cast<int>(pos.size()) != r.graph.num_vertices())
    fail("ParseError", "ppt.positions: need one entry per vertex");
  if (!pw.is_object() || static_cast<int>(pw.size()) != r.graph.num_edges())
    fail("ParseError", "ppt.powers: need one entry per edge");
  r.pos.resize(r.graph.num_vertices());
  r.power.assign(r.graph.num_edges(), 0);
  for (auto it = pos.begin(); it != pos.end(); ++it) {
    const int v = r.graph.vertex_index(it.key());
    if (v < 0) fail("ParseError", "ppt.positions: unknown vertex " + it.key());
    r.pos[v] = pt_from<S>(it.value(), "ppt.positions." + it.key());
  }
  for (auto it = pw.begin(); it != pw.end(); ++it) {
    const int e = r.graph.edge_index(it.key());
    if (e < 0) fail("ParseError", "ppt.powers: unknown edge " + it.key());
    if (!it.value().is_number_integer()) fail("ParseError", "ppt.powers." + it.key() + ": expected integer");
    r.power[e] = it.value().get<int>();
  }
  return r;
}

template <class F>
auto by_number_system(const SymmetryGroup& g, F&& f) {
  const std::string ns = g.number_system();
  if (ns == "rational") return f.template operator()<Rational>();
  if (ns == "sqrt3") return f.template operator()<QSqrt3>();
  return f.template operator()<Approx>();
}

}  // namespace

json to_json(const SymmetryGroup& g) {
  if (g.kind == SymmetryGroup::Kind::Translation)
    return {{"kind", "translation"}, {"vector", json::array({rat_json(g.vector[0]), rat_json(g.vector[1])})}};
  return {{"kind", "rotation"},
          {"order", g.order},
          {"center", json::array({rat_json(g.center[0]), rat_json(g.center[1])})}};
}

SymmetryGroup group_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) fail("ParseError", "group: expected an object with a kind");
  const std::string kind = str_of(j.at("kind"), "group.kind");
  if (kind == "translation") {
    check_keys(j, {"kind", "vector"}, {"kind", "vector"}, "group");
    auto v = rat_pair(j.at("vector"), "group.vector");
    if (v[0] == 0 && v[1] == 0) fail("ParseError", "group.vector: must be nonzero");
    return SymmetryGroup::translation(v[0], v[1]);
  }
  if (kind == "rotation") {
    check_keys(j, {"kind", "order", "center"}, {"kind", "order", "center"}, "group");
    if (!j.at("order").is_number_integer() || j.at("order").get<int>() < 1)
      fail("ParseError", "group.order: expected a positive integer");
    auto c = rat_pair(j.at("center"), "group.center");
    return SymmetryGroup::rotation(j.at("order").get<int>(), c[0], c[1]);
  }
  fail("ParseError", "group.kind: expected translation or rotation");
}

json to_json(const ContactSystem& s) {
  json j;
  j["group"] = to_json(s.group());
  j["number_system"] = s.group().number_system();
  j["graph"] = to_json(s.graph());
  j["reps"] = std::visit([](const auto& x) { return system_json(x); }, s.variant());
  return j;
}

ContactSystem system_from_json(const json& j) {
  check_keys(j, {"group", "number_system", "graph", "reps"}, {"group", "number_system", "graph", "reps"},
             "contact system");
  const SymmetryGroup g = group_from_json(j.at("group"));
  check_number_system(j, g, "contact system");
  AnnulusMap graph = graph_from_json(j.at("graph"));
  return by_number_system(g, [&]<class S>() { return ContactSystem(system_from<S>(j, g, graph)); });
}

json to_json(const PptRealization& r) {
  json j = std::visit([](const auto& x) { return ppt_json(x); }, r.variant());
  j["group"] = to_json(r.group());
  j["surface"] = r.surface().describe();
  j["number_system"] = r.group().number_system();
  j["graph"] = to_json(r.graph());
  j["log"] = r.log;
  return j;
}

PptRealization ppt_from_json(const json& j) {
  check_keys(j, {"group", "surface", "number_system", "graph", "positions", "powers", "log"},
             {"group", "number_system", "graph", "positions", "powers"}, "ppt");
  const SymmetryGroup g = group_from_json(j.at("group"));
  check_number_system(j, g, "ppt");
  if (j.contains("surface") && str_of(j.at("surface"), "ppt.surface") != FlatSurface::of(g).describe())
    fail("ParseError", "ppt.surface does not match the group");
  AnnulusMap graph = graph_from_json(j.at("graph"));
  PptRealization r =
      by_number_system(g, [&]<class S>() { return PptRealization(ppt_from<S>(j, g, graph)); });
  if (j.contains("log")) {
    if (!j.at("log").is_array()) fail("ParseError", "ppt.log: expected an array");
    for (const auto& l : j.at("log")) r.log.push_back(str_of(l, "ppt.log"));
  }
  return r;
}

DocKind classify(const json& j) {
  if (!j.is_object()) fail("ParseError", "expected a JSON object");
  if (j.contains("reps")) return DocKind::ContactSystem;
  if (j.contains("positions")) return DocKind::Ppt;
  if (j.contains("steps")) return DocKind::Certificate;
  if (j.contains("vertices")) return DocKind::Graph;
  fail("ParseError", "unrecognized document: expected a graph, certificate, contact system or ppt");
}

}  // namespace annulus::io
