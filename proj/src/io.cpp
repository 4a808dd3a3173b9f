#include "annulus/io.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace annulus::io {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                std::initializer_list<const char*> required, const std::string& what) {
  if (!j.is_object()) fail("ParseError", what + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) fail("ParseError", what + ": unknown field \"" + it.key() + "\"");
  for (const char* r : required)
    if (!j.contains(r)) fail("ParseError", what + ": missing field \"" + r + "\"");
}

namespace {

std::string str(const json& j, const std::string& what) {
  if (!j.is_string()) fail("ParseError", what + ": expected a string");
  return j.get<std::string>();
}

std::optional<std::string> opt_str(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return str(j.at(key), what + "." + key);
}

json opt(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

json corner_json(const NamedCorner& c) {
  return {{"vertex", c.vertex}, {"in", opt(c.in)}, {"out", opt(c.out)}};
}

NamedCorner corner_from(const json& j, const std::string& what) {
  check_keys(j, {"vertex", "in", "out"}, {"vertex"}, what);
  return {str(j.at("vertex"), what + ".vertex"), opt_str(j, "in", what), opt_str(j, "out", what)};
}

json edge_json(const EdgeRef& e) { return {{"id", e.id}, {"tail", e.tail}, {"head", e.head}}; }

EdgeRef edge_from(const json& j, const std::string& what) {
  check_keys(j, {"id", "tail", "head"}, {"id", "tail", "head"}, what);
  return {str(j.at("id"), what), str(j.at("tail"), what), str(j.at("head"), what)};
}

const json& array_at(const json& j, const char* key, const std::string& what) {
  const json& a = j.at(key);
  if (!a.is_array()) fail("ParseError", what + "." + key + ": expected an array");
  return a;
}

}  // namespace

json to_json(const AnnulusMap& m) {
  json j;
  j["vertices"] = m.vertex_names();
  j["edges"] = json::array();
  for (const auto& e : m.edges())
    j["edges"].push_back(edge_json({e.id, m.vertex_name(e.tail), m.vertex_name(e.head)}));
  j["rotation"] = json::object();
  for (int v = 0; v < m.num_vertices(); ++v) {
    json r = json::array();
    for (int d : m.rotation()[v]) r.push_back(dart_string(m, d));
    j["rotation"][m.vertex_name(v)] = r;
  }
  auto ec = m.end_corners();
  j["end_faces"] = {corner_json(name_corner(m, ec[0])), corner_json(name_corner(m, ec[1]))};
  return j;
}

AnnulusMap graph_from_json(const json& j) {
  const std::string what = "graph";
  check_keys(j, {"vertices", "edges", "rotation", "end_faces"},
             {"vertices", "edges", "rotation", "end_faces"}, what);
  std::vector<std::string> names;
  std::map<std::string, int> vid;
  for (const auto& v : array_at(j, "vertices", what)) {
    names.push_back(str(v, "graph.vertices"));
    if (!vid.emplace(names.back(), static_cast<int>(names.size()) - 1).second)
      fail("ParseError", "duplicate vertex " + names.back());
  }
  auto vertex = [&](const std::string& n) {
    auto it = vid.find(n);
    if (it == vid.end()) fail("ParseError", "unknown vertex " + n);
    return it->second;
  };
  std::vector<Edge> edges;
  std::map<std::string, int> eid;
  for (const auto& e : array_at(j, "edges", what)) {
    EdgeRef r = edge_from(e, "graph.edges");
    if (!eid.emplace(r.id, static_cast<int>(edges.size())).second)
      fail("ParseError", "duplicate edge " + r.id);
    edges.push_back({r.id, vertex(r.tail), vertex(r.head)});
  }
  const json& rj = j.at("rotation");
  if (!rj.is_object()) fail("ParseError", "graph.rotation: expected an object");
  std::vector<std::vector<int>> rot(names.size());
  for (auto it = rj.begin(); it != rj.end(); ++it) {
    int v = vertex(it.key());
    if (!it.value().is_array()) fail("ParseError", "rotation of " + it.key() + ": expected array");
    for (const auto& d : it.value()) {
      std::string s = str(d, "rotation entry");
      bool plus = true;
      // Accept ASCII '-' and U+2212.
      static const std::string minus = "\xE2\x88\x92";
      if (s.size() > minus.size() && s.compare(s.size() - minus.size(), minus.size(), minus) == 0) {
        s.resize(s.size() - minus.size());
        plus = false;
      } else if (!s.empty() && (s.back() == '+' || s.back() == '-')) {
        plus = s.back() == '+';
        s.pop_back();
      } else {
        fail("ParseError", "bad dart string " + s);
      }
      auto f = eid.find(s);
      if (f == eid.end()) fail("ParseError", "unknown edge in dart " + s);
      rot[v].push_back(dart(f->second, plus));
    }
  }
  const json& ef = array_at(j, "end_faces", what);
  if (ef.size() != 2) fail("ParseError", "end_faces must hold two corners");
  // Resolve witness corners against a probe map built with arbitrary ends.
  AnnulusMap probe = AnnulusMap::build(names, edges, rot,
                                       edges.empty() ? std::array<int, 2>{-1, -1}
                                                     : std::array<int, 2>{0, 0});
  std::array<Corner, 2> ends;
  for (int k = 0; k < 2; ++k) {
    ends[k] = resolve_corner(probe, corner_from(ef[k], "end_faces"));
  }
  return AnnulusMap::build_with_corners(names, edges, rot, ends);
}

json to_json(const SplitRecord& r) {
  json j;
  j["kind"] = r.kind == SplitRecord::Kind::Triangle ? "triangle" : "quad";
  j["vertex"] = r.vertex;
  j["new_vertex"] = r.new_vertex;
  j["moved"] = r.moved;
  j["after"] = opt(r.after);
  j["pivot"] = edge_json(r.pivot);
  j["restored"] = json::array();
  for (const auto& e : r.restored)
    j["restored"].push_back(
        {{"edge", edge_json(e.edge)}, {"tail_after", opt(e.tail_after)}, {"head_after", opt(e.head_after)}});
  j["end_faces"] = {corner_json(r.end_faces[0]), corner_json(r.end_faces[1])};
  return j;
}

SplitRecord split_from_json(const json& j) {
  const std::string what = "step";
  check_keys(j, {"kind", "vertex", "new_vertex", "moved", "after", "pivot", "restored", "end_faces"},
             {"kind", "vertex", "new_vertex", "moved", "pivot", "restored", "end_faces"}, what);
  SplitRecord r;
  std::string k = str(j.at("kind"), "step.kind");
  if (k == "triangle")
    r.kind = SplitRecord::Kind::Triangle;
  else if (k == "quad")
    r.kind = SplitRecord::Kind::Quad;
  else
    fail("ParseError", "step.kind must be triangle or quad");
  r.vertex = str(j.at("vertex"), "step.vertex");
  r.new_vertex = str(j.at("new_vertex"), "step.new_vertex");
  for (const auto& m : array_at(j, "moved", what)) r.moved.push_back(str(m, "step.moved"));
  r.after = opt_str(j, "after", what);
  r.pivot = edge_from(j.at("pivot"), "step.pivot");
  for (const auto& e : array_at(j, "restored", what)) {
    check_keys(e, {"edge", "tail_after", "head_after"}, {"edge"}, "step.restored");
    r.restored.push_back({edge_from(e.at("edge"), "step.restored.edge"),
                          opt_str(e, "tail_after", what), opt_str(e, "head_after", what)});
  }
  const json& ef = array_at(j, "end_faces", what);
  if (ef.size() != 2) fail("ParseError", "step.end_faces must hold two corners");
  r.end_faces = {corner_from(ef[0], "step.end_faces"), corner_from(ef[1], "step.end_faces")};
  return r;
}

json to_json(const ConstructionSequence& s) {
  json j;
  j["base"] = s.base;
  j["level"] = s.level;
  if (s.base_graph) j["base_graph"] = to_json(*s.base_graph);
  j["steps"] = json::array();
  for (const auto& r : s.steps) j["steps"].push_back(to_json(r));
  return j;
}

ConstructionSequence cert_from_json(const json& j) {
  check_keys(j, {"base", "level", "steps", "base_graph"}, {"base", "level", "steps"}, "certificate");
  ConstructionSequence s;
  s.base = str(j.at("base"), "certificate.base");
  if (s.base != "K" && s.base != "L" && s.base != "M") fail("ParseError", "base must be K, L or M");
  if (!j.at("level").is_number_integer()) fail("ParseError", "certificate.level: expected integer");
  s.level = j.at("level").get<int>();
  if (s.level != 1 && s.level != 2) fail("ParseError", "level must be 1 or 2");
  if (j.contains("base_graph")) s.base_graph = graph_from_json(j.at("base_graph"));
  for (const auto& r : array_at(j, "steps", "certificate")) s.steps.push_back(split_from_json(r));
  return s;
}

std::string read_text(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("ParseError", "cannot open " + path);
    ss << in.rdbuf();
  }
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    fail("ParseError", path + ": " + e.what());
  }
}

}  // namespace annulus::io
