#include "annulus/moves.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace annulus {

// ---------------------------------------------------------------- MapBuilder

MapBuilder MapBuilder::from(const AnnulusMap& m) {
  MapBuilder b;
  b.names = m.vertex_names();
  b.vdead.assign(b.names.size(), 0);
  b.edges = m.edges();
  b.edead.assign(b.edges.size(), 0);
  b.rot = m.rotation();
  return b;
}

int MapBuilder::vertex(const std::string& name) const {
  for (size_t v = 0; v < names.size(); ++v)
    if (!vdead[v] && names[v] == name) return static_cast<int>(v);
  return -1;
}

int MapBuilder::edge(const std::string& id) const {
  for (size_t e = 0; e < edges.size(); ++e)
    if (!edead[e] && edges[e].id == id) return static_cast<int>(e);
  return -1;
}

int MapBuilder::add_vertex(const std::string& name) {
  names.push_back(name);
  vdead.push_back(0);
  rot.emplace_back();
  return static_cast<int>(names.size()) - 1;
}

int MapBuilder::add_edge(const std::string& id, int tail, int head) {
  edges.push_back({id, tail, head});
  edead.push_back(0);
  return static_cast<int>(edges.size()) - 1;
}

int MapBuilder::position(int d) const {
  const auto& r = rot[src(d)];
  auto it = std::find(r.begin(), r.end(), d);
  return it == r.end() ? -1 : static_cast<int>(it - r.begin());
}

void MapBuilder::insert_after(int after, int d) {
  auto& r = rot[src(d)];
  if (after < 0) {
    r.push_back(d);
    return;
  }
  auto it = std::find(r.begin(), r.end(), after);
  if (it == r.end()) fail("BadPartition", "predecessor dart not found at vertex");
  r.insert(it + 1, d);
}

void MapBuilder::remove_dart(int d) {
  auto& r = rot[src(d)];
  r.erase(std::remove(r.begin(), r.end(), d), r.end());
}

void MapBuilder::remove_edge(int e) {
  remove_dart(2 * e);
  remove_dart(2 * e + 1);
  edead[e] = 1;
}

void MapBuilder::remove_vertex(int v) { vdead[v] = 1; }

int MapBuilder::parse_dart(const std::string& s) const {
  static const std::string minus = "\u2212";
  std::string id;
  bool plus;
  if (s.size() > minus.size() && s.compare(s.size() - minus.size(), minus.size(), minus) == 0) {
    id = s.substr(0, s.size() - minus.size());
    plus = false;
  } else if (!s.empty() && (s.back() == '+' || s.back() == '-')) {
    id = s.substr(0, s.size() - 1);
    plus = s.back() == '+';
  } else {
    return -1;
  }
  int e = edge(id);
  return e < 0 ? -1 : dart(e, plus);
}

std::array<int, 2> MapBuilder::any_dart_ends() const {
  for (size_t e = 0; e < edges.size(); ++e)
    if (!edead[e]) return {static_cast<int>(2 * e), static_cast<int>(2 * e)};
  return {-1, -1};
}

AnnulusMap MapBuilder::finish(std::array<int, 2> end_darts) const {
  std::vector<int> vmap(names.size(), -1), emap(edges.size(), -1);
  std::vector<std::string> vn;
  for (size_t v = 0; v < names.size(); ++v)
    if (!vdead[v]) {
      vmap[v] = static_cast<int>(vn.size());
      vn.push_back(names[v]);
    }
  std::vector<Edge> es;
  for (size_t e = 0; e < edges.size(); ++e)
    if (!edead[e]) {
      emap[e] = static_cast<int>(es.size());
      Edge x = edges[e];
      if (vmap[x.tail] < 0 || vmap[x.head] < 0) fail("Internal", "edge at removed vertex");
      x.tail = vmap[x.tail];
      x.head = vmap[x.head];
      es.push_back(x);
    }
  auto remap = [&](int d) { return d < 0 ? -1 : 2 * emap[d >> 1] + (d & 1); };
  std::vector<std::vector<int>> r;
  for (size_t v = 0; v < names.size(); ++v) {
    if (vdead[v]) continue;
    std::vector<int> row;
    for (int d : rot[v]) row.push_back(remap(d));
    r.push_back(row);
  }
  std::array<int, 2> ends{remap(end_darts[0]), remap(end_darts[1])};
  if (es.empty()) ends = {-1, -1};
  return AnnulusMap::build(vn, es, r, ends);
}

// ---------------------------------------------------------------- naming

NamedCorner name_corner(const AnnulusMap& m, const Corner& c) {
  NamedCorner n;
  n.vertex = m.vertex_name(c.vertex);
  if (c.in >= 0) n.in = dart_string(m, c.in);
  if (c.out >= 0) n.out = dart_string(m, c.out);
  return n;
}

Corner resolve_corner(const AnnulusMap& m, const NamedCorner& c) {
  Corner out;
  out.vertex = m.vertex_index(c.vertex);
  if (out.vertex < 0) fail("UnknownEndFace", "corner names unknown vertex " + c.vertex);
  out.in = c.in ? parse_dart(m, *c.in) : -1;
  out.out = c.out ? parse_dart(m, *c.out) : -1;
  if ((c.in && out.in < 0) || (c.out && out.out < 0))
    fail("UnknownEndFace", "corner names unknown dart");
  return out;
}

static AnnulusMap with_named_ends(const AnnulusMap& m, const std::array<NamedCorner, 2>& ends) {
  std::array<int, 2> darts{-1, -1};
  for (int i = 0; i < 2; ++i) {
    Corner c = resolve_corner(m, ends[i]);
    if (m.num_edges() == 0) continue;
    if (c.in < 0 || c.out < 0 || m.face_next(c.in) != c.out || m.src(c.out) != c.vertex)
      fail("UnknownEndFace", "witness corner is not a face corner");
    darts[i] = c.out;
  }
  return m.with_end_darts(darts);
}

std::string fresh_edge_id(const AnnulusMap& m, const std::string& prefix) {
  for (int k = 1;; ++k) {
    std::string id = prefix + std::to_string(k);
    if (m.edge_index(id) < 0) return id;
  }
}

std::string fresh_vertex_name(const AnnulusMap& m, const std::string& prefix) {
  for (int k = 1;; ++k) {
    std::string id = prefix + std::to_string(k);
    if (m.vertex_index(id) < 0) return id;
  }
}

bool same_by_names(const AnnulusMap& a, const AnnulusMap& b) {
  if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges()) return false;
  for (const auto& e : a.edges()) {
    int f = b.edge_index(e.id);
    if (f < 0) return false;
    const Edge& g = b.edge(f);
    if (a.vertex_name(e.tail) != b.vertex_name(g.tail) ||
        a.vertex_name(e.head) != b.vertex_name(g.head))
      return false;
  }
  for (int v = 0; v < a.num_vertices(); ++v) {
    int w = b.vertex_index(a.vertex_name(v));
    if (w < 0) return false;
    const auto& ra = a.rotation()[v];
    const auto& rb = b.rotation()[w];
    if (ra.size() != rb.size()) return false;
    if (ra.empty()) continue;
    int start = -1;
    for (size_t i = 0; i < rb.size(); ++i)
      if (dart_string(b, rb[i]) == dart_string(a, ra[0])) start = static_cast<int>(i);
    if (start < 0) return false;
    for (size_t i = 0; i < ra.size(); ++i)
      if (dart_string(a, ra[i]) != dart_string(b, rb[(start + i) % rb.size()])) return false;
  }
  auto face_key = [](const AnnulusMap& m, int f) {
    std::set<std::string> s;
    for (int d : m.face_darts()[f]) s.insert(dart_string(m, d));
    return s;
  };
  std::multiset<std::set<std::string>> ea, eb;
  for (int i = 0; i < 2; ++i) {
    ea.insert(face_key(a, a.end_faces()[i]));
    eb.insert(face_key(b, b.end_faces()[i]));
  }
  return ea == eb;
}

// ---------------------------------------------------------------- chords

AnnulusMap insert_chord(const AnnulusMap& m, const Corner& c1, const Corner& c2,
                        const std::string& id) {
  if (m.num_edges() > 0 && m.face_of(c1.out) != m.face_of(c2.out))
    fail("Internal", "chord corners lie on different faces");
  MapBuilder b = MapBuilder::from(m);
  int e = b.add_edge(id, c1.vertex, c2.vertex);
  int t = dart(e, true), h = dart(e, false);
  if (c1.out == c2.out) {
    b.insert_after(c1.out, t);
    b.insert_after(t, h);
  } else {
    b.insert_after(c1.out, t);
    b.insert_after(c2.out, h);
  }
  std::array<int, 2> ends{m.end_dart(0), m.end_dart(1)};
  if (m.num_edges() == 0) ends = {t, t};
  return b.finish(ends);
}

// ---------------------------------------------------------------- splits

AnnulusMap apply_split(const AnnulusMap& h, const SplitRecord& r) {
  MapBuilder b = MapBuilder::from(h);
  auto dart_of = [&](const std::string& s) {
    int d = parse_dart(h, s);
    if (d < 0) fail("BadPartition", "unknown dart " + s);
    return d;
  };
  int z = b.vertex(r.vertex);
  if (z < 0) fail("BadPartition", "unknown vertex " + r.vertex);
  if (b.vertex(r.new_vertex) >= 0) fail("BadPartition", "vertex already exists: " + r.new_vertex);
  std::vector<int> arc;
  for (const auto& s : r.moved) arc.push_back(dart_of(s));
  const std::vector<int> R = b.rot[z];
  int after = -1;
  if (r.after) {
    after = dart_of(*r.after);
    if (std::find(R.begin(), R.end(), after) == R.end())
      fail("BadPartition", "predecessor not at split vertex");
    if (std::find(arc.begin(), arc.end(), after) != arc.end())
      fail("BadPartition", "predecessor inside moved arc");
  }
  // The arc must be contiguous in ccw order.
  if (!arc.empty()) {
    size_t start;
    if (after >= 0) {
      start = (std::find(R.begin(), R.end(), after) - R.begin() + 1) % R.size();
    } else {
      if (arc.size() != R.size()) fail("BadPartition", "arc without predecessor must be everything");
      auto it = std::find(R.begin(), R.end(), arc[0]);
      if (it == R.end()) fail("BadPartition", "moved dart not at split vertex");
      start = it - R.begin();
    }
    if (arc.size() > R.size()) fail("BadPartition", "arc longer than rotation");
    for (size_t i = 0; i < arc.size(); ++i)
      if (R[(start + i) % R.size()] != arc[i])
        fail("BadPartition", "moved darts are not a contiguous ccw arc");
  } else if (after < 0 && !R.empty()) {
    fail("BadPartition", "empty arc needs a predecessor");
  }
  int y = b.add_vertex(r.new_vertex);
  if (b.edge(r.pivot.id) >= 0) fail("BadPartition", "pivot id already used: " + r.pivot.id);
  int pt, ph;
  if (r.pivot.tail == r.vertex && r.pivot.head == r.new_vertex) {
    pt = z;
    ph = y;
  } else if (r.pivot.tail == r.new_vertex && r.pivot.head == r.vertex) {
    pt = y;
    ph = z;
  } else {
    fail("BadPartition", "pivot must join the split pair");
  }
  for (int d : arc) {
    b.remove_dart(d);
    if (d & 1)
      b.edges[d >> 1].head = y;
    else
      b.edges[d >> 1].tail = y;
  }
  int pe = b.add_edge(r.pivot.id, pt, ph);
  int dz = dart(pe, pt == z), dy = alpha(dz);
  b.insert_after(after, dz);
  b.rot[y].push_back(dy);
  for (int d : arc) b.rot[y].push_back(d);
  for (const auto& re : r.restored) {
    int t = b.vertex(re.edge.tail), hd = b.vertex(re.edge.head);
    if (t < 0 || hd < 0) fail("BadPartition", "restored edge names unknown vertex");
    if (b.edge(re.edge.id) >= 0) fail("BadPartition", "restored id already used: " + re.edge.id);
    int e = b.add_edge(re.edge.id, t, hd);
    auto pred = [&](const std::optional<std::string>& s) {
      if (!s) return -1;
      int d = b.parse_dart(*s);
      if (d < 0) fail("BadPartition", "unknown predecessor dart " + *s);
      return d;
    };
    int dt = dart(e, true), dh = dart(e, false);
    int at = pred(re.tail_after);
    if (at >= 0 && b.src(at) != t) fail("BadPartition", "tail predecessor at wrong vertex");
    if (at < 0 && !b.rot[t].empty()) fail("BadPartition", "missing tail predecessor");
    b.insert_after(at, dt);
    int ah = pred(re.head_after);
    if (ah >= 0 && b.src(ah) != hd) fail("BadPartition", "head predecessor at wrong vertex");
    if (ah < 0 && !b.rot[hd].empty()) fail("BadPartition", "missing head predecessor");
    b.insert_after(ah, dh);
  }
  if (r.kind == SplitRecord::Kind::Quad) b.remove_edge(pe);
  AnnulusMap g = b.finish(b.any_dart_ends());
  return with_named_ends(g, r.end_faces);
}

// ---------------------------------------------------------------- contractions

namespace {

// Contract `pivot` in gp after deleting `deleted` (in order). `orig` supplies the
// end corners recorded for the split that undoes this.
Contraction contract_general(const AnnulusMap& gp, int pivot, const std::vector<int>& deleted,
                             SplitRecord::Kind kind, const AnnulusMap& orig) {
  const Edge& pe = gp.edge(pivot);
  if (pe.tail == pe.head) fail("LoopPivot", "pivot edge is a loop");
  int z = pe.tail, y = pe.head;
  if (gp.vertex_name(y) < gp.vertex_name(z)) std::swap(z, y);
  int pz = dart(pivot, pe.tail == z), py = alpha(pz);
  std::vector<char> gone(gp.num_edges(), 0);
  gone[pivot] = 1;
  for (int x : deleted) gone[x] = 1;
  auto collect = [&](int start) {
    std::vector<int> out;
    for (int d = gp.ccw_next(start); d != start; d = gp.ccw_next(d))
      if (!gone[edge_of(d)]) out.push_back(d);
    return out;
  };
  std::vector<int> K = collect(pz), A = collect(py);

  SplitRecord rec;
  rec.kind = kind;
  rec.vertex = gp.vertex_name(z);
  rec.new_vertex = gp.vertex_name(y);
  for (int d : A) rec.moved.push_back(dart_string(gp, d));
  if (!K.empty()) rec.after = dart_string(gp, K.back());
  rec.pivot = {pe.id, gp.vertex_name(pe.tail), gp.vertex_name(pe.head)};
  std::vector<char> present(gp.num_darts(), 1);
  for (int x : deleted) present[2 * x] = present[2 * x + 1] = 0;
  auto pred = [&](int d) -> std::optional<std::string> {
    for (int p = gp.ccw_prev(d); p != d; p = gp.ccw_prev(p))
      if (present[p]) return dart_string(gp, p);
    return std::nullopt;
  };
  for (int x : deleted) {
    RestoredEdge re;
    const Edge& xe = gp.edge(x);
    re.edge = {xe.id, gp.vertex_name(xe.tail), gp.vertex_name(xe.head)};
    re.tail_after = pred(2 * x);
    present[2 * x] = 1;
    re.head_after = pred(2 * x + 1);
    present[2 * x + 1] = 1;
    rec.restored.push_back(re);
  }
  auto oc = orig.end_corners();
  for (int i = 0; i < 2; ++i) rec.end_faces[i] = name_corner(orig, oc[i]);

  // Build the contracted map.
  MapBuilder b = MapBuilder::from(gp);
  for (int x : deleted) b.remove_edge(x);
  b.remove_edge(pivot);
  for (auto& e : b.edges) {
    if (e.tail == y) e.tail = z;
    if (e.head == y) e.head = z;
  }
  b.rot[z] = K;
  b.rot[z].insert(b.rot[z].end(), A.begin(), A.end());
  b.rot[y].clear();
  b.remove_vertex(y);

  // Re-witness each end: a surviving dart of the end face, or of a face merged
  // into it across a deleted edge.
  std::array<int, 2> ends{-1, -1};
  for (int i = 0; i < 2; ++i) {
    std::vector<char> seen(gp.num_faces(), 0);
    std::deque<int> q{gp.end_faces()[i]};
    seen[q.front()] = 1;
    while (!q.empty() && ends[i] < 0) {
      int f = q.front();
      q.pop_front();
      for (int d : gp.face_darts()[f])
        if (!gone[edge_of(d)]) {
          ends[i] = d;
          break;
        }
      for (int d : gp.face_darts()[f]) {
        if (edge_of(d) == pivot || !gone[edge_of(d)]) continue;
        int g = gp.face_of(alpha(d));
        if (!seen[g]) {
          seen[g] = 1;
          q.push_back(g);
        }
      }
    }
  }
  Contraction c{b.finish(ends), rec};
  AnnulusMap back = apply_split(c.result, rec);
  if (!same_by_names(back, orig)) fail("Internal", "split record does not reproduce the map");
  return c;
}

}  // namespace

Contraction triangle_contract(const AnnulusMap& g, int face, int pivot_pos, int delete_choice) {
  if (face < 0 || face >= g.num_faces() || g.face_darts()[face].size() != 3)
    fail("NotTriangle", "face is not of degree 3");
  if (face == g.end_faces()[0] || face == g.end_faces()[1])
    fail("NotTriangle", "face holds an end of the annulus");
  const auto& w = g.face_darts()[face];
  int pivot = edge_of(w[pivot_pos % 3]);
  int x = edge_of(w[(pivot_pos + 1 + delete_choice) % 3]);
  if (g.is_loop(pivot)) fail("LoopPivot", "pivot edge is a loop");
  if (x == pivot) fail("NotTriangle", "deleted edge coincides with the pivot");
  return contract_general(g, pivot, {x}, SplitRecord::Kind::Triangle, g);
}

Contraction quad_contract(const AnnulusMap& g, int face, int diagonal, int del1, int del2) {
  if (face < 0 || face >= g.num_faces() || g.face_darts()[face].size() != 4)
    fail("NotQuad", "face is not of degree 4");
  if (face == g.end_faces()[0] || face == g.end_faces()[1])
    fail("NotQuad", "face holds an end of the annulus");
  const auto& w = g.face_darts()[face];
  int s = diagonal % 2;
  Corner c1 = g.corner_of(w[s]), c2 = g.corner_of(w[s + 2]);
  if (c1.vertex == c2.vertex) fail("DiagonalDegenerate", "diagonal joins a vertex to itself");
  int x1 = edge_of(w[s + del1]);
  int x2 = edge_of(w[(s + 2 + del2) % 4]);
  if (x1 == x2) fail("BadPartition", "the two deleted edges coincide");
  AnnulusMap gp = insert_chord(g, c1, c2, fresh_edge_id(g, "t"));
  int pivot = gp.num_edges() - 1;
  return contract_general(gp, pivot, {x1, x2}, SplitRecord::Kind::Quad, g);
}

// ---------------------------------------------------------------- classification

std::string to_string(FaceClass c) {
  switch (c) {
    case FaceClass::NonDegenerate: return "NonDegenerate";
    case FaceClass::Quad232_vertexRepeat: return "Quad232_vertexRepeat";
    case FaceClass::Quad231_loopA: return "Quad231_loopA";
    case FaceClass::Quad231_loopPlusEdge: return "Quad231_loopPlusEdge";
    case FaceClass::Tri231_loop: return "Tri231_loop";
  }
  return "?";
}

FaceClass classify_face(const AnnulusMap& m, int face) {
  const auto& w = m.face_darts()[face];
  if (w.size() != 3 && w.size() != 4) fail("WrongDegree", "face degree must be 3 or 4");
  std::set<int> vs, es;
  int loops = 0;
  for (int d : w) {
    vs.insert(m.src(d));
    if (es.insert(edge_of(d)).second && m.is_loop(edge_of(d))) ++loops;
  }
  if (vs.size() == w.size() && es.size() == w.size()) return FaceClass::NonDegenerate;
  if (w.size() == 3) {
    if (vs.size() == 2 && es.size() == 3 && loops == 1) return FaceClass::Tri231_loop;
  } else {
    if (vs.size() == 3 && es.size() == 4 && loops == 0) return FaceClass::Quad232_vertexRepeat;
    if (vs.size() == 2 && es.size() == 3 && loops == 2) return FaceClass::Quad231_loopA;
    if (vs.size() == 3 && es.size() == 4 && loops == 1) return FaceClass::Quad231_loopPlusEdge;
  }
  fail("NotCatalogued", "degenerate face outside the known catalogue");
}

}  // namespace annulus
