#include "annulus/reduction.hpp"

#include <random>
#include <set>

#include "annulus/sparsity.hpp"

namespace annulus {

AnnulusMap base_map(const std::string& tag) {
  if (tag == "K") return AnnulusMap::build({"a", "b"}, {{"e1", 0, 1}}, {{0}, {1}}, {0, 0});
  if (tag == "L")
    return AnnulusMap::build({"a", "b"}, {{"e1", 0, 1}, {"e2", 0, 1}}, {{0, 2}, {1, 3}}, {0, 2});
  if (tag == "M") return AnnulusMap::build({"a"}, {{"e1", 0, 0}}, {{0, 1}}, {0, 1});
  fail("IllegalStep", "unknown base tag " + tag);
}

std::string base_tag(const AnnulusMap& m, int level) {
  if (m.num_vertices() == 2 && m.balanced() && m.num_edges() == 1) return "K";
  if (level == 2 && m.num_vertices() == 2 && !m.balanced() && m.num_edges() == 2) return "L";
  if (level == 1 && m.num_vertices() == 1 && !m.balanced() && m.num_edges() == 1) return "M";
  return "";
}

ReduceStep reduce_step(const AnnulusMap& m, int level) {
  auto ends = m.end_faces();
  auto cellular = [&](int f) { return f != ends[0] && f != ends[1]; };
  auto attempt = [&](auto&& make, const std::string& what) -> std::optional<ReduceStep> {
    try {
      Contraction c = make();
      if (check_sparse(c.result, level).tight) return ReduceStep{c.result, c.record, what};
    } catch (const Error& e) {
      if (e.internal()) throw;
    }
    return std::nullopt;
  };
  for (int f = 0; f < m.num_faces(); ++f) {
    if (m.face_darts()[f].size() != 3 || !cellular(f)) continue;
    for (int p = 0; p < 3; ++p) {
      if (m.is_loop(edge_of(m.face_darts()[f][p]))) continue;
      for (int d = 0; d < 2; ++d) {
        auto r = attempt([&] { return triangle_contract(m, f, p, d); },
                         "triangle f" + std::to_string(f) + " p" + std::to_string(p) + " d" +
                             std::to_string(d));
        if (r) return *r;
      }
    }
  }
  for (int f = 0; f < m.num_faces(); ++f) {
    if (m.face_darts()[f].size() != 4 || !cellular(f)) continue;
    for (int s = 0; s < 2; ++s)
      for (int d1 = 0; d1 < 2; ++d1)
        for (int d2 = 0; d2 < 2; ++d2) {
          auto r = attempt([&] { return quad_contract(m, f, s, d1, d2); },
                           "quad f" + std::to_string(f) + " s" + std::to_string(s));
          if (r) return *r;
        }
  }
  fail("NoMoveFound", "no contraction keeps the map tight");
}

ConstructionSequence decompose(const AnnulusMap& m, int level) {
  if (m.num_edges() == 0 || !check_sparse(m, level).tight)
    fail("NotTight", "input is not (2,3," + std::to_string(level) + ")-tight");
  std::vector<SplitRecord> rev;
  AnnulusMap cur = m;
  while (base_tag(cur, level).empty()) {
    if (cur.num_vertices() <= (level == 2 ? 2 : 1))
      fail("Internal", "reduction stopped at a non-base map");
    ReduceStep s = reduce_step(cur, level);
    rev.push_back(s.record);
    cur = s.result;
  }
  ConstructionSequence seq;
  seq.base = base_tag(cur, level);
  seq.level = level;
  seq.steps.assign(rev.rbegin(), rev.rend());
  seq.base_graph = cur;
  return seq;
}

namespace {

bool shares_face(const AnnulusMap& g, const std::vector<int>& edges, size_t degree) {
  auto ends = g.end_faces();
  for (int f = 0; f < g.num_faces(); ++f) {
    if (f == ends[0] || f == ends[1] || g.face_darts()[f].size() != degree) continue;
    std::set<int> on;
    for (int d : g.face_darts()[f]) on.insert(edge_of(d));
    bool all = true;
    for (int e : edges) all = all && on.count(e);
    if (all) return true;
  }
  return false;
}

}  // namespace

std::vector<AnnulusMap> rebuild_prefixes(const ConstructionSequence& seq) {
  if (seq.level != 1 && seq.level != 2) fail("IllegalStep", "level must be 1 or 2");
  if ((seq.base == "L" && seq.level != 2) || (seq.base == "M" && seq.level != 1))
    fail("IllegalStep", "base " + seq.base + " does not exist at this level");
  AnnulusMap g = seq.base_graph ? *seq.base_graph : base_map(seq.base);
  if (base_tag(g, seq.level) != seq.base) fail("IllegalStep", "base graph does not match its tag");
  std::vector<AnnulusMap> out{g};
  for (size_t i = 0; i < seq.steps.size(); ++i) {
    const SplitRecord& r = seq.steps[i];
    if (seq.base == "K" && r.kind != SplitRecord::Kind::Triangle)
      fail("IllegalStep", "balanced certificates use triangle splits only");
    AnnulusMap next;
    try {
      next = apply_split(g, r);
    } catch (const Error& e) {
      fail("IllegalStep", "step " + std::to_string(i) + ": " + e.what());
    }
    std::vector<int> ids;
    for (const auto& re : r.restored) ids.push_back(next.edge_index(re.edge.id));
    if (r.kind == SplitRecord::Kind::Triangle) {
      ids.push_back(next.edge_index(r.pivot.id));
      if (ids.size() != 2 || !shares_face(next, ids, 3))
        fail("IllegalStep", "step " + std::to_string(i) + " does not create a triangle");
    } else if (ids.size() != 2 || !shares_face(next, ids, 4)) {
      fail("IllegalStep", "step " + std::to_string(i) + " does not create a quadrilateral");
    }
    if (!check_sparse(next, seq.level).tight)
      fail("IllegalStep", "prefix " + std::to_string(i + 1) + " is not tight");
    g = next;
    out.push_back(g);
  }
  return out;
}

AnnulusMap rebuild(const ConstructionSequence& seq) { return rebuild_prefixes(seq).back(); }

AnnulusMap vertex_split(const AnnulusMap& g, int z, int after_index, int len,
                        const std::string& new_vertex, const std::string& edge_id) {
  MapBuilder b = MapBuilder::from(g);
  const std::vector<int> R = g.rotation()[z];
  const int r = static_cast<int>(R.size());
  std::vector<int> arc;
  for (int i = 0; i < len; ++i) arc.push_back(R[(after_index + 1 + i) % r]);
  int y = b.add_vertex(new_vertex);
  for (int d : arc) {
    b.remove_dart(d);
    if (d & 1)
      b.edges[d >> 1].head = y;
    else
      b.edges[d >> 1].tail = y;
  }
  int e = b.add_edge(edge_id, z, y);
  b.insert_after(r > 0 && len < r ? R[((after_index % r) + r) % r] : -1, dart(e, true));
  b.rot[y].push_back(dart(e, false));
  for (int d : arc) b.rot[y].push_back(d);
  std::array<int, 2> ends{g.end_dart(0), g.end_dart(1)};
  if (g.num_edges() == 0) ends = {dart(e, true), dart(e, true)};
  return b.finish(ends);
}

namespace {

// Insert a chord closing the walk p, face_next(p) into a triangle. Ends that
// would fall inside the triangle are moved across the chord.
std::optional<AnnulusMap> close_triangle(const AnnulusMap& g, int p, const std::string& id) {
  int q = g.face_next(p);
  int r = g.face_next(q);
  if (r == p) return std::nullopt;  // digon: no triangle to cut off
  AnnulusMap h = insert_chord(g, g.corner_of(r), g.corner_of(p), id);
  int c = h.num_edges() - 1;
  // The triangle is the face of p in h.
  int tri = h.face_of(p);
  int inside = h.face_of(dart(c, true)) == tri ? dart(c, true) : dart(c, false);
  std::array<int, 2> ends{h.end_dart(0), h.end_dart(1)};
  for (auto& e : ends)
    if (h.face_of(e) == tri) e = alpha(inside);
  return h.with_end_darts(ends);
}

}  // namespace

AnnulusMap generate_random_tight(int level, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int k) { return static_cast<int>(std::uniform_int_distribution<int>(0, k - 1)(rng)); };
  std::string tag;
  if (n <= 1) {
    if (level != 1) fail("Internal", "level 2 needs at least two vertices");
    tag = "M";
  } else {
    tag = pick(2) ? "K" : (level == 2 ? "L" : "M");
  }
  AnnulusMap start = base_map(tag);
  {
    // Rename to v1.. / e1.. so generated names are uniform.
    MapBuilder b = MapBuilder::from(start);
    for (size_t v = 0; v < b.names.size(); ++v) b.names[v] = "v" + std::to_string(v + 1);
    start = b.finish({start.end_dart(0), start.end_dart(1)});
  }
  AnnulusMap g = start;
  int vcount = g.num_vertices(), ecount = g.num_edges();
  int attempts = 0;
  while (g.num_vertices() < n) {
    if (++attempts > 20000) {
      g = start;  // restart; extremely unlikely
      vcount = g.num_vertices();
      ecount = g.num_edges();
      attempts = 0;
    }
    int z = pick(g.num_vertices());
    int r = g.degree(z);
    if (r == 0) continue;
    bool quad = pick(3) == 0;
    int after = pick(r), len = pick(r);  // keeps at least one dart at z
    std::string y = "v" + std::to_string(vcount + 1);
    std::string did = "e" + std::to_string(ecount + 1);
    std::string c1 = "e" + std::to_string(ecount + 2);
    std::string c2 = "e" + std::to_string(ecount + 3);
    AnnulusMap g1 = vertex_split(g, z, after, len, y, did);
    int de = g1.num_edges() - 1;
    std::optional<AnnulusMap> out;
    if (!quad) {
      int D = dart(de, pick(2) == 0);
      int p = pick(2) ? D : g1.face_prev(D);
      auto h = close_triangle(g1, p, did == c1 ? c2 : c1);
      if (h) out = h;
    } else {
      int Dy = dart(de, false);
      int p1 = pick(2) ? Dy : g1.face_prev(Dy);
      auto h1 = close_triangle(g1, p1, c1);
      if (h1) {
        int e = h1->edge_index(did);
        int Dz1 = dart(e, true);
        int p2 = pick(2) ? Dz1 : h1->face_prev(Dz1);
        auto h2 = close_triangle(*h1, p2, c2);
        if (h2) {
          MapBuilder b = MapBuilder::from(*h2);
          int de2 = b.edge(did);
          std::array<int, 2> ends{h2->end_dart(0), h2->end_dart(1)};
          for (auto& x : ends)
            if (edge_of(x) == de2) x = -2;
          b.remove_edge(de2);
          if (ends[0] != -2 && ends[1] != -2) {
            try {
              AnnulusMap q = b.finish(ends);
              // Ends must stay off the new quadrilateral.
              int c1e = q.edge_index(c1);
              bool bad = false;
              for (int x : {dart(c1e, true), dart(c1e, false)})
                if (q.face_darts()[q.face_of(x)].size() == 4 &&
                    (q.face_of(x) == q.end_faces()[0] || q.face_of(x) == q.end_faces()[1])) {
                  bool has2 = false;
                  int c2e = q.edge_index(c2);
                  for (int w : q.face_darts()[q.face_of(x)]) has2 = has2 || edge_of(w) == c2e;
                  bad = bad || has2;
                }
              if (!bad) out = q;
            } catch (const Error&) {
            }
          }
        }
      }
    }
    if (!out) continue;
    if (!check_sparse(*out, level).tight) continue;
    g = *out;
    vcount += 1;
    ecount += quad ? 3 : 2;
    attempts = 0;
  }
  return g;
}

AnnulusMap complete_to_tight(const AnnulusMap& m, int level) {
  if (!check_sparse(m, level).sparse) fail("NotTight", "input is not sparse");
  AnnulusMap g = m;
  for (;;) {
    if (check_sparse(g, level).tight) return g;
    bool added = false;
    std::string id = fresh_edge_id(g, "c");
    for (int f = 0; f < g.num_faces() && !added; ++f) {
      std::vector<Corner> cs;
      if (g.num_edges() == 0)
        cs.push_back({0, -1, -1});
      else
        for (int d : g.face_darts()[f]) cs.push_back(g.corner_of(d));
      auto ends = g.end_faces();
      for (size_t i = 0; i < cs.size() && !added; ++i)
        for (size_t j = i; j < cs.size() && !added; ++j) {
          AnnulusMap h = insert_chord(g, cs[i], cs[j], id);
          int c = h.num_edges() - 1;
          // Each end living in face f may land on either side of the chord.
          int choices = 1;
          for (int k = 0; k < 2; ++k)
            if (ends[k] == f) choices *= 2;
          for (int mask = 0; mask < choices && !added; ++mask) {
            std::array<int, 2> ed{-1, -1};
            int bit = 0;
            for (int k = 0; k < 2; ++k) {
              if (ends[k] == f) {
                ed[k] = dart(c, ((mask >> bit++) & 1) == 0);
              } else {
                ed[k] = g.end_dart(k);  // the chord is appended, old darts keep indices
              }
            }
            AnnulusMap cand = h.with_end_darts(ed);
            if (check_sparse(cand, level).sparse) {
              g = cand;
              added = true;
            }
          }
        }
    }
    if (!added) fail("CompletionStuck", "no chord keeps the map sparse, yet it is not tight");
  }
}

}  // namespace annulus
