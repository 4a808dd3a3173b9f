#include "annulus/map.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace annulus {

bool FaceWalk::degenerate() const {
  std::vector<int> vs, es;
  for (const auto& c : corners) {
    vs.push_back(c.vertex);
    if (c.out >= 0) es.push_back(edge_of(c.out));
  }
  std::sort(vs.begin(), vs.end());
  std::sort(es.begin(), es.end());
  return std::adjacent_find(vs.begin(), vs.end()) != vs.end() ||
         std::adjacent_find(es.begin(), es.end()) != es.end();
}

int EdgeSubset::size() const {
  return static_cast<int>(std::count(member.begin(), member.end(), 1));
}

std::vector<int> EdgeSubset::edges() const {
  std::vector<int> out;
  for (int e = 0; e < static_cast<int>(member.size()); ++e)
    if (member[e]) out.push_back(e);
  return out;
}

AnnulusMap AnnulusMap::build(std::vector<std::string> vertices, std::vector<Edge> edges,
                             std::vector<std::vector<int>> rotation,
                             std::array<int, 2> end_darts) {
  AnnulusMap m;
  m.names_ = std::move(vertices);
  m.edges_ = std::move(edges);
  m.rot_ = std::move(rotation);
  const int V = m.num_vertices(), E = m.num_edges();
  if (V == 0) fail("NotConnected", "map has no vertices");
  if (static_cast<int>(m.rot_.size()) != V) fail("BadRotation", "rotation count differs from vertex count");
  for (const auto& e : m.edges_)
    if (e.tail < 0 || e.tail >= V || e.head < 0 || e.head >= V)
      fail("BadRotation", "edge " + e.id + " has an unknown endpoint");
  m.pos_.assign(2 * E, -1);
  for (int v = 0; v < V; ++v) {
    for (int i = 0; i < static_cast<int>(m.rot_[v].size()); ++i) {
      int d = m.rot_[v][i];
      if (d < 0 || d >= 2 * E) fail("BadRotation", "unknown dart at vertex " + m.names_[v]);
      if (m.pos_[d] != -1) fail("BadRotation", "dart listed twice: " + dart_string(m, d));
      if (m.src(d) != v)
        fail("BadRotation", "dart " + dart_string(m, d) + " listed at wrong vertex " + m.names_[v]);
      m.pos_[d] = i;
    }
  }
  for (int d = 0; d < 2 * E; ++d)
    if (m.pos_[d] == -1) fail("BadRotation", "dart missing from rotation: " + dart_string(m, d));
  if (!m.connected()) fail("NotConnected", "underlying graph is disconnected");
  m.trace();
  if (V - E + m.num_faces() != 2) fail("NotGenusZero", "V - E + F != 2");
  for (int i = 0; i < 2; ++i) {
    int d = end_darts[i];
    if (E == 0) {
      if (d != -1) fail("UnknownEndFace", "edgeless map has a single face");
      m.ends_[i] = 0;
    } else {
      if (d < 0 || d >= 2 * E) fail("UnknownEndFace", "end witness is not a dart");
      m.ends_[i] = m.dart_face_[d];
    }
  }
  m.derive_gains();
  return m;
}

AnnulusMap AnnulusMap::build_with_corners(std::vector<std::string> vertices,
                                          std::vector<Edge> edges,
                                          std::vector<std::vector<int>> rotation,
                                          std::array<Corner, 2> ends) {
  // Validate the rotation first, then check each witness against the traced faces.
  AnnulusMap probe = build(vertices, edges, rotation,
                           edges.empty() ? std::array<int, 2>{-1, -1} : std::array<int, 2>{0, 0});
  std::array<int, 2> darts{-1, -1};
  for (int i = 0; i < 2; ++i) {
    const Corner& c = ends[i];
    if (probe.num_edges() == 0) {
      if (c.in != -1 || c.out != -1 || c.vertex != 0)
        fail("UnknownEndFace", "edgeless map expects an empty corner");
      continue;
    }
    if (c.out < 0 || c.in < 0 || c.out >= probe.num_darts() || c.in >= probe.num_darts() ||
        probe.face_next(c.in) != c.out || probe.src(c.out) != c.vertex)
      fail("UnknownEndFace", "witness corner is not a corner of any face");
    darts[i] = c.out;
  }
  return probe.with_end_darts(darts);
}

int AnnulusMap::vertex_index(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

int AnnulusMap::edge_index(const std::string& id) const {
  for (int e = 0; e < num_edges(); ++e)
    if (edges_[e].id == id) return e;
  return -1;
}

int AnnulusMap::ccw_next(int d) const {
  const auto& r = rot_[src(d)];
  return r[(pos_[d] + 1) % r.size()];
}

int AnnulusMap::ccw_prev(int d) const {
  const auto& r = rot_[src(d)];
  return r[(pos_[d] + r.size() - 1) % r.size()];
}

void AnnulusMap::trace() {
  const int D = num_darts();
  dart_face_.assign(D, -1);
  face_darts_.clear();
  if (D == 0) {
    face_darts_.push_back({});
    return;
  }
  for (int d0 = 0; d0 < D; ++d0) {
    if (dart_face_[d0] != -1) continue;
    int f = num_faces();
    face_darts_.push_back({});
    int d = d0;
    do {
      dart_face_[d] = f;
      face_darts_[f].push_back(d);
      d = face_next(d);
    } while (d != d0);
  }
}

bool AnnulusMap::connected() const {
  const int V = num_vertices();
  if (V == 0) return false;
  std::vector<int> parent(V);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int comps = V;
  for (const auto& e : edges_) {
    int a = find(e.tail), b = find(e.head);
    if (a != b) {
      parent[a] = b;
      --comps;
    }
  }
  return comps == 1;
}

void AnnulusMap::derive_gains() {
  const int E = num_edges();
  std::vector<int> raw(E, 0);
  if (E > 0 && ends_[0] != ends_[1]) {
    // Dual BFS from end face 0; each crossing of e from its right face to its
    // left face counts +1.
    const int F = num_faces();
    std::vector<int> via(F, -1), from(F, -1);
    std::vector<char> seen(F, 0);
    std::deque<int> q{ends_[0]};
    seen[ends_[0]] = 1;
    while (!q.empty()) {
      int f = q.front();
      q.pop_front();
      for (int d : face_darts_[f]) {
        int g = dart_face_[alpha(d)];
        if (seen[g]) continue;
        seen[g] = 1;
        via[g] = d;  // crossed from the left side of d into the left side of alpha(d)
        from[g] = f;
        q.push_back(g);
      }
    }
    for (int g = ends_[1]; g != ends_[0]; g = from[g]) {
      int d = via[g];
      // Leaving face(d) for face(alpha d). For d = e+ that is left-to-right: -1.
      raw[edge_of(d)] += (d & 1) ? 1 : -1;
    }
  }
  // Normalize by a BFS tree from vertex 0.
  const int V = num_vertices();
  std::vector<int> pot(V, 0);
  std::vector<char> seen(V, 0);
  std::deque<int> q{0};
  seen[0] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int d : rot_[v]) {
      int w = dst(d);
      if (seen[w]) continue;
      seen[w] = 1;
      int g = (d & 1) ? -raw[edge_of(d)] : raw[edge_of(d)];
      pot[w] = pot[v] + g;
      q.push_back(w);
    }
  }
  gains_.assign(E, 0);
  for (int e = 0; e < E; ++e) gains_[e] = pot[edges_[e].tail] + raw[e] - pot[edges_[e].head];
}

FaceWalk AnnulusMap::face_walk(int f) const {
  FaceWalk w;
  if (num_edges() == 0) {
    w.corners.push_back({0, -1, -1});
    return w;
  }
  for (int d : face_darts_[f]) w.corners.push_back(corner_of(d));
  return w;
}

std::vector<FaceWalk> AnnulusMap::faces() const {
  std::vector<FaceWalk> out;
  for (int f = 0; f < num_faces(); ++f) out.push_back(face_walk(f));
  return out;
}

int AnnulusMap::end_dart(int i) const {
  if (num_edges() == 0) return -1;
  return face_darts_[ends_[i]].front();
}

std::array<Corner, 2> AnnulusMap::end_corners() const {
  std::array<Corner, 2> out;
  for (int i = 0; i < 2; ++i) {
    int d = end_dart(i);
    out[i] = d < 0 ? Corner{0, -1, -1} : corner_of(d);
  }
  return out;
}

EdgeSubset AnnulusMap::full_subset() const { return {std::vector<char>(num_edges(), 1), {}}; }
EdgeSubset AnnulusMap::empty_subset() const { return {std::vector<char>(num_edges(), 0), {}}; }

std::vector<int> AnnulusMap::subset_vertices(const EdgeSubset& s) const {
  std::vector<char> in(num_vertices(), 0);
  for (int e = 0; e < num_edges(); ++e)
    if (s.member[e]) in[edges_[e].tail] = in[edges_[e].head] = 1;
  for (int v : s.extra_vertices) in[v] = 1;
  std::vector<int> out;
  for (int v = 0; v < num_vertices(); ++v)
    if (in[v]) out.push_back(v);
  return out;
}

int AnnulusMap::f_count(const EdgeSubset& s) const {
  return 2 * static_cast<int>(subset_vertices(s).size()) - s.size();
}

bool AnnulusMap::is_balanced(const EdgeSubset& s) const {
  if (ends_[0] == ends_[1]) return true;
  std::vector<char> seen(num_faces(), 0);
  std::deque<int> q{ends_[0]};
  seen[ends_[0]] = 1;
  while (!q.empty()) {
    int f = q.front();
    q.pop_front();
    if (f == ends_[1]) return true;
    for (int d : face_darts_[f]) {
      if (s.member[edge_of(d)]) continue;
      int g = dart_face_[alpha(d)];
      if (!seen[g]) {
        seen[g] = 1;
        q.push_back(g);
      }
    }
  }
  return false;
}

bool AnnulusMap::is_balanced_mask(std::uint64_t members) const {
  if (ends_[0] == ends_[1]) return true;
  std::uint64_t seen = 1ull << ends_[0], frontier = seen;
  const std::uint64_t target = 1ull << ends_[1];
  // Faces never exceed 64 when edges do not (F = E + 2 - V <= E + 1).
  while (frontier) {
    if (frontier & target) return true;
    std::uint64_t next = 0;
    for (std::uint64_t fr = frontier; fr; fr &= fr - 1) {
      int f = __builtin_ctzll(fr);
      for (int d : face_darts_[f]) {
        if (members >> edge_of(d) & 1) continue;
        next |= 1ull << dart_face_[alpha(d)];
      }
    }
    frontier = next & ~seen;
    seen |= next;
  }
  return false;
}

bool AnnulusMap::is_balanced_by_gains(const EdgeSubset& s) const {
  const int V = num_vertices();
  std::vector<int> parent(V), pot(V, 0);  // pot[x] = gain from x to parent[x]
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    int acc = 0, r = x;
    while (parent[r] != r) {
      acc += pot[r];
      r = parent[r];
    }
    // compress
    int cur = x, sum = acc;
    while (parent[cur] != cur) {
      int nxt = parent[cur], w = pot[cur];
      parent[cur] = r;
      pot[cur] = sum;
      sum -= w;
      cur = nxt;
    }
    return std::pair<int, int>{r, acc};
  };
  for (int e = 0; e < num_edges(); ++e) {
    if (!s.member[e]) continue;
    // potential(head) - potential(tail) must equal gain, where pot(x) is gain x -> root.
    auto [rt, gt] = find(edges_[e].tail);
    auto [rh, gh] = find(edges_[e].head);
    if (rt == rh) {
      if (gt - gh != gains_[e]) return false;
    } else {
      parent[rt] = rh;
      pot[rt] = gh + gains_[e] - gt;
    }
  }
  return true;
}

int AnnulusMap::walk_gain(const std::vector<int>& darts) const {
  int g = 0;
  for (int d : darts) g += dart_gain(d);
  return g;
}

AnnulusMap AnnulusMap::mirrored() const {
  auto rot = rot_;
  for (auto& r : rot) std::reverse(r.begin(), r.end());
  // The region to the left of d in the mirror is the region to the right of d here.
  std::array<int, 2> ends{-1, -1};
  for (int i = 0; i < 2; ++i) {
    int d = end_dart(i);
    ends[i] = d < 0 ? -1 : alpha(d);
  }
  return build(names_, edges_, std::move(rot), ends);
}

AnnulusMap AnnulusMap::with_end_darts(std::array<int, 2> end_darts) const {
  AnnulusMap m = *this;
  for (int i = 0; i < 2; ++i) {
    if (num_edges() == 0) {
      if (end_darts[i] != -1) fail("UnknownEndFace", "edgeless map has a single face");
      m.ends_[i] = 0;
    } else {
      if (end_darts[i] < 0 || end_darts[i] >= num_darts()) fail("UnknownEndFace", "bad end dart");
      m.ends_[i] = dart_face_[end_darts[i]];
    }
  }
  m.derive_gains();
  return m;
}

static bool same_cycle(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  auto it = std::find(b.begin(), b.end(), a[0]);
  if (it == b.end()) return false;
  size_t off = it - b.begin();
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[(off + i) % b.size()]) return false;
  return true;
}

bool AnnulusMap::same_as(const AnnulusMap& o) const {
  if (names_ != o.names_ || edges_.size() != o.edges_.size()) return false;
  for (size_t e = 0; e < edges_.size(); ++e)
    if (edges_[e].id != o.edges_[e].id || edges_[e].tail != o.edges_[e].tail ||
        edges_[e].head != o.edges_[e].head)
      return false;
  for (size_t v = 0; v < rot_.size(); ++v)
    if (!same_cycle(rot_[v], o.rot_[v])) return false;
  auto a = ends_, b = o.ends_;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

namespace {

// Try to extend d0 -> e0 to a rotation-preserving dart bijection a -> b.
bool extend(const AnnulusMap& a, const AnnulusMap& b, int d0, int e0, std::vector<int>& phi) {
  const int D = a.num_darts();
  phi.assign(D, -1);
  std::vector<int> inv(D, -1);
  std::vector<int> stack{d0};
  phi[d0] = e0;
  inv[e0] = d0;
  auto assign = [&](int x, int y) {
    if (phi[x] == -1 && inv[y] == -1) {
      phi[x] = y;
      inv[y] = x;
      stack.push_back(x);
      return true;
    }
    return phi[x] == y && inv[y] == x;
  };
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    int y = phi[x];
    if (!assign(alpha(x), alpha(y))) return false;
    if (!assign(a.ccw_next(x), b.ccw_next(y))) return false;
  }
  for (int x = 0; x < D; ++x)
    if (phi[x] == -1) return false;
  // Edge orientation may flip; vertices must correspond consistently, which
  // follows from sigma-orbit preservation. Faces follow from alpha and sigma.
  std::array<int, 2> ea{a.face_of(a.end_dart(0)), a.face_of(a.end_dart(1))};
  std::array<int, 2> eb{b.face_of(b.end_dart(0)), b.face_of(b.end_dart(1))};
  std::array<int, 2> mapped{b.face_of(phi[a.end_dart(0)]), b.face_of(phi[a.end_dart(1)])};
  std::sort(mapped.begin(), mapped.end());
  std::sort(eb.begin(), eb.end());
  (void)ea;
  return mapped == eb;
}

bool oriented_iso(const AnnulusMap& a, const AnnulusMap& b, std::vector<int>& phi) {
  phi.clear();
  if (a.num_darts() == 0) return true;
  // Anchor on a dart of minimum-degree vertex to prune.
  int d0 = 0;
  for (int d = 0; d < a.num_darts(); ++d)
    if (a.degree(a.src(d)) < a.degree(a.src(d0))) d0 = d;
  for (int e = 0; e < b.num_darts(); ++e) {
    if (b.degree(b.src(e)) != a.degree(a.src(d0))) continue;
    if (b.face_darts()[b.face_of(e)].size() != a.face_darts()[a.face_of(d0)].size()) continue;
    if (extend(a, b, d0, e, phi)) return true;
  }
  return false;
}

}  // namespace

bool isomorphic(const AnnulusMap& a, const AnnulusMap& b) {
  if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() ||
      a.num_faces() != b.num_faces())
    return false;
  if (a.balanced() != b.balanced()) return false;
  std::vector<int> da, db;
  for (int v = 0; v < a.num_vertices(); ++v) da.push_back(a.degree(v));
  for (int v = 0; v < b.num_vertices(); ++v) db.push_back(b.degree(v));
  std::sort(da.begin(), da.end());
  std::sort(db.begin(), db.end());
  if (da != db) return false;
  std::vector<int> phi;
  return oriented_iso(a, b, phi) || oriented_iso(a, b.mirrored(), phi);
}

std::optional<std::vector<int>> oriented_isomorphism(const AnnulusMap& a, const AnnulusMap& b) {
  if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() ||
      a.num_faces() != b.num_faces() || a.balanced() != b.balanced())
    return std::nullopt;
  std::vector<int> phi;
  if (oriented_iso(a, b, phi)) return phi;
  return std::nullopt;
}

bool euler_check(const AnnulusMap& m) {
  long lhs = 0, extra = 0;
  for (const auto& f : m.face_darts()) {
    long i = static_cast<long>(f.size());
    if (i >= 1 && i <= 3) lhs += 4 - i;
    if (i >= 5) extra += i - 4;
  }
  return lhs == 8 - 2L * m.f_count() + extra;
}

std::string dart_string(const AnnulusMap& m, int d) {
  return m.edge(edge_of(d)).id + ((d & 1) ? "-" : "+");
}

int parse_dart(const AnnulusMap& m, const std::string& s) {
  static const std::string minus = "−";
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
  int e = m.edge_index(id);
  return e < 0 ? -1 : dart(e, plus);
}

}  // namespace annulus
