#include "annulus/pseudo.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "annulus/error.hpp"
#include "geometry.hpp"

namespace annulus {

FlatSurface FlatSurface::cone(int k) {
  if (k < 2) fail("InvalidInput", "a cone needs order at least 2, got " + std::to_string(k));
  return {Kind::Cone, k};
}

FlatSurface FlatSurface::parse(const std::string& s) {
  if (s == "cylinder") return cylinder();
  if (s == "plane") return plane();
  if (s.rfind("cone:", 0) == 0) {
    int k = 0;
    size_t used = 0;
    try {
      k = std::stoi(s.substr(5), &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used > 0 && used == s.size() - 5) return cone(k);
  }
  fail("InvalidInput", "unknown surface '" + s + "' (expected cylinder, cone:k or plane)");
}

FlatSurface FlatSurface::of(const SymmetryGroup& g) {
  if (g.kind == SymmetryGroup::Kind::Translation) return cylinder();
  if (g.order == 1) return plane();
  return cone(g.order);
}

SymmetryGroup FlatSurface::group() const {
  switch (kind) {
    case Kind::Plane: return SymmetryGroup::rotation(1);
    case Kind::Cylinder: return SymmetryGroup::translation();
    case Kind::Cone: break;
  }
  return SymmetryGroup::rotation(order);
}

int FlatSurface::level() const {
  switch (kind) {
    case Kind::Plane: return 0;
    case Kind::Cylinder: return 2;
    case Kind::Cone: break;
  }
  return order == 2 ? 2 : 1;
}

std::string FlatSurface::describe() const {
  switch (kind) {
    case Kind::Plane: return "plane";
    case Kind::Cylinder: return "cylinder";
    case Kind::Cone: break;
  }
  return "cone:" + std::to_string(order);
}

namespace {

using namespace geo;

template <class S>
Pt<S> neg(const Pt<S>& a) {
  return {S(-a.x), S(-a.y)};
}

// Sign of the sine of the angle from a to b.
template <class S>
int turn(const Pt<S>& a, const Pt<S>& b) {
  return sgn_rel(cross(a, b), S(dot(a, a) * dot(b, b)));
}

// Where b falls in the ccw sweep that starts at a: 0 for angles in (0, π],
// 1 for (π, 2π), 2 when b points along a.
template <class S>
int sweep_half(const Pt<S>& a, const Pt<S>& b) {
  const int t = turn(a, b);
  if (t != 0) return t > 0 ? 0 : 1;
  return sgn(dot(a, b)) < 0 ? 0 : 2;
}

template <class S>
bool sweep_less(const Pt<S>& a, const Pt<S>& b, const Pt<S>& c) {
  const int hb = sweep_half(a, b), hc = sweep_half(a, c);
  if (hb != hc) return hb < hc;
  return hb != 2 && turn(b, c) > 0;
}

// x strictly inside the ccw arc from a to b; b along a means the full turn.
template <class S>
bool in_arc(const Pt<S>& a, const Pt<S>& b, const Pt<S>& x) {
  return sweep_half(a, x) != 2 && sweep_less(a, x, b);
}

template <class S>
Pt<S> unitish(const Pt<S>& a) {
  const double len = std::sqrt(to_double(dot(a, a)));
  return scale(S(pow2_below(1 / len)), a);
}

// A direction inside the ccw arc from a to b, at rough position t in (0, 1].
template <class S>
Pt<S> arc_point(Pt<S> a, Pt<S> b, const Rational& t, bool full) {
  a = unitish(a);
  b = unitish(b);
  Pt<S> m;
  if (full) {
    m = neg(a);
    b = a;
  } else {
    const int tr = turn(a, b);
    if (tr > 0) return scale(S(Rational(1 - t)), a) + scale(S(t), b);
    m = tr < 0 ? unitish(neg(a + b)) : rot90(a);
  }
  const Rational half(1, 2);
  if (t <= half) return arc_point(a, m, Rational(2 * t), false);
  return arc_point(m, b, Rational(2 * t - 1), false);
}

struct Box {
  double x0, y0, x1, y1;
};

template <class S>
Box box_of(const Pt<S>& a, const Pt<S>& b) {
  const double ax = to_double(a.x), ay = to_double(a.y), bx = to_double(b.x), by = to_double(b.y);
  const double pad = 1e-7 * (1 + std::max({std::fabs(ax), std::fabs(ay), std::fabs(bx), std::fabs(by)}));
  return {std::min(ax, bx) - pad, std::min(ay, by) - pad, std::max(ax, bx) + pad,
          std::max(ay, by) + pad};
}

bool boxes_meet(const Box& p, const Box& q) {
  return p.x0 <= q.x1 && q.x0 <= p.x1 && p.y0 <= q.y1 && q.y0 <= p.y1;
}

// Closed segments meet somewhere other than a common endpoint.
template <class S>
bool clash(const Pt<S>& a1, const Pt<S>& a2, const Pt<S>& b1, const Pt<S>& b2) {
  const int o1 = orient(a1, a2, b1), o2 = orient(a1, a2, b2);
  if (o1 == 0 && o2 == 0) {
    const Pt<S> d = a2 - a1;
    const S l2 = dot(d, d);
    S t1 = dot(b1 - a1, d), t2 = dot(b2 - a1, d);
    if (sgn(S(t1 - t2)) > 0) std::swap(t1, t2);
    const S lo = sgn(t1) > 0 ? t1 : S(0);
    const S hi = sgn(S(t2 - l2)) < 0 ? t2 : l2;
    return sgn_rel(S(hi - lo), l2) > 0;
  }
  const int o3 = orient(b1, b2, a1), o4 = orient(b1, b2, a2);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  return strictly_inside(b1, a1, a2) || strictly_inside(b2, a1, a2) ||
         strictly_inside(a1, b1, b2) || strictly_inside(a2, b1, b2);
}

template <class S>
struct View {
  const PptT<S>& r;
  Action<S> act;
  explicit View(const PptT<S>& rr) : r(rr), act(rr.group) {}

  const AnnulusMap& g() const { return r.graph; }
  int dpow(int d) const {
    const int p = r.power[edge_of(d)];
    return (d & 1) ? -p : p;
  }
  Pt<S> far(int d) const { return act.apply(r.pos[g().dst(d)], dpow(d)); }
  Pt<S> dir(int d) const { return far(d) - r.pos[g().src(d)]; }
  std::array<Pt<S>, 2> seg(int e, int i) const {
    const Edge& ed = g().edge(e);
    return {act.apply(r.pos[ed.tail], i), act.apply(r.pos[ed.head], i + r.power[e])};
  }
  double proj(const Pt<S>& p) const {
    return to_double(dot(p, act.tau)) / to_double(dot(act.tau, act.tau));
  }
  // Group powers worth testing between two point sets spanning [lo, hi] along τ.
  std::vector<int> shifts(double alo, double ahi, double blo, double bhi) const {
    std::vector<int> out;
    if (act.rotation) {
      for (int i = 0; i < act.k; ++i) out.push_back(i);
      return out;
    }
    const int from = static_cast<int>(std::floor(alo - bhi)) - 1;
    const int to = static_cast<int>(std::ceil(ahi - blo)) + 1;
    for (int i = from; i <= to; ++i) out.push_back(i);
    return out;
  }
  bool power_zero(int p) const { return act.rotation ? act.norm(p) == 0 : p == 0; }
};

template <class S>
std::string embedding_problem(const PptT<S>& r) {
  View<S> w(r);
  const AnnulusMap& g = r.graph;
  const int n = g.num_vertices(), m = g.num_edges();
  const bool cone = w.act.rotation && w.act.k > 1;
  for (int v = 0; v < n; ++v) {
    if (cone && same(r.pos[v], w.act.center)) return "vertex " + g.vertex_name(v) + " sits on the cone point";
    for (int u = v; u < n; ++u) {
      const double pu = w.act.rotation ? 0 : w.proj(r.pos[u]);
      const double pv = w.act.rotation ? 0 : w.proj(r.pos[v]);
      for (int i : w.shifts(pu, pu, pv, pv)) {
        if (u == v && w.power_zero(i)) continue;
        if (same(w.act.apply(r.pos[v], i), r.pos[u]))
          return "vertices " + g.vertex_name(u) + " and " + g.vertex_name(v) + " coincide";
      }
    }
  }
  std::vector<std::array<Pt<S>, 2>> base(m);
  std::vector<std::pair<double, double>> span(m);
  for (int e = 0; e < m; ++e) {
    base[e] = w.seg(e, 0);
    if (same(base[e][0], base[e][1])) return "edge " + g.edge(e).id + " has zero length";
    if (cone && on_closed(w.act.center, base[e][0], base[e][1]))
      return "edge " + g.edge(e).id + " passes through the cone point";
    if (!w.act.rotation) {
      const double a = w.proj(base[e][0]), b = w.proj(base[e][1]);
      span[e] = {std::min(a, b), std::max(a, b)};
    }
  }
  for (int e = 0; e < m; ++e) {
    const Box be = box_of(base[e][0], base[e][1]);
    for (int f = e; f < m; ++f) {
      for (int i : w.shifts(span[e].first, span[e].second, span[f].first, span[f].second)) {
        if (e == f && w.power_zero(i)) continue;
        const auto B = w.seg(f, i);
        if (!boxes_meet(be, box_of(B[0], B[1]))) continue;
        if (clash(base[e][0], base[e][1], B[0], B[1]))
          return "edges " + g.edge(e).id + " and " + g.edge(f).id + " (copy " + std::to_string(i) +
                 ") cross";
      }
    }
  }
  return {};
}

// The dart at v whose ccw gap contains direction x.
template <class S>
int gap_dart(const View<S>& w, const std::vector<int>& rot, const Pt<S>& x) {
  if (rot.size() == 1) return rot[0];
  for (size_t i = 0; i < rot.size(); ++i) {
    const int a = rot[i], b = rot[(i + 1) % rot.size()];
    if (in_arc(w.dir(a), w.dir(b), x)) return a;
  }
  fail("Internal", "direction falls on an edge");
}

// First edge copy hit by a ray from the cone point, as the dart whose left
// face contains the cone point.
template <class S>
std::optional<int> cone_dart(const View<S>& w) {
  const AnnulusMap& g = w.g();
  const Pt<S> c = w.act.center;
  static const int dirs[][2] = {{1, 0}, {3, 1}, {1, 3}, {-2, 5}, {5, -3}, {-7, -2}, {2, 7}, {-3, -8}};
  for (const auto& uv : dirs) {
    const Pt<S> u{num<S>(uv[0]), num<S>(uv[1])};
    const Pt<S> cu = c + u;
    bool blocked = false;
    for (int v = 0; v < g.num_vertices() && !blocked; ++v)
      for (int i = 0; i < w.act.k && !blocked; ++i) {
        const Pt<S> p = w.act.apply(w.r.pos[v], i);
        blocked = orient(c, cu, p) == 0 && sgn(dot(p - c, u)) > 0;
      }
    if (blocked) continue;
    std::optional<int> best;
    S bt;
    for (int e = 0; e < g.num_edges(); ++e)
      for (int i = 0; i < w.act.k; ++i) {
        const auto A = w.seg(e, i);
        if (orient(c, cu, A[0]) * orient(c, cu, A[1]) >= 0) continue;
        const Pt<S> d = A[1] - A[0];
        const S t = S(cross(A[0] - c, d) / cross(u, d));
        if (sgn(t) <= 0) continue;
        if (!best || sgn(S(t - bt)) < 0) {
          bt = t;
          best = dart(e, orient(A[0], A[1], c) > 0);
        }
      }
    return best;
  }
  fail("Internal", "no clear ray from the cone point");
}

// Quotient map of the drawing. End 0 is the low side of the cylinder or the
// unbounded side of a cone; end 1 the high side or the cone point.
template <class S>
AnnulusMap extract_map(const PptT<S>& r) {
  View<S> w(r);
  const AnnulusMap& g = r.graph;
  const int n = g.num_vertices();
  std::vector<std::vector<int>> rot(n);
  for (int v = 0; v < n; ++v) {
    rot[v] = g.rotation()[v];
    if (rot[v].size() < 2) continue;
    const Pt<S> a = w.dir(rot[v][0]);
    std::sort(rot[v].begin(), rot[v].end(),
              [&](int x, int y) { return sweep_less(a, w.dir(x), w.dir(y)); });
  }
  std::array<int, 2> ends{-1, -1};
  if (g.num_edges() > 0) {
    if (!w.act.rotation) {
      const Pt<S> tau = w.act.tau, nrm = rot90(tau);
      auto key_less = [&](int a, int b) {
        const int s1 = sgn(S(dot(nrm, r.pos[a]) - dot(nrm, r.pos[b])));
        if (s1 != 0) return s1 < 0;
        return sgn(S(dot(tau, r.pos[a]) - dot(tau, r.pos[b]))) < 0;
      };
      int lo = 0, hi = 0;
      for (int v = 1; v < n; ++v) {
        if (key_less(v, lo)) lo = v;
        if (key_less(hi, v)) hi = v;
      }
      ends = {gap_dart(w, rot[lo], neg(nrm)), gap_dart(w, rot[hi], nrm)};
    } else {
      const Pt<S> c = w.act.center;
      int far = 0;
      for (int v = 1; v < n; ++v)
        if (sgn(S(dot(r.pos[v] - c, r.pos[v] - c) - dot(r.pos[far] - c, r.pos[far] - c))) > 0) far = v;
      const int outer = gap_dart(w, rot[far], r.pos[far] - c);
      std::optional<int> inner;
      if (w.act.k > 1) inner = cone_dart(w);
      ends = {outer, inner.value_or(outer)};
    }
  }
  std::vector<std::string> names = g.vertex_names();
  return AnnulusMap::build(names, g.edges(), rot, ends);
}

bool cyclic_equal(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  auto it = std::find(b.begin(), b.end(), a[0]);
  if (it == b.end()) return false;
  const size_t off = it - b.begin();
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[(off + i) % b.size()]) return false;
  return true;
}

// Same rotations and the same end faces; both maps share edge numbering.
bool same_embedding(const AnnulusMap& drawn, const AnnulusMap& g) {
  for (int v = 0; v < g.num_vertices(); ++v)
    if (!cyclic_equal(drawn.rotation()[v], g.rotation()[v])) return false;
  if (g.num_edges() == 0) return true;
  std::array<int, 2> a{g.face_of(drawn.end_dart(0)), g.face_of(drawn.end_dart(1))};
  std::array<int, 2> b = g.end_faces();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

struct Verdict {
  std::string code, msg;
  AngleReport report;
};

template <class S>
Verdict check_impl(const PptT<S>& r) {
  Verdict out;
  auto bad = [&](const std::string& code, const std::string& msg) {
    out.code = code;
    out.msg = msg;
    return out;
  };
  if (auto why = embedding_problem(r); !why.empty()) return bad("CrossingEdges", why);
  AnnulusMap drawn;
  try {
    drawn = extract_map(r);
  } catch (const Error& e) {
    return bad("ValidationFailed", std::string("drawing has no consistent quotient map: ") + e.what());
  }
  const AnnulusMap& g = r.graph;
  if (!same_embedding(drawn, g)) return bad("ValidationFailed", "drawing does not realize the stored map");
  View<S> w(r);
  const auto ends = g.end_faces();
  for (int f = 0; f < g.num_faces(); ++f) {
    int sum = 0;
    for (int d : g.face_darts()[f]) sum += w.dpow(d);
    const bool end = f == ends[0] || f == ends[1];
    if ((!end || g.balanced()) && !w.power_zero(sum))
      return bad("ValidationFailed", "face " + std::to_string(f) + " does not close up in the plane");
  }

  AngleReport& rep = out.report;
  rep.n = g.num_vertices();
  rep.m = g.num_edges();
  rep.f = g.num_faces();
  rep.pointed.assign(rep.n, 1);
  for (int v = 0; v < rep.n; ++v) {
    const auto& R = g.rotation()[v];
    if (R.size() < 2) continue;
    bool p = false;
    for (size_t i = 0; i < R.size() && !p; ++i) p = turn(w.dir(R[i]), w.dir(R[(i + 1) % R.size()])) < 0;
    rep.pointed[v] = p;
  }
  for (int v = 0; v < rep.n; ++v)
    if (!rep.pointed[v]) return bad("NotPointed", "vertex " + g.vertex_name(v) + " is not pointed");

  const FlatSurface surf = FlatSurface::of(r.group);
  const int cone_face = g.num_edges() > 0 ? g.face_of(drawn.end_dart(1)) : -1;
  rep.face_convex.assign(rep.f, 0);
  rep.face_kind.assign(rep.f, "cellular");
  for (int f = 0; f < rep.f; ++f) {
    int cnt = 0;
    for (int d : g.face_darts()[f])
      if (g.degree(g.src(d)) > 1 && turn(w.dir(d), w.dir(g.ccw_next(d))) > 0) ++cnt;
    rep.face_convex[f] = cnt;
    int want = 3;
    if (f == ends[0] || f == ends[1]) {
      if (g.balanced()) {
        rep.face_kind[f] = "ends";
        want = 0;
      } else if (surf.kind == FlatSurface::Kind::Cylinder) {
        rep.face_kind[f] = "end";
        want = 1;
      } else if (f == cone_face) {
        rep.face_kind[f] = "cone";
        want = surf.order == 2 ? 2 : 1;
      } else {
        rep.face_kind[f] = "outer";
        want = 0;
      }
    }
    rep.c += cnt;
    if (cnt != want)
      return bad("BadFaceCount", "face " + std::to_string(f) + " (" + rep.face_kind[f] + ") has " +
                                     std::to_string(cnt) + " convex corners, expected " +
                                     std::to_string(want));
  }
  const int a = g.balanced() ? 3 : (surf.level() == 2 ? 2 : 1);
  if (rep.c != 2 * rep.m - rep.n || rep.c != 3 * (rep.f - 2) + a || rep.m != 2 * rep.n - a)
    return bad("BadFaceCount", "count identities fail: c=" + std::to_string(rep.c) +
                                   " n=" + std::to_string(rep.n) + " m=" + std::to_string(rep.m) +
                                   " f=" + std::to_string(rep.f));
  return out;
}

// ---------------------------------------------------------------------------
// Bases

template <class S>
PptT<S> base_ppt(const std::string& tag, const SymmetryGroup& grp) {
  Action<S> act(grp);
  PptT<S> r;
  r.group = grp;
  r.graph = base_map(tag);
  auto at = [&](long sn, long sd, long hn, long hd) -> Pt<S> {
    const S s = num<S>(sn, sd), h = num<S>(hn, hd);
    if (!act.rotation) return scale(s, act.tau) + scale(h, rot90(act.tau));
    return act.center + Pt<S>{s, h};
  };
  if (tag == "K") {
    r.pos = act.rotation ? std::vector<Pt<S>>{at(3, 1, 0, 1), at(4, 1, 1, 10)}
                         : std::vector<Pt<S>>{at(1, 5, 1, 5), at(2, 5, 1, 2)};
    r.power = {0};
  } else if (tag == "L") {
    // Cylinder: a zigzag across the strip. Half turn: a parallelogram around the cone point.
    r.pos = act.rotation ? std::vector<Pt<S>>{at(-1, 2, -1, 1), at(3, 5, -7, 10)}
                         : std::vector<Pt<S>>{at(3, 10, 1, 10), at(7, 10, -1, 10)};
    r.power = {0, 1};
  } else {
    r.pos = {at(1, 1, 0, 1)};  // the loop closes into a regular k-gon
    r.power = {1};
  }
  return r;
}

void check_surface(const std::string& base, const SymmetryGroup& g) {
  if (base != "K" && base != "L" && base != "M") fail("IllegalStep", "unknown base tag " + base);
  if (base == "K") return;
  const FlatSurface s = FlatSurface::of(g);
  const int need = base == "L" ? 2 : 1;
  if (s.level() != need)
    fail("SurfaceLevelMismatch", "base " + base + " needs " +
                                     (need == 2 ? std::string("a cylinder or the cone of angle π")
                                                : std::string("a cone of angle 2π/k with k >= 3")) +
                                     ", got " + s.describe());
}

template <class F>
PptRealization dispatch(const SymmetryGroup& g, F&& f) {
  const std::string ns = g.number_system();
  if (ns == "rational") return PptRealization(f.template operator()<Rational>());
  if (ns == "sqrt3") return PptRealization(f.template operator()<QSqrt3>());
  return PptRealization(f.template operator()<Approx>());
}

template <class S>
PptT<S> relabel(const PptT<S>& r, const AnnulusMap& target) {
  auto phi = oriented_isomorphism(r.graph, target);
  if (!phi) fail("IllegalStep", "base graph does not match the base configuration");
  PptT<S> out;
  out.group = r.group;
  out.graph = target;
  out.pos.resize(target.num_vertices());
  out.power.assign(target.num_edges(), 0);
  for (int e = 0; e < r.graph.num_edges(); ++e) {
    const int d = (*phi)[dart(e, true)];
    out.power[edge_of(d)] = (d & 1) ? -r.power[e] : r.power[e];
    out.pos[target.src(d)] = r.pos[r.graph.edge(e).tail];
    out.pos[target.dst(d)] = r.pos[r.graph.edge(e).head];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Splits

template <class S>
class Placer {
 public:
  Placer(const PptT<S>& old, const SplitRecord& rec) : old_(old), rec_(rec), w_(old) {
    ex_ = apply_split(old.graph, rec);
    v_ = old.graph.vertex_index(rec.vertex);
    for (const auto& s : rec.moved) moved_.push_back(parse_dart(old.graph, s));
    sign_ = gain_sign();
    double len = 1e300;
    for (int d : old.graph.rotation()[v_]) len = std::min(len, std::sqrt(to_double(dot(w_.dir(d), w_.dir(d)))));
    delta0_ = pow2_below(len / 4);
  }

  PptT<S> run(const PptOptions& opt, std::string* line) {
    const auto powers = power_candidates();
    std::vector<std::vector<Dir>> dirs;
    for (const auto& pw : powers) dirs.push_back(directions(pw));
    const Pt<S> p0 = old_.pos[v_];
    Rational delta = delta0_;
    std::string first;
    for (int attempt = 0; attempt < opt.budget; ++attempt) {
      const int e = std::max(8, static_cast<int>(std::ceil(30 - std::log2(to_double(S(delta))))));
      for (size_t pi = 0; pi < powers.size(); ++pi) {
        const auto& pw = powers[pi];
        for (const auto& [u, label] : dirs[pi]) {
          const Pt<S> p = snap(p0 + scale(S(delta), u), e);
          PptT<S> cand = build(p, pw);
          Verdict v = check_impl(cand);
          if (v.code.empty()) {
            std::ostringstream os;
            os << rec_.new_vertex << " split from " << rec_.vertex << ": " << case_label() << ", "
               << label << ", distance 2^" << static_cast<int>(std::log2(to_double(S(delta))));
            *line = os.str();
            return cand;
          }
          if (attempt == 0 && first.empty()) first = v.code + ": " + v.msg;
        }
      }
      delta /= 2;
    }
    fail("EpsilonExhausted", "no position of " + rec_.new_vertex + " validated within " +
                                 std::to_string(opt.budget) + " halvings" +
                                 (first.empty() ? std::string() : " (first failure " + first + ")"));
  }

 private:
  int dpow_old(int d) const { return w_.dpow(d); }

  bool same_power(int a, int b) const { return w_.power_zero(a - b); }

  // Orientation of the stored gains relative to the group powers.
  int gain_sign() const {
    for (int s : {1, -1}) {
      bool ok = true;
      for (const auto& walk : old_.graph.face_darts()) {
        int sum = 0;
        for (int d : walk) sum += dpow_old(d);
        if (!same_power(sum, s * old_.graph.walk_gain(walk))) ok = false;
      }
      if (ok) return s;
    }
    fail("Internal", "powers disagree with the gains of the stored map");
  }

  // Powers of the new graph's edges. Old edges keep theirs and the pivot gets
  // 0; the rest follow from a potential on vertices with
  // power = sign * gain + psi(head) - psi(tail). A new vertex joined to the
  // old ones only through restored edges leaves psi free; nearby copies are tried.
  std::vector<std::vector<int>> power_candidates() const {
    const int m = ex_.num_edges(), n = ex_.num_vertices();
    const auto& gain = ex_.edge_gains();
    std::vector<int> base(m, 0);
    std::vector<char> known(m, 0);
    for (int e = 0; e < m; ++e) {
      const std::string& id = ex_.edge(e).id;
      const int oe = old_.graph.edge_index(id);
      if (oe >= 0) {
        base[e] = old_.power[oe];
        known[e] = 1;
      } else if (id == rec_.pivot.id) {
        known[e] = 1;
      }
    }
    auto red = [&](long x) -> long {
      if (!w_.act.rotation) return x;
      const long k = w_.act.k;
      return ((x % k) + k) % k;
    };
    std::vector<long> psi(n, 0);
    std::vector<char> seen(n, 0);
    const int ny = ex_.vertex_index(rec_.new_vertex);
    auto spread = [&](int root) {
      std::vector<int> stack{root};
      seen[root] = 1;
      while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        for (int d : ex_.rotation()[x]) {
          const int e = edge_of(d);
          if (!known[e]) continue;
          const long step = red(base[e] - static_cast<long>(sign_) * gain[e]);
          const long want = red((d & 1) ? psi[x] - step : psi[x] + step);
          const int y = ex_.dst(d);
          if (!seen[y]) {
            seen[y] = 1;
            psi[y] = want;
            stack.push_back(y);
          } else if (red(psi[y] - want) != 0) {
            fail("Internal", "old powers disagree with the gains of the split map");
          }
        }
      }
    };
    const int vz = ex_.vertex_index(rec_.vertex);
    spread(vz);
    std::vector<long> offsets{0};
    if (!seen[ny]) {
      if (w_.act.rotation)
        for (int j = 1; j < w_.act.k; ++j) offsets.push_back(j);
      else
        offsets = {0, 1, -1, 2, -2};
    }
    const std::vector<long> psi0 = psi;
    const std::vector<char> seen0 = seen;
    std::vector<std::vector<int>> out;
    for (long off : offsets) {
      psi = psi0;
      seen = seen0;
      if (!seen[ny]) {
        psi[ny] = red(psi[vz] + off);
        spread(ny);
      }
      for (int v = 0; v < n; ++v)
        if (!seen[v]) fail("Internal", "split map is disconnected");
      std::vector<int> pw = base;
      for (int e = 0; e < m; ++e)
        if (!known[e])
          pw[e] = static_cast<int>(red(static_cast<long>(sign_) * gain[e] + psi[ex_.edge(e).head] -
                                       psi[ex_.edge(e).tail]));
      if (std::find(out.begin(), out.end(), pw) == out.end()) out.push_back(pw);
    }
    return out;
  }

  struct Dir {
    Pt<S> u;
    std::string label;
  };

  // Directions for the new vertex. As the distance shrinks, every dart tends
  // to a limit direction A plus a first-order term B(u) linear in the offset
  // direction u. The rotation system, pointedness and convex corners can only
  // change where two darts at one vertex have parallel limits and the first
  // order term of their cross product vanishes, so those critical directions
  // cut the circle into arcs and each arc is sampled.
  std::vector<Dir> directions(const std::vector<int>& pw) const {
    const int ny = ex_.vertex_index(rec_.new_vertex);
    const int vz = ex_.vertex_index(rec_.vertex);
    auto limit = [&](int x) {
      return old_.pos[old_.graph.vertex_index(ex_.vertex_name(x == ny ? vz : x))];
    };
    const Pt<S> origin{S(0), S(0)};
    auto lin = [&](int d, const Pt<S>& u) {
      const int p = (d & 1) ? -pw[edge_of(d)] : pw[edge_of(d)];
      Pt<S> b = origin;
      if (ex_.dst(d) == ny) b = b + (w_.act.apply(u, p) - w_.act.apply(origin, p));
      if (ex_.src(d) == ny) b = b - u;
      return b;
    };
    const Pt<S> ex{S(1), S(0)}, ey{S(0), S(1)};
    std::vector<double> crit;
    for (int x = 0; x < ex_.num_vertices(); ++x) {
      const auto& R = ex_.rotation()[x];
      std::vector<Pt<S>> A;
      for (int d : R) {
        const int p = (d & 1) ? -pw[edge_of(d)] : pw[edge_of(d)];
        A.push_back(w_.act.apply(limit(ex_.dst(d)), p) - limit(x));
      }
      for (size_t i = 0; i < R.size(); ++i)
        for (size_t j = i + 1; j < R.size(); ++j) {
          if (sgn(cross(A[i], A[j])) != 0) continue;
          auto f = [&](const Pt<S>& u) {
            return to_double(S(cross(A[i], lin(R[j], u)) + cross(lin(R[i], u), A[j])));
          };
          const double cx = f(ex), cy = f(ey);
          if (std::hypot(cx, cy) < 1e-12) continue;
          const double t = std::atan2(cy, cx);
          crit.push_back(t + M_PI / 2);
          crit.push_back(t - M_PI / 2);
        }
    }
    for (double& t : crit) t = std::remainder(t, 2 * M_PI) + M_PI;
    std::sort(crit.begin(), crit.end());
    crit.erase(std::unique(crit.begin(), crit.end(), [](double a, double b) { return b - a < 1e-9; }),
               crit.end());
    struct Arc {
      double lo, width;
    };
    std::vector<Arc> arcs;
    if (crit.empty()) {
      arcs.push_back({0, 2 * M_PI});
    } else {
      for (size_t i = 0; i < crit.size(); ++i) {
        const double lo = crit[i];
        const double hi = i + 1 < crit.size() ? crit[i + 1] : crit[0] + 2 * M_PI;
        if (hi - lo > 1e-9) arcs.push_back({lo, hi - lo});
      }
    }
    std::stable_sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.width > b.width; });

    // Labels name the gap of the old rotation the direction falls in.
    const AnnulusMap& g = old_.graph;
    const auto& R = g.rotation()[v_];
    const int deg = static_cast<int>(R.size());
    std::set<int> vacated;
    if (rec_.after) {
      const int P = parse_dart(g, *rec_.after);
      const int at = static_cast<int>(std::find(R.begin(), R.end(), P) - R.begin());
      for (int i = 0; i <= static_cast<int>(moved_.size()); ++i) vacated.insert((at + i) % deg);
    } else {
      for (int i = 0; i < deg; ++i) vacated.insert(i);
    }
    auto label = [&](const Pt<S>& u, double frac) {
      std::ostringstream os;
      os << std::setprecision(3);
      int gi = -1;
      for (int i = 0; i < deg && gi < 0; ++i)
        if (deg == 1 || in_arc(w_.dir(R[i]), w_.dir(R[(i + 1) % deg]), u)) gi = i;
      if (gi < 0) {
        os << "along " << dart_string(g, R[0]);
      } else {
        os << (vacated.count(gi) ? "vacated" : "other") << " gap (" << dart_string(g, R[gi]) << ", "
           << dart_string(g, R[(gi + 1) % deg]) << ")";
      }
      os << ", arc point " << frac;
      return os.str();
    };
    std::vector<Dir> out;
    const long one = 1L << 20;
    for (double frac : {0.5, 0.25, 0.75, 0.125, 0.875})
      for (const Arc& arc : arcs) {
        const double t = arc.lo + frac * arc.width;
        const Pt<S> u{S(Rational(std::lround(std::cos(t) * one), one)),
                      S(Rational(std::lround(std::sin(t) * one), one))};
        out.push_back({u, label(u, frac)});
      }
    return out;
  }

  std::string case_label() const {
    const AnnulusMap& g = old_.graph;
    const auto& R = g.rotation()[v_];
    const int deg = static_cast<int>(R.size());
    if (rec_.kind == SplitRecord::Kind::Quad) {
      std::set<std::string> names;
      for (const auto& r : rec_.restored) {
        names.insert(r.edge.tail);
        names.insert(r.edge.head);
      }
      return names.size() < 3 ? "degenerate quadrilateral" : "quadrilateral";
    }
    if (moved_.empty() || deg < 2) return "triangle case 1";
    int reflex = -1;
    for (int i = 0; i < deg; ++i)
      if (turn(w_.dir(R[i]), w_.dir(R[(i + 1) % deg])) < 0) reflex = i;
    if (reflex < 0) return "triangle";
    const int first = R[(reflex + 1) % deg], last = R[reflex];
    const bool hf = std::count(moved_.begin(), moved_.end(), first) > 0;
    const bool hl = std::count(moved_.begin(), moved_.end(), last) > 0;
    if (hf && hl) return "triangle case 3";
    return hf || hl ? "triangle case 1" : "triangle case 2";
  }

  PptT<S> build(const Pt<S>& p, const std::vector<int>& powers) const {
    PptT<S> c;
    c.group = old_.group;
    c.graph = ex_;
    c.power = powers;
    if (w_.act.rotation)
      for (int& x : c.power) {
        const int k = w_.act.k;
        x = ((x % k) + k) % k;
        if (2 * x > k) x -= k;
      }
    c.pos.resize(ex_.num_vertices());
    for (int v = 0; v < ex_.num_vertices(); ++v) {
      const int ov = old_.graph.vertex_index(ex_.vertex_name(v));
      c.pos[v] = ov >= 0 ? old_.pos[ov] : p;
    }
    return c;
  }

  const PptT<S>& old_;
  const SplitRecord& rec_;
  View<S> w_;
  AnnulusMap ex_;
  int v_ = -1;
  std::vector<int> moved_;
  int sign_ = 1;
  Rational delta0_;
};

}  // namespace

const SymmetryGroup& PptRealization::group() const {
  return std::visit([](const auto& r) -> const SymmetryGroup& { return r.group; }, v_);
}

const AnnulusMap& PptRealization::graph() const {
  return std::visit([](const auto& r) -> const AnnulusMap& { return r.graph; }, v_);
}

const std::vector<int>& PptRealization::powers() const {
  return std::visit([](const auto& r) -> const std::vector<int>& { return r.power; }, v_);
}

std::vector<std::array<double, 2>> PptRealization::positions_double() const {
  return std::visit(
      [](const auto& r) {
        std::vector<std::array<double, 2>> out;
        for (const auto& p : r.pos) out.push_back({to_double(p.x), to_double(p.y)});
        return out;
      },
      v_);
}

PptRealization realize_ppt_base(const std::string& base, const SymmetryGroup& g) {
  check_surface(base, g);
  PptRealization r = dispatch(g, [&]<class S>() { return base_ppt<S>(base, g); });
  std::visit(
      [](const auto& x) {
        Verdict v = check_impl(x);
        if (!v.code.empty()) fail("Internal", "base drawing fails validation: " + v.msg);
      },
      r.variant());
  r.log.push_back("base " + base + " on the " + FlatSurface::of(g).describe());
  return r;
}

PptRealization realize_ppt_base(const std::string& base, const FlatSurface& s) {
  return realize_ppt_base(base, s.group());
}

PptRealization ppt_split(const PptRealization& r, const SplitRecord& step, const PptOptions& opt) {
  std::string line;
  PptRealization out = std::visit(
      [&](const auto& x) -> PptRealization {
        using S = std::decay_t<decltype(x.pos[0].x)>;
        Placer<S> pl(x, step);
        return PptRealization(pl.run(opt, &line));
      },
      r.variant());
  out.log = r.log;
  out.log.push_back(line);
  return out;
}

PptRealization ppt_triangle_split(const PptRealization& r, const SplitRecord& step,
                                  const PptOptions& opt) {
  if (step.kind != SplitRecord::Kind::Triangle) fail("IllegalStep", "not a triangle split");
  return ppt_split(r, step, opt);
}

PptRealization ppt_quad_split(const PptRealization& r, const SplitRecord& step,
                              const PptOptions& opt) {
  if (step.kind != SplitRecord::Kind::Quad) fail("IllegalStep", "not a quadrilateral split");
  return ppt_split(r, step, opt);
}

PptRealization realize_ppt(const ConstructionSequence& seq, const SymmetryGroup& g,
                           const PptOptions& opt) {
  PptRealization r = realize_ppt_base(seq.base, g);
  if (seq.base_graph) {
    auto log = r.log;
    r = std::visit([&](const auto& x) { return PptRealization(relabel(x, *seq.base_graph)); },
                   r.variant());
    r.log = log;
  }
  for (const auto& st : seq.steps) r = ppt_split(r, st, opt);
  return r;
}

PptRealization realize_ppt(const ConstructionSequence& seq, const FlatSurface& s,
                           const PptOptions& opt) {
  return realize_ppt(seq, s.group(), opt);
}

AnnulusMap ppt_quotient_graph(const PptRealization& r) {
  return std::visit(
      [](const auto& x) {
        if (auto why = embedding_problem(x); !why.empty()) fail("CrossingEdges", why);
        return extract_map(x);
      },
      r.variant());
}

AngleReport validate_ppt(const PptRealization& r) {
  Verdict v = std::visit([](const auto& x) { return check_impl(x); }, r.variant());
  if (!v.code.empty()) fail(v.code, v.msg);
  return v.report;
}

RigidityVerdict decide_symmetric_rigidity(const AnnulusMap& m, int k, const PptOptions& opt) {
  if (k == 2)
    fail("UnsupportedGroup", "half-turn symmetry is not covered; the matching statement is open");
  if (k < 1) fail("InvalidInput", "rotation order must be positive");
  RigidityVerdict out;
  AnnulusMap g = m;
  if (k == 1 && !g.balanced() && g.num_edges() > 0) {
    // Without symmetry the puncture is irrelevant: put both ends in one face.
    g = g.with_end_darts({0, 0});
  }
  out.sparsity = check_sparse(g, 1);
  if (g.num_edges() == 0) {
    if (k == 1 && g.num_vertices() == 1) {
      out.rigid = true;
      out.reason = "a single point";
    } else {
      out.reason = "no edges: an isolated orbit keeps a radial motion";
    }
    return out;
  }
  if (!out.sparsity.tight) {
    out.reason = out.sparsity.sparse ? "sparse but not tight: f = " + std::to_string(g.f_count())
                                     : "not sparse";
    return out;
  }
  out.rigid = true;
  const FlatSurface s = k == 1 ? FlatSurface::plane() : FlatSurface::cone(k);
  out.witness = realize_ppt(decompose(g, 1), s, opt);
  validate_ppt(*out.witness);
  out.reason = "tight; witness drawn on the " + s.describe();
  return out;
}

}  // namespace annulus
