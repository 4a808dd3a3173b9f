#include "annulus/contact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "annulus/error.hpp"
#include "geometry.hpp"

namespace annulus {

SymmetryGroup SymmetryGroup::translation(const Rational& x, const Rational& y) {
  if (sgn(x) == 0 && sgn(y) == 0) fail("BadGroup", "translation vector must be nonzero");
  SymmetryGroup g;
  g.kind = Kind::Translation;
  g.vector = {x, y};
  return g;
}

SymmetryGroup SymmetryGroup::rotation(int k, const Rational& cx, const Rational& cy) {
  if (k < 1) fail("BadGroup", "rotation order must be positive");
  SymmetryGroup g;
  g.kind = Kind::Rotation;
  g.order = k;
  g.center = {cx, cy};
  return g;
}

namespace {

Rational parse_rational(const std::string& s) {
  try {
    Rational r(s);
    r.canonicalize();
    if (sgn(Rational(r.get_den())) == 0) throw std::invalid_argument(s);
    return r;
  } catch (const std::invalid_argument&) {
    fail("ParseError", "not a rational number: " + s);
  }
}

std::pair<Rational, Rational> parse_pair(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) fail("ParseError", "expected x,y: " + s);
  return {parse_rational(s.substr(0, comma)), parse_rational(s.substr(comma + 1))};
}

}  // namespace

SymmetryGroup SymmetryGroup::parse(const std::string& s) {
  auto colon = s.find(':');
  std::string kind = s.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (kind == "translation") {
    if (rest.empty()) return translation();
    auto [x, y] = parse_pair(rest);
    return translation(x, y);
  }
  if (kind == "rotation") {
    if (rest.empty()) fail("ParseError", "rotation needs an order, e.g. rotation:3");
    auto at = rest.find('@');
    int k = 0;
    try {
      k = std::stoi(rest.substr(0, at));
    } catch (const std::exception&) {
      fail("ParseError", "bad rotation order: " + rest);
    }
    if (at == std::string::npos) return rotation(k);
    auto [x, y] = parse_pair(rest.substr(at + 1));
    return rotation(k, x, y);
  }
  fail("ParseError", "unknown group '" + s + "' (use translation or rotation:K)");
}

int SymmetryGroup::level() const {
  if (kind == Kind::Translation) return 2;
  if (order == 1) return 0;
  return order == 2 ? 2 : 1;
}

std::string SymmetryGroup::number_system() const {
  if (kind == Kind::Translation) return "rational";
  if (order == 1 || order == 2 || order == 4) return "rational";
  if (order == 3 || order == 6) return "sqrt3";
  return "float";
}

std::string SymmetryGroup::describe() const {
  if (kind == Kind::Translation)
    return "translation by (" + vector[0].get_str() + ", " + vector[1].get_str() + ")";
  return "rotation of order " + std::to_string(order) + " about (" + center[0].get_str() + ", " +
         center[1].get_str() + ")";
}

namespace {

[[noreturn]] void invalid(const std::string& msg) { fail("ValidationFailed", msg); }

using namespace geo;

// ---------------------------------------------------------------------------
// Extraction

template <class S>
struct CopyT {
  int rep, power;
  Pt<S> a, b;
};

std::string copy_name(int rep, int power) {
  return "s" + std::to_string(rep + 1) + "^" + std::to_string(power);
}

template <class S>
std::vector<Contact> window_contacts(const SystemT<S>& sys, const Action<S>& act, int W) {
  const int n = static_cast<int>(sys.reps.size());
  std::vector<int> powers;
  if (act.rotation) {
    for (int j = 0; j < act.k; ++j) powers.push_back(j);
  } else {
    for (int j = -W; j <= W; ++j) powers.push_back(j);
  }
  std::vector<CopyT<S>> copies;
  for (int j = 0; j < n; ++j)
    for (int p : powers)
      copies.push_back({j, p, act.apply(sys.reps[j].end[0], p), act.apply(sys.reps[j].end[1], p)});

  std::vector<Contact> out;
  for (int i = 0; i < n; ++i) {
    const Pt<S>& a = sys.reps[i].end[0];
    const Pt<S>& b = sys.reps[i].end[1];
    if (same(a, b)) invalid("segment " + copy_name(i, 0) + " is a point");
    if (act.rotation && act.k > 1 && on_closed(act.center, a, b))
      invalid("segment " + copy_name(i, 0) + " passes through the rotation center");
    for (const auto& c : copies) {
      if (c.rep == i && c.power == 0) continue;
      if (same(a, c.a) || same(a, c.b) || same(b, c.a) || same(b, c.b))
        invalid("endpoints of " + copy_name(i, 0) + " and " + copy_name(c.rep, c.power) +
                " coincide");
      int o1 = orient(a, b, c.a), o2 = orient(a, b, c.b);
      if (o1 == 0 && o2 == 0) {
        if (strictly_inside(c.a, a, b) || strictly_inside(c.b, a, b) ||
            strictly_inside(a, c.a, c.b) || strictly_inside(b, c.a, c.b))
          invalid("collinear overlap of " + copy_name(i, 0) + " and " +
                  copy_name(c.rep, c.power));
        continue;
      }
      int o3 = orient(c.a, c.b, a), o4 = orient(c.a, c.b, b);
      if (o1 * o2 < 0 && o3 * o4 < 0)
        invalid("segments " + copy_name(i, 0) + " and " + copy_name(c.rep, c.power) + " cross");
    }
    for (int x = 0; x < 2; ++x) {
      const Pt<S>& e = sys.reps[i].end[x];
      std::optional<Contact> hit;
      for (const auto& c : copies) {
        if (c.rep == i && c.power == 0) continue;
        if (!strictly_inside(e, c.a, c.b)) continue;
        if (hit) invalid("endpoint of " + copy_name(i, 0) + " lies in two segments");
        hit = Contact{i, x, Target{c.rep, act.norm(c.power)}};
      }
      if (hit) out.push_back(*hit);
    }
  }
  return out;
}

template <class S>
struct RotSlot {
  int group;  // 0 q-end, 1 left side, 2 p-end, 3 right side
  S key;
  int dart;  // -1 marks a free endpoint
  int end;
};

template <class S>
std::vector<RotSlot<S>> sorted_slots(std::vector<RotSlot<S>> v) {
  std::stable_sort(v.begin(), v.end(), [](const RotSlot<S>& a, const RotSlot<S>& b) {
    if (a.group != b.group) return a.group < b.group;
    return sgn(S(a.key - b.key)) < 0;
  });
  return v;
}

template <class S>
ContactCert extract_impl(const SystemT<S>& sys) {
  Action<S> act(sys.group);
  ContactCert cert;
  const int n = static_cast<int>(sys.reps.size());
  if (n == 0) invalid("empty system");

  std::vector<Contact> cs;
  int W = 1;
  if (act.rotation) {
    cs = window_contacts(sys, act, 0);
    cert.window = act.k;
  } else {
    // Grow until the window covers every contact found, then confirm one step wider.
    for (;;) {
      if (W > 64) invalid("contacts keep appearing as the window grows");
      cs = window_contacts(sys, act, W);
      int need = 1;
      for (const auto& c : cs) need = std::max(need, 1 + std::abs(c.target.power));
      if (need > W) {
        W = need;
        continue;
      }
      if (window_contacts(sys, act, W + 1) == cs) break;
      ++W;
    }
    cert.window = W;
  }
  cert.contacts = cs;
  cert.free_ends = 2 * n - static_cast<int>(cs.size());
  cert.log.push_back("window " + std::to_string(cert.window) + ", " + std::to_string(cs.size()) +
                     " contacts, " + std::to_string(cert.free_ends) + " free ends");

  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  for (const auto& c : cs) parent[find(c.rep)] = find(c.target.rep);
  int comps = 0;
  for (int v = 0; v < n; ++v) comps += find(v) == v;
  if (comps > 1) {
    cert.log.push_back("contact graph has " + std::to_string(comps) + " components");
    return cert;
  }

  std::vector<std::string> names;
  if (sys.graph.num_vertices() == n) {
    names = sys.graph.vertex_names();
  } else {
    for (int v = 0; v < n; ++v) names.push_back("s" + std::to_string(v + 1));
  }
  if (cs.empty()) {
    cert.graph = AnnulusMap::build(names, {}, {{}}, {-1, -1});
    return cert;
  }

  std::vector<Edge> edges;
  std::vector<std::vector<RotSlot<S>>> slots(n);
  for (size_t i = 0; i < cs.size(); ++i) {
    const Contact& c = cs[i];
    const int e = static_cast<int>(i);
    edges.push_back({"c" + std::to_string(i + 1), c.rep, c.target.rep});
    slots[c.rep].push_back({c.end == 1 ? 0 : 2, num<S>(0), dart(e, true), c.end});
    const auto& host = sys.reps[c.target.rep];
    Pt<S> e2 = act.apply(sys.reps[c.rep].end[c.end], -c.target.power);
    Pt<S> far = act.apply(sys.reps[c.rep].end[1 - c.end], -c.target.power);
    S t = dot(e2 - host.end[0], host.end[1] - host.end[0]);
    int side = orient(host.end[0], host.end[1], far);
    if (side == 0) invalid("contact along a collinear segment");
    if (side > 0)
      slots[c.target.rep].push_back({1, S(-t), dart(e, false), -1});
    else
      slots[c.target.rep].push_back({3, t, dart(e, false), -1});
  }
  std::vector<std::vector<char>> is_free(n, std::vector<char>(2, 1));
  for (const auto& c : cs) is_free[c.rep][c.end] = 0;
  for (int v = 0; v < n; ++v)
    for (int x = 0; x < 2; ++x)
      if (is_free[v][x]) slots[v].push_back({x == 1 ? 0 : 2, num<S>(0), -1, x});
  std::vector<std::vector<int>> rot(n);
  for (int v = 0; v < n; ++v) {
    slots[v] = sorted_slots(slots[v]);
    for (const auto& s : slots[v])
      if (s.dart >= 0) rot[v].push_back(s.dart);
  }

  AnnulusMap probe;
  try {
    probe = AnnulusMap::build(names, edges, rot, {0, 0});
  } catch (const Error& e) {
    invalid(std::string("contact graph is not an annulus map: ") + e.what());
  }
  auto dgain = [&](int d) {
    int g = cs[edge_of(d)].target.power;
    return (d & 1) ? -g : g;
  };
  std::vector<int> ends;
  for (const auto& walk : probe.face_darts()) {
    int sum = 0;
    for (int d : walk) sum += dgain(d);
    if (act.norm(sum) != 0) ends.push_back(walk[0]);
  }
  if (ends.size() == 2) {
    cert.graph = probe.with_end_darts({ends[0], ends[1]});
    return cert;
  }
  if (!ends.empty()) invalid(std::to_string(ends.size()) + " faces wind around the core");

  // No winding face: both ends sit in the face reaching the extreme free endpoint.
  auto better = [&](const Pt<S>& p, const Pt<S>& q) {
    if (act.rotation) {
      return sgn(S(dot(p - act.center, p - act.center) - dot(q - act.center, q - act.center))) > 0;
    }
    Pt<S> nrm = rot90(act.tau);
    int s = sgn(S(dot(q, nrm) - dot(p, nrm)));
    if (s != 0) return s > 0;
    return sgn(S(dot(q, act.tau) - dot(p, act.tau))) > 0;
  };
  int bv = 0, bx = 0;
  for (int v = 0; v < n; ++v)
    for (int x = 0; x < 2; ++x)
      if (better(sys.reps[v].end[x], sys.reps[bv].end[bx])) bv = v, bx = x;
  if (!is_free[bv][bx]) invalid("extreme endpoint is not free");
  const auto& sl = slots[bv];
  int at = -1;
  for (size_t i = 0; i < sl.size(); ++i)
    if (sl[i].dart < 0 && sl[i].end == bx) at = static_cast<int>(i);
  int out = -1;
  for (size_t s = 1; s <= sl.size() && out < 0; ++s) {
    const auto& cand = sl[(at - static_cast<int>(s) + 2 * sl.size()) % sl.size()];
    if (cand.dart >= 0) out = cand.dart;
  }
  if (out < 0) invalid("extreme segment has no contacts");
  cert.graph = probe.with_end_darts({out, out});
  return cert;
}

// Copies `cand` onto the naming of `target` via phi (cert graph -> target darts).
template <class S>
SystemT<S> adopt(const SystemT<S>& cand, const ContactCert& cert, const AnnulusMap& target,
                 const std::vector<int>& phi) {
  const int n = static_cast<int>(cand.reps.size());
  const AnnulusMap& g = *cert.graph;
  std::vector<int> vmap(n, 0);
  for (int v = 0; v < n; ++v)
    if (g.degree(v) > 0) vmap[v] = target.src(phi[g.rotation()[v][0]]);
  SystemT<S> out{cand.group, target, std::vector<SegmentT<S>>(n)};
  for (int v = 0; v < n; ++v) {
    SegmentT<S> s = cand.reps[v];
    s.target = {Target{}, Target{}};
    s.dart = {-1, -1};
    out.reps[vmap[v]] = s;
  }
  for (size_t c = 0; c < cert.contacts.size(); ++c) {
    const Contact& ct = cert.contacts[c];
    auto& seg = out.reps[vmap[ct.rep]];
    seg.target[ct.end] = Target{vmap[ct.target.rep], ct.target.power};
    seg.dart[ct.end] = phi[dart(static_cast<int>(c), true)];
  }
  return out;
}

// Validates a candidate and renames it onto `expected`, or returns nothing.
template <class S>
std::optional<SystemT<S>> accept(const SystemT<S>& cand, const AnnulusMap& expected,
                                 std::string* why = nullptr) {
  ContactCert cert;
  try {
    cert = extract_impl(cand);
  } catch (const Error& e) {
    if (e.internal()) throw;
    if (why) *why = e.what();
    return std::nullopt;
  }
  if (!cert.graph) {
    if (why) *why = "disconnected";
    return std::nullopt;
  }
  auto phi = oriented_isomorphism(*cert.graph, expected);
  if (!phi) {
    if (why) *why = "contact graph differs from the expected map";
    return std::nullopt;
  }
  return adopt(cand, cert, expected, *phi);
}

// ---------------------------------------------------------------------------
// Base configurations

template <class S>
SystemT<S> base_system(const std::string& tag, const SymmetryGroup& grp) {
  Action<S> act(grp);
  SystemT<S> sys;
  sys.group = grp;
  Pt<S> o, e1, e2;
  if (!act.rotation) {
    o = {num<S>(0), num<S>(0)};
    e1 = act.tau;
    e2 = rot90(act.tau);
  } else {
    o = act.center;
    e1 = {num<S>(1), num<S>(0)};
    e2 = {num<S>(0), num<S>(1)};
  }
  auto at = [&](const S& a, const S& b) { return o + scale(a, e1) + scale(b, e2); };
  auto seg = [&](Pt<S> p, Pt<S> q) {
    SegmentT<S> s;
    s.line = {p, q};
    s.end = {p, q};
    return s;
  };
  if (tag == "K") {
    if (!act.rotation) {
      sys.reps.push_back(seg(at(num<S>(1, 5), num<S>(1, 5)), at(num<S>(1, 5), num<S>(3, 5))));
      sys.reps.push_back(seg(at(num<S>(1, 5), num<S>(2, 5)), at(num<S>(1, 2), num<S>(1, 2))));
    } else {
      // Keep the pair small next to its rotated copies.
      S sc = act.k > 8 ? num<S>(8, act.k) : num<S>(1);
      S three = num<S>(3);
      sys.reps.push_back(seg(at(three, S(sc * num<S>(1, 10))), at(three, S(sc * num<S>(1, 2)))));
      sys.reps.push_back(seg(at(three, S(sc * num<S>(3, 10))),
                             at(S(three + sc * num<S>(3, 10)), S(sc * num<S>(2, 5)))));
    }
    sys.reps[1].target[0] = {0, 0};
  } else if (tag == "L") {
    if (!act.rotation) {
      sys.reps.push_back(seg(at(num<S>(0), num<S>(0)), at(num<S>(0), num<S>(1))));
      sys.reps.push_back(seg(at(num<S>(0), num<S>(3, 10)), at(num<S>(1), num<S>(7, 10))));
    } else {
      sys.reps.push_back(seg(at(num<S>(1), num<S>(-1)), at(num<S>(1), num<S>(6, 5))));
      sys.reps.push_back(seg(at(num<S>(1), num<S>(1, 2)), at(num<S>(-1), num<S>(1, 5))));
    }
    sys.reps[1].target = {Target{0, 0}, Target{0, 1}};
  } else if (tag == "M") {
    // From A = (1,0) to B with (2I - g)B = gA: B is the midpoint of gA and gB.
    auto [c, s] = cos_sin<S>(act.k);
    S det = S(num<S>(5) - num<S>(4) * c);
    Pt<S> b{S((num<S>(2) * c - num<S>(1)) / det), S(num<S>(2) * s / det)};
    sys.reps.push_back(seg(at(num<S>(1), num<S>(0)), at(b.x, b.y)));
    sys.reps[0].target[1] = {0, 1};
  } else {
    fail("ParseError", "unknown base '" + tag + "'");
  }
  return sys;
}

template <class S>
SystemT<S> realize_base_impl(const std::string& tag, const SymmetryGroup& g) {
  SystemT<S> sys = base_system<S>(tag, g);
  std::string why;
  auto ok = accept(sys, base_map(tag), &why);
  if (!ok) fail("Internal", "base configuration " + tag + " fails validation: " + why);
  return *ok;
}

// ---------------------------------------------------------------------------
// Splits

// A contact at the split segment z, in z's own coordinates (t along p->q).
template <class S>
struct SlotT {
  int dart;  // dart of the old graph leaving z; -1 for a free endpoint
  int end;   // endpoint index of z, or -1 for a contact on a side
  S t;
  int side;             // +1 left of p->q, -1 right, 0 at an endpoint
  Target w;             // the other segment: rep == z means a copy of z itself
  Line<S> wseg;         // that segment in z's coordinates; for side contacts the touching end first
};

template <class S>
std::vector<SlotT<S>> slots_at(const SystemT<S>& sys, const Action<S>& act, int z) {
  const auto& seg = sys.reps[z];
  const Pt<S> p = seg.end[0], u = seg.end[1] - seg.end[0];
  const S uu = dot(u, u);
  std::vector<SlotT<S>> out;
  for (int x = 0; x < 2; ++x) {
    int d = seg.target[x].free() ? -1 : seg.dart[x];
    if (!seg.target[x].free() && d < 0) fail("Internal", "contact without a dart label");
    Line<S> ws = seg.line;
    if (!seg.target[x].free()) {
      const auto& o = sys.reps[seg.target[x].rep];
      ws = {act.apply(o.end[0], seg.target[x].power), act.apply(o.end[1], seg.target[x].power)};
    }
    out.push_back({d, x, num<S>(x), 0, seg.target[x], ws});
  }
  for (int r = 0; r < static_cast<int>(sys.reps.size()); ++r)
    for (int x = 0; x < 2; ++x) {
      const auto& rs = sys.reps[r];
      if (rs.target[x].rep != z) continue;
      if (rs.dart[x] < 0) fail("Internal", "contact without a dart label");
      const int g = rs.target[x].power;
      Pt<S> e = act.apply(rs.end[x], -g), far = act.apply(rs.end[1 - x], -g);
      S t = S(dot(e - p, u) / uu);
      out.push_back({alpha(rs.dart[x]), -1, t, orient(seg.end[0], seg.end[1], far),
                     Target{r, act.norm(-g)}, Line<S>{e, far}});
    }
  return out;
}

struct EndSpec {
  enum Kind { Inherit, W, Piece } kind = Inherit;
  int x = 0;      // Inherit: endpoint index of the old segment
  Target w;       // W: the segment to end on
};

// A point fixing a piece's line, in the plan's frame.
template <class S>
struct PointSpec {
  enum Kind { At, OnW, OnPiece } kind = At;
  S t, s;         // At: (t, θ s). OnPiece: s times the other piece's offset at t.
};

template <class S>
struct PieceSpec {
  std::array<PointSpec<S>, 2> pts;
  std::array<EndSpec, 2> ends;  // at the low-t and high-t end
};

template <class S>
struct Plan {
  std::string name;
  bool rev = false;
  int nsign = 1;
  std::array<PieceSpec<S>, 2> pieces;
  Line<S> wdir;  // OnW is wdir[0] moved a little toward wdir[1]
};

template <class S>
struct Frame {
  Pt<S> o, u, n;
  Pt<S> at(const S& t, const S& s) const { return o + scale(t, u) + scale(s, n); }
};

template <class S>
Frame<S> make_frame(const SegmentT<S>& seg, bool rev, int nsign) {
  Pt<S> p = seg.end[0], q = seg.end[1];
  Frame<S> f;
  f.o = rev ? q : p;
  f.u = rev ? p - q : q - p;
  Pt<S> nn = rot90(q - p);
  f.n = nsign > 0 ? nn : Pt<S>{S(-nn.x), S(-nn.y)};
  return f;
}

template <class S>
class Splitter {
 public:
  Splitter(const SystemT<S>& sys, const SplitRecord& rec)
      : sys_(sys), act_(sys.group), rec_(rec) {
    expected_ = apply_split(sys.graph, rec);
    z_ = sys.graph.vertex_index(rec.vertex);
    n_ = static_cast<int>(sys.reps.size());
    slots_ = slots_at(sys, act_, z_);
    std::vector<double> ts;
    for (const auto& s : slots_) ts.push_back(to_double(s.t));
    std::sort(ts.begin(), ts.end());
    double gap = 1;
    for (size_t i = 1; i < ts.size(); ++i)
      if (ts[i] - ts[i - 1] > 1e-12) gap = std::min(gap, ts[i] - ts[i - 1]);
    theta0_ = pow2_below(gap / 8);
    const Pt<S> u = sys.reps[z_].end[1] - sys.reps[z_].end[0];
    const double len = std::sqrt(to_double(dot(u, u)));
    grid_base_ = len * gap;
  }

  SystemT<S> run(const RealizeOptions& opt) {
    std::vector<Plan<S>> plans =
        rec_.kind == SplitRecord::Kind::Triangle ? triangle_plans() : quad_plans();
    Rational theta = theta0_;
    std::string first;  // reasons at the largest ε are the informative ones
    for (int attempt = 0; attempt < opt.budget; ++attempt) {
      // Grid well below the smallest designed offset, so rounding cannot matter.
      const double fine = grid_base_ * to_double(S(theta)) / 4096;
      const int e = std::max(8, static_cast<int>(std::ceil(-std::log2(fine))));
      for (const auto& plan : plans) {
        std::string why;
        auto r = try_plan(plan, theta, e, &why);
        if (r) return *r;
        if (attempt == 0) first += (first.empty() ? "" : "; ") + why;
      }
      theta /= 2;
    }
    fail("EpsilonExhausted", "no placement of " + rec_.new_vertex + " validated within " +
                                 std::to_string(opt.budget) + " halvings (" +
                                 std::to_string(plans.size()) + " templates: " +
                                 (plans.empty() ? "none apply" : first) + ")");
  }

 private:
  struct FSlot {
    int dart, end;
    S t;
    int side;
    Target w;
    Line<S> wseg;
  };

  std::vector<FSlot> in_frame(bool rev, int nsign) const {
    std::vector<FSlot> out;
    for (const auto& s : slots_) {
      FSlot f{s.dart, s.end, rev ? S(num<S>(1) - s.t) : s.t, s.side * nsign, s.w, s.wseg};
      out.push_back(f);
    }
    return out;
  }

  int old_end_at(bool rev, int t) const { return rev ? 1 - t : t; }

  // Pairs (k, X): k the dart at z whose contact survives next to the pivot,
  // X the darts at z that go to the other piece.
  std::vector<std::pair<int, std::set<int>>> triangle_roles() const {
    const AnnulusMap& g = sys_.graph;
    const AnnulusMap& ex = expected_;
    const int pe = ex.edge_index(rec_.pivot.id);
    std::set<int> fresh{pe};
    for (const auto& r : rec_.restored) fresh.insert(ex.edge_index(r.edge.id));
    auto old_dart = [&](int nd) {
      int oe = g.edge_index(ex.edge(edge_of(nd)).id);
      return oe < 0 ? -1 : dart(oe, (nd & 1) == 0);
    };
    auto new_dart = [&](int od) { return dart(ex.edge_index(g.edge(edge_of(od)).id), (od & 1) == 0); };
    std::vector<std::pair<int, std::set<int>>> out;
    for (const auto& walk : ex.face_darts()) {
      if (walk.size() != 3) continue;
      for (int i = 0; i < 3; ++i) {
        if (edge_of(walk[i]) != pe) continue;
        const int d1 = walk[(i + 1) % 3], d2 = walk[(i + 2) % 3];
        std::vector<int> ks;
        if (!fresh.count(edge_of(d1)) && fresh.count(edge_of(d2))) ks.push_back(d1);
        if (!fresh.count(edge_of(d2)) && fresh.count(edge_of(d1))) ks.push_back(alpha(d2));
        for (int kn : ks) {
          int ko = old_dart(kn);
          if (ko < 0 || g.src(ko) != z_) continue;
          std::set<int> X;
          for (int od : g.rotation()[z_])
            if (ex.src(new_dart(od)) != ex.src(kn)) X.insert(od);
          std::pair<int, std::set<int>> role{ko, X};
          if (std::find(out.begin(), out.end(), role) == out.end()) out.push_back(role);
        }
      }
    }
    return out;
  }

  // Endpoint choices for the piece ends inside the walk W.
  S pick_gap(const S& a, const S& b, const std::vector<FSlot>& fs) const {
    S hi = b;
    for (const auto& s : fs)
      if (sgn(S(s.t - a)) > 0 && sgn(S(s.t - hi)) < 0) hi = s.t;
    return S(dyadic_between(a, hi));
  }

  std::vector<Plan<S>> triangle_plans() const {
    std::vector<Plan<S>> plans;
    const S zero = num<S>(0), one = num<S>(1), half = num<S>(1, 2);
    for (const auto& [k, X] : triangle_roles()) {
      for (int rev = 0; rev < 2; ++rev)
        for (int nsign : {1, -1}) {
          auto fs = in_frame(rev, nsign);
          const FSlot* ks = nullptr;
          for (const auto& s : fs)
            if (s.dart == k) ks = &s;
          if (!ks) continue;
          const bool alpha_case = ks->end < 0;
          if (alpha_case && ks->side != 1) continue;
          if (!alpha_case && sgn(S(ks->t - one)) != 0) continue;
          const S tk = ks->t;
          const Target w = ks->w;
          auto by_t = [](const FSlot& a, const FSlot& b) { return sgn(S(a.t - b.t)) < 0; };
          std::vector<FSlot> top_hi, top_lo, top_all, bottom;
          const FSlot *endp = nullptr, *endq = nullptr;
          for (const auto& s : fs) {
            if (s.dart == k && &s == ks) continue;
            if (s.end >= 0) {
              (sgn(s.t) == 0 ? endp : endq) = &s;
            } else if (s.side > 0) {
              top_all.push_back(s);
              (sgn(S(s.t - tk)) > 0 ? top_hi : top_lo).push_back(s);
            } else {
              bottom.push_back(s);
            }
          }
          std::vector<FSlot> walk;
          int ip = -1, iq = -1;
          if (alpha_case) {
            std::sort(top_hi.begin(), top_hi.end(), by_t);
            std::sort(bottom.begin(), bottom.end(), by_t);
            std::reverse(bottom.begin(), bottom.end());
            std::sort(top_lo.begin(), top_lo.end(), by_t);
            walk = top_hi;
            iq = static_cast<int>(walk.size());
            walk.push_back(*endq);
            walk.insert(walk.end(), bottom.begin(), bottom.end());
            ip = static_cast<int>(walk.size());
            walk.push_back(*endp);
            walk.insert(walk.end(), top_lo.begin(), top_lo.end());
          } else {
            std::sort(top_all.begin(), top_all.end(), by_t);
            std::reverse(top_all.begin(), top_all.end());
            std::sort(bottom.begin(), bottom.end(), by_t);
            walk = top_all;
            ip = static_cast<int>(walk.size());
            walk.push_back(*endp);
            walk.insert(walk.end(), bottom.begin(), bottom.end());
          }
          // X must be the first |X| darts of the walk.
          int seen = 0, iL = -1, iN = static_cast<int>(walk.size());
          bool prefix = true;
          for (int i = 0; i < static_cast<int>(walk.size()); ++i) {
            if (walk[i].dart < 0) continue;
            if (seen < static_cast<int>(X.size())) {
              if (!X.count(walk[i].dart)) prefix = false;
              ++seen;
              iL = i;
            } else {
              iN = i;
              break;
            }
          }
          if (!prefix || seen != static_cast<int>(X.size())) continue;
          const int gmin = iL + 1, gmax = iN;

          auto last_x_t = [&]() { return walk[iL].t; };
          auto max_below = [&](const S& b, const S& floor) {
            S a = floor;
            for (const auto& s : fs)
              if (sgn(S(s.t - b)) < 0 && sgn(S(s.t - a)) > 0) a = s.t;
            return a;
          };
          const int x0 = old_end_at(rev, 0), x1 = old_end_at(rev, 1);
          EndSpec inh0{EndSpec::Inherit, x0, {}}, inh1{EndSpec::Inherit, x1, {}};
          EndSpec onw{EndSpec::W, 0, w}, onp{EndSpec::Piece, 0, {}};
          Line<S> wdir = ks->wseg;
          if (!alpha_case) {
            // Leave the contact point along w toward this frame's left side.
            const SegmentT<S>& old = sys_.reps[z_];
            const Pt<S> nrm = scale(num<S>(nsign), rot90(old.end[1] - old.end[0]));
            const Pt<S> qpt = old.end[x1];
            wdir = {qpt, sgn(dot(ks->wseg[0] - qpt, nrm)) > 0 ? ks->wseg[0] : ks->wseg[1]};
          }
          using PS = PointSpec<S>;
          const PS p00{PS::At, zero, zero}, p10{PS::At, one, zero}, pw{PS::OnW, zero, zero};
          auto pat = [&](const S& t) { return PS{PS::At, t, zero}; };
          auto add = [&](const std::string& nm, PieceSpec<S> y, PieceSpec<S> xp) {
            plans.push_back(Plan<S>{nm, rev == 1, nsign, {y, xp}, wdir});
          };

          if (alpha_case) {
            if (gmin <= iq) {  // X on the left side beyond k
              S a = iL >= 0 ? last_x_t() : tk;
              S c = pick_gap(a, one, fs);
              add("tri-i", {{p00, p10}, {inh0, inh1}}, {{pw, pat(c)}, {onw, onp}});
            }
            if (std::max(gmin, iq + 1) <= std::min(gmax, ip)) {  // cut on the right side
              S hi = one, lo = zero;
              for (int i = 0; i <= iL; ++i)
                if (walk[i].end < 0 && walk[i].side < 0 && sgn(S(walk[i].t - hi)) < 0) hi = walk[i].t;
              for (int i = iL + 1; i < static_cast<int>(walk.size()); ++i)
                if (walk[i].end < 0 && walk[i].side < 0 && sgn(S(walk[i].t - lo)) > 0) lo = walk[i].t;
              S lo1 = sgn(S(tk - lo)) > 0 ? tk : lo;
              if (sgn(S(hi - lo1)) > 0) {
                S c = pick_gap(lo1, hi, fs);
                add("tri-r1", {{p00, p10}, {inh0, onp}}, {{pw, pat(c)}, {onw, inh1}});
              }
              S hi2 = sgn(S(tk - hi)) < 0 ? tk : hi;
              if (sgn(S(hi2 - lo)) > 0) {
                S c = pick_gap(lo, hi2, fs);
                add("tri-r2", {{p00, pw}, {inh0, onw}},
                    {{PS{PS::OnPiece, c, one}, PS{PS::OnPiece, one, S((one + c) * half)}},
                     {onp, inh1}});
              }
            }
            if (gmax >= ip + 1) {  // k keeps only a short stretch before it
              S b = tk;
              for (int i = iL + 1; i < static_cast<int>(walk.size()); ++i)
                if (walk[i].dart >= 0 && walk[i].end < 0 && walk[i].side > 0 &&
                    sgn(S(walk[i].t - b)) < 0)
                  b = walk[i].t;
              S a = max_below(b, zero);
              S c = S(dyadic_between(a, b));
              add("tri-iii", {{pat(c), pw}, {onp, onw}}, {{p00, p10}, {inh0, inh1}});
            }
          } else {
            if (gmin <= ip) {  // X on the left side only
              S b = iL >= 0 ? last_x_t() : one;
              S a = max_below(b, zero);
              S c = S(dyadic_between(a, b));
              add("tri-b1", {{p00, p10}, {inh0, inh1}}, {{pat(c), pw}, {onp, onw}});
            }
            if (gmax >= ip + 1) {  // X wraps around p
              S lo = zero, hi = one;
              for (int i = ip + 1; i <= iL; ++i)
                if (walk[i].end < 0 && sgn(S(walk[i].t - lo)) > 0) lo = walk[i].t;
              for (int i = iL + 1; i < static_cast<int>(walk.size()); ++i)
                if (walk[i].end < 0 && walk[i].side < 0 && sgn(S(walk[i].t - hi)) < 0) hi = walk[i].t;
              if (sgn(S(hi - lo)) > 0) {
                S c = pick_gap(lo, hi, fs);
                add("tri-b2", {{PS{PS::OnPiece, c, one}, p10}, {onp, inh1}}, {{p00, pw}, {inh0, onw}});
              }
            }
          }
        }
    }
    return plans;
  }

  // Two parallel pieces: one on the old line, one offset by θ. Each piece ends
  // at an endpoint of the old segment or on a segment touching it from its side.
  std::vector<Plan<S>> quad_plans() const {
    std::vector<Plan<S>> plans;
    const S zero = num<S>(0), one = num<S>(1);
    for (int nsign : {1, -1}) {
      auto fs = in_frame(false, nsign);
      std::vector<std::pair<S, EndSpec>> up_stops, down_stops;
      EndSpec inh0{EndSpec::Inherit, 0, {}}, inh1{EndSpec::Inherit, 1, {}};
      for (const auto& s : fs) {
        if (s.end >= 0 || s.dart < 0) continue;
        (s.side > 0 ? up_stops : down_stops).push_back({s.t, EndSpec{EndSpec::W, 0, s.w}});
      }
      auto ranges = [&](const std::vector<std::pair<S, EndSpec>>& stops) {
        std::vector<std::pair<S, EndSpec>> lows{{zero, inh0}}, highs{{one, inh1}};
        for (const auto& s : stops) lows.push_back(s), highs.push_back(s);
        std::vector<std::array<std::pair<S, EndSpec>, 2>> out;
        for (const auto& l : lows)
          for (const auto& h : highs)
            if (sgn(S(h.first - l.first)) > 0) out.push_back({l, h});
        return out;
      };
      for (const auto& up : ranges(up_stops))
        for (const auto& down : ranges(down_stops)) {
          using PS = PointSpec<S>;
          PieceSpec<S> pu{{PS{PS::At, zero, one}, PS{PS::At, one, one}}, {up[0].second, up[1].second}};
          PieceSpec<S> pd{{PS{PS::At, zero, zero}, PS{PS::At, one, zero}},
                          {down[0].second, down[1].second}};
          plans.push_back(Plan<S>{"quad", false, nsign, {pu, pd}, {}});
        }
    }
    return plans;
  }

  // The line and target of a piece end. `choice` picks which piece a copy of z means.
  struct Resolved {
    Line<S> line;
    Target target;
    bool free = false;
  };

  std::optional<SystemT<S>> try_plan(const Plan<S>& plan, const Rational& theta, int grid,
                                     std::string* why) const {
    const SegmentT<S>& old = sys_.reps[z_];
    const Frame<S> fr = make_frame(old, plan.rev, plan.nsign);
    const S th(theta);
    std::array<Line<S>, 2> lines;
    Pt<S> wpoint;
    {
      const Pt<S> d = plan.wdir[1] - plan.wdir[0];
      // Offset wpoint about θ|u| off the old line, measured across it: w can
      // run almost parallel to z.
      const double ul = std::sqrt(to_double(dot(fr.u, fr.u)));
      const double across = std::abs(to_double(cross(d, fr.u))) / ul;
      const double lam = std::min(0.5, to_double(th) * ul / std::max(across, 1e-300));
      wpoint = plan.wdir[0] + scale(S(pow2_below(lam)), d);
    }
    // Pieces referring to the other piece go second.
    std::array<int, 2> order{0, 1};
    for (const auto& ps : plan.pieces[0].pts)
      if (ps.kind == PointSpec<S>::OnPiece) order = {1, 0};
    for (int i : order) {
      const auto& pc = plan.pieces[i];
      std::array<Pt<S>, 2> pts;
      for (int j = 0; j < 2; ++j) {
        const auto& ps = pc.pts[j];
        if (ps.kind == PointSpec<S>::At) {
          pts[j] = fr.at(ps.t, S(th * ps.s));
        } else if (ps.kind == PointSpec<S>::OnW) {
          pts[j] = wpoint;
        } else {
          const Pt<S> base = fr.at(ps.t, num<S>(0));
          auto hit = meet(lines[1 - i], Line<S>{base, base + fr.n});
          if (!hit) {
            *why = plan.name + ": pieces parallel";
            return std::nullopt;
          }
          pts[j] = base + scale(ps.s, Pt<S>(*hit - base));
        }
        pts[j] = snap(pts[j], grid);
      }
      if (same(pts[0], pts[1])) {
        *why = plan.name + ": piece collapsed";
        return std::nullopt;
      }
      lines[i] = {pts[0], pts[1]};
    }
    const std::array<int, 2> idx{z_, n_};

    // Ends that refer to a copy of z may land on either piece.
    std::vector<std::pair<int, int>> self;
    for (int i = 0; i < 2; ++i)
      for (int e = 0; e < 2; ++e) {
        const auto& es = plan.pieces[i].ends[e];
        if ((es.kind == EndSpec::Inherit && old.target[es.x].rep == z_) ||
            (es.kind == EndSpec::W && es.w.rep == z_))
          self.push_back({i, e});
      }
    for (int mask = 0; mask < (1 << self.size()); ++mask) {
      auto choice = [&](int i, int e) {
        for (size_t s = 0; s < self.size(); ++s)
          if (self[s] == std::pair<int, int>{i, e}) return (mask >> s) & 1;
        return 0;
      };
      auto resolve = [&](int i, int e) -> Resolved {
        const auto& es = plan.pieces[i].ends[e];
        Target t;
        if (es.kind == EndSpec::Piece) return {lines[1 - i], Target{idx[1 - i], 0}};
        t = es.kind == EndSpec::Inherit ? old.target[es.x] : es.w;
        if (t.free()) return {lines[i], Target{}, true};
        if (t.rep == z_) {
          int c = choice(i, e);
          return {act_.apply(lines[c], t.power), Target{idx[c], act_.norm(t.power)}};
        }
        return {act_.apply(sys_.reps[t.rep].line, t.power), t};
      };
      SystemT<S> cand = sys_;
      cand.reps.resize(n_ + 1);
      bool ok = true;
      for (int i = 0; i < 2 && ok; ++i) {
        SegmentT<S> seg;
        seg.line = lines[i];
        for (int e = 0; e < 2 && ok; ++e) {
          Resolved r = resolve(i, e);
          if (r.free) {
            const Pt<S> base = fr.at(num<S>(e), num<S>(0));
            auto p = meet(lines[i], Line<S>{base, base + fr.n});
            if (!p) {
              ok = false;
              break;
            }
            seg.end[e] = *p;
          } else {
            auto p = meet(lines[i], r.line);
            if (!p) {
              ok = false;
              break;
            }
            seg.end[e] = *p;
          }
          seg.target[e] = r.target;
        }
        cand.reps[idx[i]] = seg;
      }
      if (!ok) {
        *why = plan.name + ": a piece end misses its target line";
        continue;
      }
      // Everything that used to end on z now ends on the first piece it meets.
      for (int r = 0; r < n_ && ok; ++r) {
        if (r == z_) continue;
        for (int x = 0; x < 2 && ok; ++x) {
          const Target t = sys_.reps[r].target[x];
          if (t.rep != z_) continue;
          const Pt<S> far = sys_.reps[r].end[1 - x], e0 = sys_.reps[r].end[x];
          std::optional<Pt<S>> best;
          S best_lam;
          int best_i = -1;
          for (int i = 0; i < 2; ++i) {
            const auto& pc = cand.reps[idx[i]];
            auto p = meet(sys_.reps[r].line, act_.apply(pc.line, t.power));
            if (!p) continue;
            if (!strictly_inside(*p, act_.apply(pc.end[0], t.power), act_.apply(pc.end[1], t.power)))
              continue;
            S lam = dot(*p - far, e0 - far);
            if (sgn(lam) <= 0) continue;
            if (!best || sgn(S(lam - best_lam)) < 0) best = p, best_lam = lam, best_i = i;
          }
          if (!best) {
            ok = false;
            break;
          }
          cand.reps[r].end[x] = *best;
          cand.reps[r].target[x] = Target{idx[best_i], t.power};
        }
      }
      if (!ok) {
        *why = plan.name + ": a contact misses both pieces";
        continue;
      }
      std::string w;
      auto res = accept(cand, expected_, &w);
      if (res) return res;
      *why = plan.name + ": " + w;
    }
    return std::nullopt;
  }

  const SystemT<S>& sys_;
  Action<S> act_;
  const SplitRecord& rec_;
  AnnulusMap expected_;
  int z_ = 0, n_ = 0;
  std::vector<SlotT<S>> slots_;
  Rational theta0_;
  double grid_base_ = 1;
};

template <class S>
SystemT<S> relabel_onto(const SystemT<S>& sys, const AnnulusMap& target) {
  ContactCert cert = extract_impl(sys);
  if (!cert.graph) fail("Internal", "system is disconnected");
  auto phi = oriented_isomorphism(*cert.graph, target);
  if (!phi) fail("IllegalStep", "base graph does not match the base configuration");
  return adopt(sys, cert, target, *phi);
}

template <class S>
int sweep_impl(const SystemT<S>& sys) {
  Action<S> act(sys.group);
  const int n = static_cast<int>(sys.reps.size());
  auto key = [&](const Pt<S>& p) -> std::pair<S, S> {
    if (act.rotation) return {dot(p - act.center, p - act.center), num<S>(0)};
    return {dot(p, rot90(act.tau)), dot(p, act.tau)};
  };
  auto cmp = [&](const Pt<S>& a, const Pt<S>& b) {
    auto ka = key(a), kb = key(b);
    int s = sgn(S(ka.first - kb.first));
    return s != 0 ? s : sgn(S(ka.second - kb.second));
  };
  int longest = 0;
  for (int start = 0; start < n; ++start) {
    int j = start, pw = 0, steps = 0;
    std::optional<Pt<S>> prev;
    for (;;) {
      Pt<S> a = act.apply(sys.reps[j].end[0], pw), b = act.apply(sys.reps[j].end[1], pw);
      int c = cmp(a, b);
      if (c == 0) invalid("sweep: segment level with the sweep direction");
      int x = c > 0 ? 0 : 1;
      const Pt<S>& top = x == 0 ? a : b;
      if (prev && cmp(top, *prev) <= 0) invalid("sweep: functional failed to increase");
      prev = top;
      const Target t = sys.reps[j].target[x];
      if (t.free()) break;
      j = t.rep;
      pw = act.norm(pw + t.power);
      if (++steps > 2 * n + 2) invalid("sweep: walk does not reach a free endpoint");
    }
    longest = std::max(longest, steps);
  }
  return longest;
}

template <class F>
ContactSystem dispatch(const SymmetryGroup& g, F&& f) {
  const std::string ns = g.number_system();
  if (ns == "rational") return ContactSystem(f.template operator()<Rational>());
  if (ns == "sqrt3") return ContactSystem(f.template operator()<QSqrt3>());
  return ContactSystem(f.template operator()<Approx>());
}

void check_pairing(const std::string& base, const SymmetryGroup& g, int level) {
  if (base == "K") {
    if (!g.trivial() && level >= 0 && g.level() != level)
      fail("GroupLevelMismatch", g.describe() + " realizes level " + std::to_string(g.level()) +
                                     ", not " + std::to_string(level));
    return;
  }
  const int need = base == "L" ? 2 : 1;
  if (g.level() != need)
    fail("GroupLevelMismatch", "base " + base + " needs " +
                                   (need == 2 ? std::string("a translation or half turn")
                                              : std::string("a rotation of order at least 3")) +
                                   ", got " + g.describe());
  if (level >= 0 && level != need)
    fail("GroupLevelMismatch", "base " + base + " does not occur at level " + std::to_string(level));
}

}  // namespace

const SymmetryGroup& ContactSystem::group() const {
  return std::visit([](const auto& s) -> const SymmetryGroup& { return s.group; }, v_);
}
const AnnulusMap& ContactSystem::graph() const {
  return std::visit([](const auto& s) -> const AnnulusMap& { return s.graph; }, v_);
}
int ContactSystem::size() const {
  return std::visit([](const auto& s) { return static_cast<int>(s.reps.size()); }, v_);
}
std::vector<std::array<std::array<double, 2>, 2>> ContactSystem::segments_double() const {
  return std::visit(
      [](const auto& s) {
        std::vector<std::array<std::array<double, 2>, 2>> out;
        for (const auto& r : s.reps)
          out.push_back({{{to_double(r.end[0].x), to_double(r.end[0].y)},
                          {to_double(r.end[1].x), to_double(r.end[1].y)}}});
        return out;
      },
      v_);
}

ContactSystem realize_base(const std::string& base, const SymmetryGroup& g) {
  if (base != "K" && base != "L" && base != "M") fail("ParseError", "unknown base '" + base + "'");
  check_pairing(base, g, -1);
  return dispatch(g, [&]<class S>() { return realize_base_impl<S>(base, g); });
}

ContactSystem apply_split_geometry(const ContactSystem& sys, const SplitRecord& step,
                                   const RealizeOptions& opt) {
  return std::visit(
      [&](const auto& s) -> ContactSystem {
        using S = std::decay_t<decltype(s.reps[0].end[0].x)>;
        Splitter<S> sp(s, step);
        return ContactSystem(sp.run(opt));
      },
      sys.variant());
}

ContactSystem apply_triangle_split_geometry(const ContactSystem& sys, const SplitRecord& step,
                                            const RealizeOptions& opt) {
  if (step.kind != SplitRecord::Kind::Triangle) fail("IllegalStep", "not a triangle split");
  return apply_split_geometry(sys, step, opt);
}

ContactSystem apply_quad_split_geometry(const ContactSystem& sys, const SplitRecord& step,
                                        const RealizeOptions& opt) {
  if (step.kind != SplitRecord::Kind::Quad) fail("IllegalStep", "not a quadrilateral split");
  return apply_split_geometry(sys, step, opt);
}

ContactSystem realize(const ConstructionSequence& seq, const SymmetryGroup& g,
                      const RealizeOptions& opt) {
  check_pairing(seq.base, g, seq.level);
  ContactSystem sys = realize_base(seq.base, g);
  if (seq.base_graph) {
    sys = std::visit([&](const auto& s) { return ContactSystem(relabel_onto(s, *seq.base_graph)); },
                     sys.variant());
  }
  for (const auto& st : seq.steps) sys = apply_split_geometry(sys, st, opt);
  return sys;
}

ContactCert extract_quotient_graph(const ContactSystem& sys) {
  return std::visit([](const auto& s) { return extract_impl(s); }, sys.variant());
}

ContactSystem shorten(const ContactSystem& sys, int rep, int end, const Rational& fraction) {
  if (rep < 0 || rep >= sys.size() || end < 0 || end > 1) fail("ParseError", "no such endpoint");
  if (sgn(fraction) <= 0 || sgn(Rational(fraction - 1)) >= 0)
    fail("ParseError", "fraction must lie strictly between 0 and 1");
  return std::visit(
      [&](auto s) -> ContactSystem {
        using S = std::decay_t<decltype(s.reps[0].end[0].x)>;
        auto& seg = s.reps[rep];
        seg.end[end] = seg.end[end] + scale(S(fraction), Pt<S>(seg.end[1 - end] - seg.end[end]));
        seg.target[end] = Target{};
        seg.dart[end] = -1;
        return ContactSystem(std::move(s));
      },
      sys.variant());
}

int sweep_check(const ContactSystem& sys) {
  return std::visit([](const auto& s) { return sweep_impl(s); }, sys.variant());
}

}  // namespace annulus
