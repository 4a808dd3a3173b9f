#include "annulus/sparsity.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace annulus {

namespace {

using Mask = std::uint64_t;

struct Masks {
  std::vector<Mask> ends;  // vertex mask of each edge
  explicit Masks(const AnnulusMap& m) {
    for (const auto& e : m.edges()) ends.push_back((Mask{1} << e.tail) | (Mask{1} << e.head));
  }
  Mask vertices_of(Mask edges) const {
    Mask v = 0;
    for (Mask r = edges; r; r &= r - 1) v |= ends[std::countr_zero(r)];
    return v;
  }
  Mask induced(Mask verts) const {
    Mask out = 0;
    for (size_t e = 0; e < ends.size(); ++e)
      if ((ends[e] & ~verts) == 0) out |= Mask{1} << e;
    return out;
  }
};

EdgeSubset to_subset(const AnnulusMap& m, Mask edges) {
  EdgeSubset s = m.empty_subset();
  for (int e = 0; e < m.num_edges(); ++e) s.member[e] = (edges >> e) & 1;
  return s;
}

int fcount(const Masks& mk, Mask edges) {
  return 2 * std::popcount(mk.vertices_of(edges)) - std::popcount(edges);
}

void require_small(const AnnulusMap& m) {
  if (m.num_edges() > 64 || m.num_vertices() > 24)
    fail("TooLarge", "vertex-subset checker supports at most 24 vertices and 64 edges");
}

bool full_tight(const AnnulusMap& m, int level) {
  if (m.num_edges() == 0) return m.num_vertices() == 1;
  int f = m.f_count();
  return f == level || (m.balanced() && f == 3);
}

}  // namespace

bool violates(const AnnulusMap& m, const EdgeSubset& s, int level) {
  if (s.size() == 0) return false;
  int f = m.f_count(s);
  return f < level || (f < 3 && m.is_balanced(s));
}

SparsityVerdict oracle_sparse(const AnnulusMap& m, int level, int max_edges) {
  const int E = m.num_edges();
  if (E > max_edges) fail("TooLarge", "oracle bound exceeded: " + std::to_string(E) + " edges");
  std::vector<int> order(E);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return m.edge(a).id < m.edge(b).id; });
  Masks mk(m);
  SparsityVerdict v;
  v.level = level;
  for (Mask c = 1; c < (Mask{1} << E); ++c) {
    Mask edges = 0;
    for (int i = 0; i < E; ++i)
      if ((c >> i) & 1) edges |= Mask{1} << order[i];
    int f = fcount(mk, edges);
    if (f < level || (f < 3 && m.is_balanced_mask(edges))) {
      v.sparse = false;
      v.violator = to_subset(m, edges);
      return v;
    }
  }
  v.tight = full_tight(m, level);
  return v;
}

SparsityVerdict check_sparse(const AnnulusMap& m, int level) {
  require_small(m);
  const int V = m.num_vertices();
  Masks mk(m);
  SparsityVerdict v;
  v.level = level;
  auto found = [&](Mask edges) {
    v.sparse = false;
    v.violator = to_subset(m, edges);
    return v;
  };
  for (Mask X = 1; X < (Mask{1} << V); ++X) {
    Mask ex = mk.induced(X);
    if (!ex) continue;
    int f = 2 * std::popcount(X) - std::popcount(ex);
    if (f < level) return found(ex);
    if (f >= 3) continue;
    if (m.is_balanced_mask(ex)) return found(ex);
    // At level 1 a balanced violator may sit one edge below E(X).
    if (level == 1 && f == 1) {
      for (Mask r = ex; r; r &= r - 1) {
        Mask h = ex & ~(r & -r);
        if (h && mk.vertices_of(h) == X && m.is_balanced_mask(h)) return found(h);
      }
    }
  }
  v.tight = full_tight(m, level);
  return v;
}

bool subset_is_tight(const AnnulusMap& m, const EdgeSubset& s, int level) {
  if (s.size() == 0) return m.subset_vertices(s).size() == 1;
  int f = m.f_count(s);
  return f == level || (f == 3 && m.is_balanced(s));
}

EdgeSubset max_tight_subgraph(const AnnulusMap& m, int level, int seed_edge) {
  require_small(m);
  const int V = m.num_vertices();
  Masks mk(m);
  const Mask seed = Mask{1} << seed_edge;
  const Mask need = mk.ends[seed_edge];
  Mask best = 0;
  auto consider = [&](Mask h) {
    if (std::popcount(h) > std::popcount(best)) best = h;
  };
  for (Mask X = 1; X < (Mask{1} << V); ++X) {
    if ((X & need) != need) continue;
    Mask ex = mk.induced(X);
    if (mk.vertices_of(ex) != X) continue;
    int f = 2 * std::popcount(X) - std::popcount(ex);
    bool bal = m.is_balanced_mask(ex);
    if (f == level || (f == 3 && bal)) consider(ex);
    if (f >= 3) continue;
    // Balanced tight subsets with f = 3 drop 3 - f edges from E(X).
    std::vector<int> opt;
    for (Mask r = ex & ~seed; r; r &= r - 1) opt.push_back(std::countr_zero(r));
    if (f == 2) {
      for (int a : opt) {
        Mask h = ex & ~(Mask{1} << a);
        if (mk.vertices_of(h) == X && m.is_balanced_mask(h)) consider(h);
      }
    } else if (f == 1) {
      for (size_t i = 0; i < opt.size(); ++i)
        for (size_t j = i + 1; j < opt.size(); ++j) {
          Mask h = ex & ~(Mask{1} << opt[i]) & ~(Mask{1} << opt[j]);
          if (mk.vertices_of(h) == X && m.is_balanced_mask(h)) consider(h);
        }
    }
  }
  if (!best) fail("Internal", "seed edge lies in no tight subgraph; input not sparse?");
  EdgeSubset out = to_subset(m, best);
  for (int e = 0; e < m.num_edges(); ++e) {
    if ((best >> e) & 1) continue;
    EdgeSubset ext = out;
    ext.member[e] = 1;
    if (subset_is_tight(m, ext, level)) fail("Internal", "tight subgraph is not maximal");
  }
  return out;
}

}  // namespace annulus
