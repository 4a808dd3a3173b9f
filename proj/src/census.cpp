#include "annulus/census.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "annulus/moves.hpp"

namespace annulus {

namespace {

std::vector<int> code_from(const AnnulusMap& m, int root) {
  const int D = m.num_darts();
  std::vector<int> label(D, -1), order;
  label[root] = 0;
  order.push_back(root);
  for (size_t i = 0; i < order.size(); ++i) {
    int d = order[i];
    for (int n : {alpha(d), m.ccw_next(d)})
      if (label[n] < 0) {
        label[n] = static_cast<int>(order.size());
        order.push_back(n);
      }
  }
  std::vector<int> code;
  code.reserve(2 * D + 2);
  for (int d : order) {
    code.push_back(label[alpha(d)]);
    code.push_back(label[m.ccw_next(d)]);
  }
  std::array<int, 2> ends{};
  for (int k = 0; k < 2; ++k) {
    int best = D;
    for (int d : m.face_darts()[m.end_faces()[k]]) best = std::min(best, label[d]);
    ends[k] = best;
  }
  std::sort(ends.begin(), ends.end());
  code.push_back(ends[0]);
  code.push_back(ends[1]);
  return code;
}

std::vector<int> best_code(const AnnulusMap& m) {
  std::vector<int> best;
  for (int r = 0; r < m.num_darts(); ++r) {
    auto c = code_from(m, r);
    if (best.empty() || c < best) best = std::move(c);
  }
  return best;
}

// All ways to add one edge: a pendant edge to a new vertex at any corner, or a
// chord between any two corners of a face (including loops).
std::vector<AnnulusMap> extensions(const AnnulusMap& m) {
  std::vector<AnnulusMap> out;
  std::string id = "e" + std::to_string(m.num_edges() + 1);
  std::string vname = "v" + std::to_string(m.num_vertices() + 1);
  std::vector<std::vector<Corner>> corners;
  if (m.num_edges() == 0) {
    corners.push_back({{0, -1, -1}});
  } else {
    for (int f = 0; f < m.num_faces(); ++f) {
      corners.emplace_back();
      for (int d : m.face_darts()[f]) corners.back().push_back(m.corner_of(d));
    }
  }
  for (const auto& cs : corners) {
    for (const auto& c : cs) {
      MapBuilder b = MapBuilder::from(m);
      int v = b.add_vertex(vname);
      int e = b.add_edge(id, c.vertex, v);
      b.insert_after(c.out, dart(e, true));
      b.rot[v].push_back(dart(e, false));
      out.push_back(b.finish({dart(e, true), dart(e, true)}));
    }
    for (size_t i = 0; i < cs.size(); ++i)
      for (size_t j = i; j < cs.size(); ++j) out.push_back(insert_chord(m, cs[i], cs[j], id));
  }
  return out;
}

}  // namespace

std::vector<int> canonical_code(const AnnulusMap& m) {
  if (m.num_edges() == 0) return {-1, m.num_vertices()};
  auto a = best_code(m), b = best_code(m.mirrored());
  return std::min(a, b);
}

std::vector<AnnulusMap> enumerate_maps(int max_edges) {
  // Plane maps without ends, grown one edge at a time. Ends are pinned to face
  // 0 only as a placeholder; the per-level dedupe ignores them.
  auto plain_code = [](const AnnulusMap& m) {
    if (m.num_edges() == 0) return std::vector<int>{-1};
    auto strip = [](const AnnulusMap& x) {
      std::vector<int> best;
      for (int r = 0; r < x.num_darts(); ++r) {
        auto c = code_from(x, r);
        c.resize(c.size() - 2);
        if (best.empty() || c < best) best = std::move(c);
      }
      return best;
    };
    return std::min(strip(m), strip(m.mirrored()));
  };
  std::vector<AnnulusMap> level{AnnulusMap::build({"v1"}, {}, {{}}, {-1, -1})};
  std::vector<AnnulusMap> result;
  std::set<std::vector<int>> seen;
  for (int e = 0;; ++e) {
    for (const auto& m : level) {
      if (m.num_edges() == 0) {
        result.push_back(m);
        continue;
      }
      for (int i = 0; i < m.num_faces(); ++i)
        for (int j = i; j < m.num_faces(); ++j) {
          AnnulusMap x = m.with_end_darts({m.face_darts()[i][0], m.face_darts()[j][0]});
          if (seen.insert(canonical_code(x)).second) result.push_back(x);
        }
    }
    if (e == max_edges) break;
    std::set<std::vector<int>> next_seen;
    std::vector<AnnulusMap> next;
    for (const auto& m : level)
      for (auto& x : extensions(m))
        if (next_seen.insert(plain_code(x)).second) next.push_back(std::move(x));
    level = std::move(next);
  }
  return result;
}

AnnulusMap random_map(int n_edges, std::mt19937_64& rng) {
  auto pick = [&](int k) { return std::uniform_int_distribution<int>(0, k - 1)(rng); };
  AnnulusMap m = AnnulusMap::build({"v1"}, {}, {{}}, {-1, -1});
  for (int e = 0; e < n_edges; ++e) {
    std::string id = "e" + std::to_string(e + 1);
    if (m.num_edges() == 0) {
      if (pick(2)) {
        m = insert_chord(m, {0, -1, -1}, {0, -1, -1}, id);
      } else {
        m = AnnulusMap::build({"v1", "v2"}, {{id, 0, 1}}, {{0}, {1}}, {0, 0});
      }
      continue;
    }
    int f = pick(m.num_faces());
    const auto& fd = m.face_darts()[f];
    Corner c1 = m.corner_of(fd[pick(static_cast<int>(fd.size()))]);
    if (pick(3) == 0) {
      MapBuilder b = MapBuilder::from(m);
      int v = b.add_vertex("v" + std::to_string(m.num_vertices() + 1));
      int ne = b.add_edge(id, c1.vertex, v);
      b.insert_after(c1.out, dart(ne, true));
      b.rot[v].push_back(dart(ne, false));
      m = b.finish({m.end_dart(0), m.end_dart(1)});
    } else {
      Corner c2 = m.corner_of(fd[pick(static_cast<int>(fd.size()))]);
      m = insert_chord(m, c1, c2, id);
    }
  }
  if (m.num_edges() == 0) return m;
  int a = pick(m.num_faces()), b = pick(m.num_faces());
  return m.with_end_darts({m.face_darts()[a][0], m.face_darts()[b][0]});
}

}  // namespace annulus
