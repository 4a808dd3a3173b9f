#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "annulus/map.hpp"

namespace fx {

using annulus::AnnulusMap;
using annulus::Edge;

struct StripEdge {
  int u, v, wrap;  // v is reached in the cover at v + (0, 2 * wrap)
};

// Map drawn on the strip 0 <= y < 2 with y = 0 and y = 2 identified. Rotations
// come from edge directions; ends from faces whose walk winds. When nothing
// winds, both ends go to the largest face.
inline AnnulusMap strip_map(const std::vector<std::pair<double, double>>& pos,
                            const std::vector<StripEdge>& es) {
  const int V = static_cast<int>(pos.size());
  std::vector<std::string> names;
  for (int v = 0; v < V; ++v) names.push_back("v" + std::to_string(v + 1));
  std::vector<Edge> edges;
  std::vector<std::vector<std::pair<double, int>>> at(V);
  for (size_t i = 0; i < es.size(); ++i) {
    const auto& e = es[i];
    edges.push_back({"e" + std::to_string(i + 1), e.u, e.v});
    double dx = pos[e.v].first - pos[e.u].first;
    double dy = pos[e.v].second + 2.0 * e.wrap - pos[e.u].second;
    at[e.u].push_back({std::atan2(dy, dx), annulus::dart(static_cast<int>(i), true)});
    at[e.v].push_back({std::atan2(-dy, -dx), annulus::dart(static_cast<int>(i), false)});
  }
  std::vector<std::vector<int>> rot(V);
  for (int v = 0; v < V; ++v) {
    std::sort(at[v].begin(), at[v].end());
    for (auto& [a, d] : at[v]) rot[v].push_back(d);
  }
  AnnulusMap probe =
      AnnulusMap::build(names, edges, rot, edges.empty() ? std::array<int, 2>{-1, -1}
                                                         : std::array<int, 2>{0, 0});
  std::vector<int> ends;
  int largest = 0;
  for (int f = 0; f < probe.num_faces(); ++f) {
    int w = 0;
    for (int d : probe.face_darts()[f]) w += (d & 1) ? -es[d >> 1].wrap : es[d >> 1].wrap;
    if (w != 0) ends.push_back(probe.face_darts()[f][0]);
    if (probe.face_darts()[f].size() > probe.face_darts()[largest].size()) largest = f;
  }
  if (ends.empty()) ends = {probe.face_darts()[largest][0], probe.face_darts()[largest][0]};
  return probe.with_end_darts({ends.at(0), ends.at(1)});
}

inline AnnulusMap K() {
  return AnnulusMap::build({"a", "b"}, {{"e1", 0, 1}}, {{0}, {1}}, {0, 0});
}

inline AnnulusMap L() {
  return AnnulusMap::build({"a", "b"}, {{"e1", 0, 1}, {"e2", 0, 1}}, {{0, 2}, {1, 3}}, {0, 2});
}

inline AnnulusMap M() { return AnnulusMap::build({"a"}, {{"e1", 0, 0}}, {{0, 1}}, {0, 1}); }

inline AnnulusMap point() { return AnnulusMap::build({"a"}, {}, {{}}, {-1, -1}); }

// Two triangles sharing a diagonal, drawn without winding.
inline AnnulusMap fig_a() {
  return strip_map({{1.5, 1.7}, {2, 1}, {1.5, 0.3}, {1, 1}},
                   {{0, 1, 0}, {1, 2, 0}, {2, 3, 0}, {3, 0, 0}, {1, 3, 0}});
}

// Unbalanced (2,3,2)-tight: 4 vertices, 6 edges.
inline AnnulusMap fig_b() {
  return strip_map({{1.5, 0}, {2, 1}, {1.5, 1.5}, {1, 1}},
                   {{0, 1, 0}, {1, 0, 1}, {2, 3, 1}, {2, 1, 0}, {2, 3, 0}, {3, 0, 0}});
}

// Unbalanced (2,3,1)-tight: doubled path plus a winding loop.
inline AnnulusMap fig_c() {
  return strip_map({{1.5, 0}, {2, 1}, {1, 1}},
                   {{0, 1, 0}, {2, 2, 1}, {1, 0, 1}, {2, 0, 1}, {2, 0, 0}});
}

}  // namespace fx

namespace fx {

// Two winding digons sharing v2: the face between them is a quad v1 v2 v3 v2.
inline AnnulusMap quad_vertex_repeat() {
  return strip_map({{1, 1}, {2, 1}, {3, 1}}, {{0, 1, 0}, {0, 1, 1}, {1, 2, 0}, {1, 2, 1}});
}

// Winding loops at v1 and v2 joined by one edge.
inline AnnulusMap quad_loops() {
  return strip_map({{1, 1}, {2, 1}}, {{0, 0, 1}, {0, 1, 0}, {1, 1, 1}});
}

// Winding loop at v1 next to a winding digon v1 v2: a triangle with a loop side.
inline AnnulusMap tri_loop() {
  return strip_map({{1, 1}, {2, 1}}, {{0, 0, 1}, {0, 1, 0}, {0, 1, 1}});
}

// Square bounding a disc.
inline AnnulusMap square() {
  return strip_map({{1, 0.5}, {2, 0.5}, {2, 1.5}, {1, 1.5}},
                   {{0, 1, 0}, {1, 2, 0}, {2, 3, 0}, {3, 0, 0}});
}

}  // namespace fx
