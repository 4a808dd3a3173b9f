#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "annulus/error.hpp"

namespace annulus {

// Dart d of edge e: d = 2e leaves the tail ("e+"), d = 2e+1 leaves the head ("e-").
inline int alpha(int d) { return d ^ 1; }
inline int edge_of(int d) { return d >> 1; }
inline int dart(int e, bool plus) { return 2 * e + (plus ? 0 : 1); }

struct Edge {
  std::string id;
  int tail = 0;
  int head = 0;
};

// A face corner at `vertex`: the walk arrives along `in` and leaves along `out`.
// For the edgeless map both darts are -1.
struct Corner {
  int vertex = 0;
  int in = -1;
  int out = -1;
};

struct FaceWalk {
  std::vector<Corner> corners;
  int degree() const { return static_cast<int>(corners.size()); }
  bool degenerate() const;
};

// Edge selector over a parent map. Vertices spanned by members plus extras.
struct EdgeSubset {
  std::vector<char> member;
  std::vector<int> extra_vertices;

  int size() const;
  std::vector<int> edges() const;
};

class AnnulusMap {
 public:
  AnnulusMap() = default;

  // rotation[v] lists the darts leaving v in counterclockwise order.
  // end_darts[i] is a dart on the i-th end face (the face to its left), or -1
  // when the map has no edges.
  static AnnulusMap build(std::vector<std::string> vertices, std::vector<Edge> edges,
                          std::vector<std::vector<int>> rotation, std::array<int, 2> end_darts);

  // Same, with end faces given by witness corners.
  static AnnulusMap build_with_corners(std::vector<std::string> vertices,
                                       std::vector<Edge> edges,
                                       std::vector<std::vector<int>> rotation,
                                       std::array<Corner, 2> ends);

  int num_vertices() const { return static_cast<int>(names_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_darts() const { return 2 * num_edges(); }
  int num_faces() const { return static_cast<int>(face_darts_.size()); }

  const std::vector<std::string>& vertex_names() const { return names_; }
  const std::string& vertex_name(int v) const { return names_[v]; }
  int vertex_index(const std::string& name) const;  // -1 if absent
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }
  int edge_index(const std::string& id) const;  // -1 if absent
  const std::vector<std::vector<int>>& rotation() const { return rot_; }

  int src(int d) const { return (d & 1) ? edges_[d >> 1].head : edges_[d >> 1].tail; }
  int dst(int d) const { return src(alpha(d)); }
  int ccw_next(int d) const;
  int ccw_prev(int d) const;
  // Successor of d along the boundary walk of the face to the left of d.
  int face_next(int d) const { return ccw_prev(alpha(d)); }
  int face_prev(int d) const { return alpha(ccw_next(d)); }
  int face_of(int d) const { return dart_face_[d]; }
  int degree(int v) const { return static_cast<int>(rot_[v].size()); }

  const std::vector<std::vector<int>>& face_darts() const { return face_darts_; }
  std::vector<FaceWalk> faces() const;
  FaceWalk face_walk(int f) const;
  Corner corner_of(int out_dart) const { return {src(out_dart), face_prev(out_dart), out_dart}; }
  std::array<int, 2> end_faces() const { return ends_; }
  std::array<Corner, 2> end_corners() const;
  // A dart on end face i (or -1 when edgeless).
  int end_dart(int i) const;

  // f(D) = 2|V| - |E| of the whole map.
  int f_count() const { return 2 * num_vertices() - num_edges(); }
  bool balanced() const { return ends_[0] == ends_[1]; }
  bool is_loop(int e) const { return edges_[e].tail == edges_[e].head; }

  // Gains derived from a dual path between the end faces, normalized so that a
  // breadth-first spanning tree from vertex 0 carries gain 0. gain[e] is read
  // in the tail-to-head direction.
  const std::vector<int>& edge_gains() const { return gains_; }

  // Subset queries.
  EdgeSubset full_subset() const;
  EdgeSubset empty_subset() const;
  std::vector<int> subset_vertices(const EdgeSubset& s) const;
  int f_count(const EdgeSubset& s) const;
  // Face test: the end faces stay connected across non-member edges.
  bool is_balanced(const EdgeSubset& s) const;
  // Gain test: every cycle of the subset has zero gain.
  bool is_balanced_by_gains(const EdgeSubset& s) const;
  // Fast face test for maps with at most 64 edges.
  bool is_balanced_mask(std::uint64_t members) const;
  // Sum of signed gains along a closed walk of darts.
  int walk_gain(const std::vector<int>& darts) const;
  int dart_gain(int d) const { return (d & 1) ? -gains_[d >> 1] : gains_[d >> 1]; }

  // Same map with every rotation reversed (mirror image of the annulus).
  AnnulusMap mirrored() const;
  // Same map with end faces replaced.
  AnnulusMap with_end_darts(std::array<int, 2> end_darts) const;

  bool connected() const;

  // Structural equality: names, edges, rotations (as cyclic sequences) and end faces.
  bool same_as(const AnnulusMap& o) const;

 private:
  void trace();
  void derive_gains();

  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> rot_;
  std::vector<int> pos_;  // index of each dart inside the rotation of its source
  std::vector<int> dart_face_;
  std::vector<std::vector<int>> face_darts_;
  std::array<int, 2> ends_{0, 0};
  std::vector<int> gains_;
};

// Isomorphism up to orientation reversal and swapping of the two ends.
bool isomorphic(const AnnulusMap& a, const AnnulusMap& b);
// Orientation-preserving dart bijection a -> b (ends may swap), if any.
std::optional<std::vector<int>> oriented_isomorphism(const AnnulusMap& a, const AnnulusMap& b);

// 3 f1 + 2 f2 + f3 = 8 - 2 f(G) + sum_{i>=5} (i-4) f_i.
bool euler_check(const AnnulusMap& m);

std::string dart_string(const AnnulusMap& m, int d);
int parse_dart(const AnnulusMap& m, const std::string& s);  // -1 if unknown

}  // namespace annulus
