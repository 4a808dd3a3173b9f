#pragma once

#include <optional>
#include <string>
#include <vector>

#include "annulus/map.hpp"

namespace annulus {

// Mutable working copy of a map. Edges and vertices are tombstoned on removal
// and compacted by finish(), which keeps the relative order of survivors.
struct MapBuilder {
  std::vector<std::string> names;
  std::vector<char> vdead;
  std::vector<Edge> edges;
  std::vector<char> edead;
  std::vector<std::vector<int>> rot;

  static MapBuilder from(const AnnulusMap& m);
  int vertex(const std::string& name) const;  // -1 if absent
  int edge(const std::string& id) const;      // -1 if absent
  int add_vertex(const std::string& name);
  int add_edge(const std::string& id, int tail, int head);
  int src(int d) const { return (d & 1) ? edges[d >> 1].head : edges[d >> 1].tail; }
  // Insert d at its source vertex right after `after` (ccw); after = -1 means
  // the rotation must be empty or d goes first.
  void insert_after(int after, int d);
  void remove_dart(int d);
  void remove_edge(int e);
  void remove_vertex(int v);
  int position(int d) const;  // index within rotation at src(d)
  int parse_dart(const std::string& s) const;  // -1 if unknown
  std::array<int, 2> any_dart_ends() const;
  // end_darts use this builder's dart numbering; -1 for none.
  AnnulusMap finish(std::array<int, 2> end_darts) const;
};

struct EdgeRef {
  std::string id, tail, head;
};

struct RestoredEdge {
  EdgeRef edge;
  std::optional<std::string> tail_after, head_after;
};

struct NamedCorner {
  std::string vertex;
  std::optional<std::string> in, out;
};

// One vertex split. At `vertex` the contiguous ccw arc `moved` (starting right
// after `after`) is handed to `new_vertex`; the pivot edge joins the two. The
// restored edges are then inserted in order, each dart right after the named
// predecessor. For quadrilateral splits the pivot is temporary and removed at
// the end.
struct SplitRecord {
  enum class Kind { Triangle, Quad };
  Kind kind = Kind::Triangle;
  std::string vertex, new_vertex;
  std::vector<std::string> moved;
  std::optional<std::string> after;
  EdgeRef pivot;
  std::vector<RestoredEdge> restored;
  std::array<NamedCorner, 2> end_faces;
};

AnnulusMap apply_split(const AnnulusMap& h, const SplitRecord& r);

struct Contraction {
  AnnulusMap result;
  SplitRecord record;  // apply_split(result, record) reproduces the input
};

// Contract triangle `face` along the edge of its walk at position pivot_pos,
// deleting the other edge selected by delete_choice (0 = next in walk, 1 = after).
Contraction triangle_contract(const AnnulusMap& g, int face, int pivot_pos, int delete_choice);

// Contract the diagonal of quad `face` joining corners diagonal and diagonal+2,
// deleting one edge from each side pair (del1 picks within the first pair).
Contraction quad_contract(const AnnulusMap& g, int face, int diagonal, int del1, int del2);

enum class FaceClass {
  NonDegenerate,
  Quad232_vertexRepeat,
  Quad231_loopA,
  Quad231_loopPlusEdge,
  Tri231_loop,
};

std::string to_string(FaceClass c);
FaceClass classify_face(const AnnulusMap& m, int face);

// Add edge `id` from c1.vertex to c2.vertex through the face owning both corners.
AnnulusMap insert_chord(const AnnulusMap& m, const Corner& c1, const Corner& c2,
                        const std::string& id);

NamedCorner name_corner(const AnnulusMap& m, const Corner& c);
Corner resolve_corner(const AnnulusMap& m, const NamedCorner& c);

// Edge id not yet used in m, of the form prefix + number.
std::string fresh_edge_id(const AnnulusMap& m, const std::string& prefix);
std::string fresh_vertex_name(const AnnulusMap& m, const std::string& prefix);

// Name-based structural equality (independent of vertex/edge storage order).
bool same_by_names(const AnnulusMap& a, const AnnulusMap& b);

}  // namespace annulus
