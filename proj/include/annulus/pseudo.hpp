#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "annulus/contact.hpp"
#include "annulus/map.hpp"
#include "annulus/moves.hpp"
#include "annulus/reduction.hpp"
#include "annulus/sparsity.hpp"

namespace annulus {

// Quotient surface of the plane by the symmetry group: a flat cylinder for a
// translation, a flat cone of angle 2π/k for a rotation of order k >= 2, and
// the plane itself for the trivial group.
struct FlatSurface {
  enum class Kind { Plane, Cylinder, Cone };
  Kind kind = Kind::Cylinder;
  int order = 0;  // cones only

  static FlatSurface plane() { return {Kind::Plane, 1}; }
  static FlatSurface cylinder() { return {Kind::Cylinder, 0}; }
  static FlatSurface cone(int k);
  // "cylinder", "cone:k" or "plane".
  static FlatSurface parse(const std::string& s);
  static FlatSurface of(const SymmetryGroup& g);

  SymmetryGroup group() const;
  int level() const;  // 2 for the cylinder and the cone of angle π, 1 for sharper cones, 0 for the plane
  std::string describe() const;
};

template <class S>
struct PptT {
  SymmetryGroup group;
  AnnulusMap graph;
  std::vector<Point<S>> pos;  // representative of each vertex orbit
  // Edge e runs from pos[tail] to g^power[e] applied to pos[head].
  std::vector<int> power;
};

class PptRealization {
 public:
  using Variant = std::variant<PptT<Rational>, PptT<QSqrt3>, PptT<Approx>>;
  PptRealization(Variant v) : v_(std::move(v)) {}  // NOLINT

  const SymmetryGroup& group() const;
  FlatSurface surface() const { return FlatSurface::of(group()); }
  const AnnulusMap& graph() const;
  const Variant& variant() const { return v_; }
  Variant& variant() { return v_; }
  std::vector<std::array<double, 2>> positions_double() const;
  const std::vector<int>& powers() const;

  std::vector<std::string> log;  // one line per placement

 private:
  Variant v_;
};

struct AngleReport {
  std::vector<int> face_convex;         // per face of the quotient map
  std::vector<std::string> face_kind;   // "cellular", "end", "cone", "outer" or "ends"
  std::vector<char> pointed;            // per vertex
  int c = 0, f = 0, n = 0, m = 0;
};

struct PptOptions {
  int budget = 64;  // placement distances tried, halving each time
};

PptRealization realize_ppt_base(const std::string& base, const FlatSurface& s);
PptRealization realize_ppt_base(const std::string& base, const SymmetryGroup& g);

PptRealization ppt_triangle_split(const PptRealization& r, const SplitRecord& step,
                                  const PptOptions& opt = {});
PptRealization ppt_quad_split(const PptRealization& r, const SplitRecord& step,
                              const PptOptions& opt = {});
PptRealization ppt_split(const PptRealization& r, const SplitRecord& step,
                         const PptOptions& opt = {});

PptRealization realize_ppt(const ConstructionSequence& seq, const FlatSurface& s,
                           const PptOptions& opt = {});
PptRealization realize_ppt(const ConstructionSequence& seq, const SymmetryGroup& g,
                           const PptOptions& opt = {});

// The quotient map read off the coordinates: rotations from the angular order
// of the edges, end faces from extreme points and the cone point. Throws
// CrossingEdges if the drawing is not an embedding.
AnnulusMap ppt_quotient_graph(const PptRealization& r);

// Full check: embedding, quotient map equal to graph(), pointedness, convex
// corners per face and the count identities. Throws CrossingEdges,
// NotPointed, BadFaceCount or ValidationFailed.
AngleReport validate_ppt(const PptRealization& r);

struct RigidityVerdict {
  bool rigid = false;
  SparsityVerdict sparsity;
  std::optional<PptRealization> witness;
  std::string reason;
};

// Minimal rigidity under a rotation group of order k (k != 2) for the quotient
// map of a symmetric planar graph. Rigid maps with edges come with a realized
// witness.
RigidityVerdict decide_symmetric_rigidity(const AnnulusMap& m, int k, const PptOptions& opt = {});

}  // namespace annulus
