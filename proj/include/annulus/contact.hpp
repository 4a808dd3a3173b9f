#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "annulus/map.hpp"
#include "annulus/moves.hpp"
#include "annulus/number.hpp"
#include "annulus/reduction.hpp"

namespace annulus {

struct SymmetryGroup {
  enum class Kind { Translation, Rotation };
  Kind kind = Kind::Translation;
  int order = 0;  // rotations only; 1 is the trivial group
  std::array<Rational, 2> vector{Rational(1), Rational(0)};
  std::array<Rational, 2> center{Rational(0), Rational(0)};

  static SymmetryGroup translation(const Rational& x = 1, const Rational& y = 0);
  static SymmetryGroup rotation(int k, const Rational& cx = 0, const Rational& cy = 0);
  // Parses "translation", "translation:x,y", "rotation:k" or "rotation:k@x,y".
  static SymmetryGroup parse(const std::string& s);

  bool trivial() const { return kind == Kind::Rotation && order == 1; }
  // 2 for translations and half turns, 1 for rotations of order >= 3, 0 if trivial.
  int level() const;
  std::string number_system() const;  // "rational", "sqrt3" or "float"
  std::string describe() const;
};

template <class S>
struct Point {
  S x, y;
};

// The endpoint lies in the interior of g^power applied to representative `rep`.
struct Target {
  int rep = -1;
  int power = 0;
  bool free() const { return rep < 0; }
  bool operator==(const Target&) const = default;
};

template <class S>
struct SegmentT {
  std::array<Point<S>, 2> line;  // two points spanning the supporting line
  std::array<Point<S>, 2> end;   // p, q
  std::array<Target, 2> target;
  std::array<int, 2> dart{-1, -1};  // dart of the system's graph leaving at this endpoint
};

template <class S>
struct SystemT {
  SymmetryGroup group;
  AnnulusMap graph;  // reps[v] realizes graph vertex v
  std::vector<SegmentT<S>> reps;
};

class ContactSystem {
 public:
  using Variant = std::variant<SystemT<Rational>, SystemT<QSqrt3>, SystemT<Approx>>;
  ContactSystem(Variant v) : v_(std::move(v)) {}  // NOLINT

  const SymmetryGroup& group() const;
  const AnnulusMap& graph() const;
  int size() const;
  const Variant& variant() const { return v_; }
  Variant& variant() { return v_; }
  // Endpoints in floating point, one pair per representative.
  std::vector<std::array<std::array<double, 2>, 2>> segments_double() const;

 private:
  Variant v_;
};

struct Contact {
  int rep = 0, end = 0;
  Target target;
  bool operator==(const Contact&) const = default;
};

struct ContactCert {
  std::vector<Contact> contacts;
  std::optional<AnnulusMap> graph;  // absent when the contact graph is disconnected
  int free_ends = 0;
  int window = 0;  // translation copies checked on each side; k for rotations
  std::vector<std::string> log;
};

struct RealizeOptions {
  int budget = 64;  // number of ε values tried, halving each time
};

ContactSystem realize_base(const std::string& base, const SymmetryGroup& g);

// Replaces the segment of the split vertex by two nearby segments so that the
// contact graph becomes apply_split(graph, step).
ContactSystem apply_split_geometry(const ContactSystem& sys, const SplitRecord& step,
                                   const RealizeOptions& opt = {});
ContactSystem apply_triangle_split_geometry(const ContactSystem& sys, const SplitRecord& step,
                                            const RealizeOptions& opt = {});
ContactSystem apply_quad_split_geometry(const ContactSystem& sys, const SplitRecord& step,
                                        const RealizeOptions& opt = {});

ContactSystem realize(const ConstructionSequence& seq, const SymmetryGroup& g,
                      const RealizeOptions& opt = {});

// Contacts, genericity checks and the quotient map, read off the coordinates alone.
ContactCert extract_quotient_graph(const ContactSystem& sys);

// Frees endpoint `end` of `rep` and pulls it toward the other end by `fraction`.
ContactSystem shorten(const ContactSystem& sys, int rep, int end, const Rational& fraction);

// Walks from every segment toward the far end of a fixed monotone functional,
// hopping along contacts. Returns the longest walk; throws ValidationFailed if
// a walk fails to reach a free endpoint.
int sweep_check(const ContactSystem& sys);

}  // namespace annulus
