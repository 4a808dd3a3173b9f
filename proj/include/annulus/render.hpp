#pragma once

#include <string>

#include "annulus/contact.hpp"
#include "annulus/map.hpp"
#include "annulus/pseudo.hpp"

namespace annulus {

struct RenderOptions {
  // Group copies drawn. Translations lay copies side by side along the
  // period; rotations draw min(copies, k) sectors. 1 shows the fundamental
  // domain only.
  int copies = 3;
  bool labels = true;
};

// Deterministic SVG documents. Translations are drawn as a horizontal strip
// whose dashed vertical lines are the identified boundary; rotations as
// sectors around the marked cone point.
std::string render_svg(const ContactSystem& s, const RenderOptions& opt = {});
std::string render_svg(const PptRealization& r, const RenderOptions& opt = {});
// Maps carry no coordinates: a tight map is drawn through its pointed
// pseudotriangulation on the cylinder (level 2 or balanced) or on the cone
// of order 4. Other maps raise NotTight.
std::string render_svg(const AnnulusMap& m, const RenderOptions& opt = {});

}  // namespace annulus
