#include "annulus/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "annulus/error.hpp"
#include "annulus/sparsity.hpp"

namespace annulus {

namespace {

using P = std::array<double, 2>;

struct Frame {
  bool rotation = false;
  int k = 1;
  P tau{1, 0}, center{0, 0};

  explicit Frame(const SymmetryGroup& g) {
    rotation = g.kind == SymmetryGroup::Kind::Rotation;
    k = rotation ? g.order : 1;
    tau = {g.vector[0].get_d(), g.vector[1].get_d()};
    center = {g.center[0].get_d(), g.center[1].get_d()};
  }

  P apply(const P& p, int t) const {
    if (!rotation) return {p[0] + t * tau[0], p[1] + t * tau[1]};
    const double a = 2 * M_PI * t / k, c = std::cos(a), s = std::sin(a);
    const double x = p[0] - center[0], y = p[1] - center[1];
    return {center[0] + c * x - s * y, center[1] + s * x + c * y};
  }

  // Screen coordinates before scaling: the period runs left to right.
  P screen(const P& p) const {
    if (rotation) return {p[0] - center[0], -(p[1] - center[1])};
    const double l2 = tau[0] * tau[0] + tau[1] * tau[1];
    return {(p[0] * tau[0] + p[1] * tau[1]) / l2, -(p[1] * tau[0] - p[0] * tau[1]) / l2};
  }

  int copies(int asked) const { return rotation ? std::clamp(asked, 1, k) : std::max(asked, 1); }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", std::fabs(v) < 5e-4 ? 0.0 : v);
  return buf;
}

struct Line {
  P a, b;
  bool primary;
};

struct Dot {
  P at;
  bool filled;
};

struct Label {
  P at;
  std::string text;
};

class Canvas {
 public:
  explicit Canvas(const Frame& f) : f_(f) {}

  // Translations are clipped to the strip [0, copies] along the period.
  void clip_to(int copies) { strip_ = copies; }

  void line(const P& a, const P& b, bool primary) {
    P p = f_.screen(a), q = f_.screen(b);
    if (strip_ > 0) {
      if (p[0] > q[0]) std::swap(p, q);
      const double lo = 0, hi = strip_;
      if (q[0] < lo || p[0] > hi) return;
      auto at = [&](double x) {
        const double t = q[0] == p[0] ? 0 : (x - p[0]) / (q[0] - p[0]);
        return P{x, p[1] + t * (q[1] - p[1])};
      };
      if (p[0] < lo) p = at(lo);
      if (q[0] > hi) q = at(hi);
    }
    lines_.push_back({p, q, primary});
  }
  void dot(const P& p, bool filled) {
    const P s = f_.screen(p);
    if (inside(s)) dots_.push_back({s, filled});
  }
  void label(const P& p, const std::string& text) {
    const P s = f_.screen(p);
    if (inside(s)) labels_.push_back({s, text});
  }

  std::string finish(int copies) const {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    bool first = true;
    auto grow = [&](const P& p) {
      if (first) {
        x0 = x1 = p[0];
        y0 = y1 = p[1];
        first = false;
      }
      x0 = std::min(x0, p[0]);
      x1 = std::max(x1, p[0]);
      y0 = std::min(y0, p[1]);
      y1 = std::max(y1, p[1]);
    };
    for (const auto& l : lines_) {
      grow(l.a);
      grow(l.b);
    }
    for (const auto& d : dots_) grow(d.at);
    std::vector<P> rays;
    if (!f_.rotation) {
      grow({0, y0});
      grow({static_cast<double>(copies), y1});
    } else {
      double r = 0;
      for (const auto& l : lines_) r = std::max({r, std::hypot(l.a[0], l.a[1]), std::hypot(l.b[0], l.b[1])});
      for (const auto& d : dots_) r = std::max(r, std::hypot(d.at[0], d.at[1]));
      r = r > 0 ? 1.1 * r : 1;
      const int n = copies < f_.k ? copies + 1 : f_.k;
      for (int t = 0; t < n; ++t) {
        const double a = 2 * M_PI * t / f_.k;
        rays.push_back({r * std::cos(a), -r * std::sin(a)});
        grow(rays.back());
      }
      grow({0, 0});
    }
    const double span = std::max({x1 - x0, y1 - y0, 1e-9});
    const double scale = 400 / span;
    const double pad = 20;
    auto X = [&](double x) { return fmt((x - x0) * scale + pad); };
    auto Y = [&](double y) { return fmt((y - y0) * scale + pad); };
    const double w = (x1 - x0) * scale + 2 * pad, h = (y1 - y0) * scale + 2 * pad;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << fmt(w) << ' ' << fmt(h)
       << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(h) << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
       << "\" fill=\"white\"/>\n";
    os << "<g stroke=\"#888\" stroke-dasharray=\"6 4\" stroke-width=\"1\">\n";
    if (!f_.rotation) {
      for (int t = 0; t <= copies; ++t)
        os << "<line x1=\"" << X(t) << "\" y1=\"" << Y(y0) << "\" x2=\"" << X(t) << "\" y2=\"" << Y(y1)
           << "\"/>\n";
    }
    for (const auto& e : rays)
      os << "<line x1=\"" << X(0) << "\" y1=\"" << Y(0) << "\" x2=\"" << X(e[0]) << "\" y2=\"" << Y(e[1])
         << "\"/>\n";
    os << "</g>\n";
    if (f_.rotation)
      os << "<path d=\"M " << X(0) << ' ' << Y(0) << " m -5 -5 l 10 10 m 0 -10 l -10 10\" stroke=\"#c00\" "
            "stroke-width=\"1.5\" fill=\"none\"/>\n";
    os << "<g stroke-linecap=\"round\">\n";
    for (const auto& l : lines_)
      os << "<line x1=\"" << X(l.a[0]) << "\" y1=\"" << Y(l.a[1]) << "\" x2=\"" << X(l.b[0]) << "\" y2=\""
         << Y(l.b[1]) << "\" stroke=\"" << (l.primary ? "#000" : "#999") << "\" stroke-width=\"2\"/>\n";
    os << "</g>\n";
    for (const auto& d : dots_)
      os << "<circle cx=\"" << X(d.at[0]) << "\" cy=\"" << Y(d.at[1]) << "\" r=\"3.5\" fill=\""
         << (d.filled ? "#000" : "white") << "\" stroke=\"#000\" stroke-width=\"1\"/>\n";
    for (const auto& l : labels_)
      os << "<text x=\"" << X(l.at[0]) << "\" y=\"" << fmt((l.at[1] - y0) * scale + pad - 6)
         << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << l.text
         << "</text>\n";
    os << "</svg>\n";
    return os.str();
  }

 private:
  bool inside(const P& s) const { return strip_ <= 0 || (s[0] >= 0 && s[0] < strip_); }

  const Frame& f_;
  int strip_ = 0;
  std::vector<Line> lines_;
  std::vector<Dot> dots_;
  std::vector<Label> labels_;
};

// Group powers to draw so that every piece of the visible region is covered.
std::pair<int, int> power_range(const Frame& f, int n, double reach) {
  if (f.rotation) return {0, n};
  const int w = static_cast<int>(std::ceil(reach)) + 1;
  return {-w, n + w};
}

double reach_of(const Frame& f, const std::vector<std::pair<P, P>>& segs) {
  double r = 0;
  for (const auto& [a, b] : segs) {
    const P p = f.screen(a), q = f.screen(b);
    r = std::max({r, std::fabs(p[0]), std::fabs(q[0])});
  }
  return r;
}

}  // namespace

std::string render_svg(const ContactSystem& s, const RenderOptions& opt) {
  const Frame f(s.group());
  Canvas c(f);
  const int n = f.copies(opt.copies);
  const auto segs = s.segments_double();
  std::vector<std::pair<P, P>> pieces;
  for (const auto& sg : segs) pieces.push_back({sg[0], sg[1]});
  const auto [t0, t1] = power_range(f, n, reach_of(f, pieces));
  if (!f.rotation) c.clip_to(n);
  ContactCert cert = extract_quotient_graph(s);
  std::vector<std::array<char, 2>> touching(segs.size(), {0, 0});
  for (const auto& ct : cert.contacts) touching[ct.rep][ct.end] = 1;
  for (int t = t0; t < t1; ++t)
    for (size_t i = 0; i < segs.size(); ++i) {
      const P a = f.apply(segs[i][0], t), b = f.apply(segs[i][1], t);
      c.line(a, b, t == 0 || !f.rotation);
      c.dot(a, touching[i][0]);
      c.dot(b, touching[i][1]);
      if (opt.labels && t == 0)
        c.label({(a[0] + b[0]) / 2, (a[1] + b[1]) / 2}, s.graph().vertex_name(static_cast<int>(i)));
    }
  return c.finish(n);
}

std::string render_svg(const PptRealization& r, const RenderOptions& opt) {
  const Frame f(r.group());
  Canvas c(f);
  const int n = f.copies(opt.copies);
  const auto pos = r.positions_double();
  const auto& pw = r.powers();
  const AnnulusMap& g = r.graph();
  std::vector<std::pair<P, P>> pieces;
  for (int e = 0; e < g.num_edges(); ++e)
    pieces.push_back({pos[g.edge(e).tail], f.apply(pos[g.edge(e).head], pw[e])});
  const auto [t0, t1] = power_range(f, n, reach_of(f, pieces));
  if (!f.rotation) c.clip_to(n);
  for (int t = t0; t < t1; ++t) {
    for (int e = 0; e < g.num_edges(); ++e)
      c.line(f.apply(pos[g.edge(e).tail], t), f.apply(pos[g.edge(e).head], t + pw[e]),
             t == 0 || !f.rotation);
    for (int v = 0; v < g.num_vertices(); ++v) {
      c.dot(f.apply(pos[v], t), t == 0 || !f.rotation);
      if (opt.labels && t == 0) c.label(pos[v], g.vertex_name(v));
    }
  }
  return c.finish(n);
}

std::string render_svg(const AnnulusMap& m, const RenderOptions& opt) {
  if (is_tight(m, 2)) return render_svg(realize_ppt(decompose(m, 2), FlatSurface::cylinder()), opt);
  if (is_tight(m, 1)) return render_svg(realize_ppt(decompose(m, 1), FlatSurface::cone(4)), opt);
  fail("NotTight", "only tight maps can be drawn; run complete first");
}

}  // namespace annulus
