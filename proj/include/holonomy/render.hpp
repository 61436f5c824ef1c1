#pragma once

// Deterministic SVG emission: the pentagon with axes and labeled vertices,
// and partial developing maps by reduced-word enumeration, in the half-plane
// or Poincare disc model. Output is a pure function of the inputs: fixed
// 6-decimal formatting, no hash-order iteration.

#include <cstdio>
#include <string>
#include <vector>

#include "holonomy/construct.hpp"

namespace holonomy {

enum class Model { HalfPlane, Disc };

struct Viewport {
  double xmin, xmax, ymin, ymax;
};

struct Style {
  std::string background = "#ffffff";
  std::string edge = "#1a365d";
  std::string boundary_edge = "#b91c1c";
  std::string axis = "#64748b";
  std::string tile = "#1a365d";
  std::string label = "#111111";
  double edge_width = 2.0;
  double boundary_width = 4.0;
  double axis_width = 1.2;
  double tile_width = 1.0;
};

struct Scene {
  Model model = Model::HalfPlane;
  Viewport viewport{-4.0, 4.0, 0.0, 4.0};  // half-plane default box
  int depth = 0;                            // maximum reduced word length, <= 8
  Style style;
  double canvas_width = 1000.0;
};

inline constexpr int max_render_depth = 8;

namespace svg {

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Planar curve in model coordinates: a circular arc or a straight segment.
struct Arc {
  bool straight;
  double x1, y1, x2, y2;  // endpoints
  double r;               // radius when curved
  int sweep;              // SVG sweep flag
};

inline Arc segment_arc(cplx a, cplx b) {
  ChartGeodesic c = chart_through(a, b);
  if (c.vertical) return {true, a.real(), a.imag(), b.real(), b.imag(), 0, 0};
  double phia = std::atan2(a.imag(), a.real() - c.x0);
  double phib = std::atan2(b.imag(), b.real() - c.x0);
  return {false, a.real(), a.imag(), b.real(), b.imag(), c.radius, phib > phia ? 0 : 1};
}

// Disc-model geodesic through two interior points of the unit disc.
inline Arc disc_arc(cplx a, cplx b) {
  double det = a.real() * b.imag() - a.imag() * b.real();
  double scale = std::abs(a) + std::abs(b) + 1.0;
  if (std::fabs(det) <= 1e-12 * scale)
    return {true, a.real(), a.imag(), b.real(), b.imag(), 0, 0};
  double ra = (std::norm(a) + 1.0) / 2.0, rb = (std::norm(b) + 1.0) / 2.0;
  cplx centre{(ra * b.imag() - rb * a.imag()) / det, (rb * a.real() - ra * b.real()) / det};
  double r = std::sqrt(std::max(0.0, std::norm(centre) - 1.0));
  double d = reduce_angle(std::arg(b - centre) - std::arg(a - centre));
  return {false, a.real(), a.imag(), b.real(), b.imag(), r, d > 0 ? 0 : 1};
}

}  // namespace svg

namespace detail {

inline cplx cayley(cplx z) { return (z - cplx{0, 1}) / (z + cplx{0, 1}); }

// boundary point image on the unit circle, (u,v) -> (u - iv)^2
inline cplx cayley_boundary(const BoundaryPoint& p) {
  return {p.u * p.u - p.v * p.v, -2.0 * p.u * p.v};
}

class SvgCanvas {
 public:
  SvgCanvas(const Scene& scene) : scene_(scene) {
    const Viewport& vp = scene.viewport;
    sx_ = scene.canvas_width / (vp.xmax - vp.xmin);
    width_ = scene.canvas_width;
    height_ = sx_ * (vp.ymax - vp.ymin);
    body_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg::num(width_) +
             "\" height=\"" + svg::num(height_) + "\" viewBox=\"0 0 " + svg::num(width_) +
             " " + svg::num(height_) + "\">\n";
    body_ += "<rect width=\"100%\" height=\"100%\" fill=\"" + scene.style.background +
             "\"/>\n";
  }

  double px(double x) const { return (x - scene_.viewport.xmin) * sx_; }
  double py(double y) const { return height_ - (y - scene_.viewport.ymin) * sx_; }

  void path(const std::vector<svg::Arc>& arcs, const std::string& stroke, double width,
            bool dashed, bool closed) {
    if (arcs.empty()) return;
    std::string d = "M " + svg::num(px(arcs[0].x1)) + " " + svg::num(py(arcs[0].y1));
    for (const auto& a : arcs) {
      if (a.straight) {
        d += " L " + svg::num(px(a.x2)) + " " + svg::num(py(a.y2));
      } else {
        double r = a.r * sx_;
        d += " A " + svg::num(r) + " " + svg::num(r) + " 0 0 " + std::to_string(a.sweep) +
             " " + svg::num(px(a.x2)) + " " + svg::num(py(a.y2));
      }
    }
    if (closed) d += " Z";
    body_ += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
             svg::num(width) + "\"";
    if (dashed) body_ += " stroke-dasharray=\"6,4\"";
    body_ += "/>\n";
  }

  void text(double x, double y, const std::string& s, const std::string& fill) {
    body_ += "<text x=\"" + svg::num(px(x)) + "\" y=\"" + svg::num(py(y)) +
             "\" font-size=\"14\" fill=\"" + fill + "\">" + s + "</text>\n";
  }

  void circle_outline(double cx, double cy, double r, const std::string& stroke) {
    body_ += "<circle cx=\"" + svg::num(px(cx)) + "\" cy=\"" + svg::num(py(cy)) +
             "\" r=\"" + svg::num(r * sx_) + "\" fill=\"none\" stroke=\"" + stroke +
             "\" stroke-width=\"1\"/>\n";
  }

  std::string finish() { return body_ + "</svg>\n"; }

 private:
  const Scene& scene_;
  double sx_, width_, height_;
  std::string body_;
};

// pentagon vertices in model coordinates
inline std::array<cplx, 5> model_vertices(const Pentagon& P, Model m) {
  std::array<cplx, 5> out{};
  for (int i = 0; i < 5; ++i) {
    cplx z = P.v[i].z();
    out[i] = m == Model::Disc ? cayley(z) : z;
  }
  return out;
}

inline svg::Arc model_edge(cplx a, cplx b, Model m) {
  return m == Model::Disc ? svg::disc_arc(a, b) : svg::segment_arc(a, b);
}

// model-coordinate curve of a full geodesic given by its ideal endpoints
inline svg::Arc model_axis(const Geodesic& geo, Model m, const Viewport& vp) {
  if (m == Model::Disc) {
    cplx a = cayley_boundary(geo.start), b = cayley_boundary(geo.end);
    double det = a.real() * b.imag() - a.imag() * b.real();
    if (std::fabs(det) <= 1e-12)
      return {true, a.real(), a.imag(), b.real(), b.imag(), 0, 0};
    cplx centre{(b.imag() - a.imag()) / det, (a.real() - b.real()) / det};
    double r = std::sqrt(std::max(0.0, std::norm(centre) - 1.0));
    double d = reduce_angle(std::arg(b - centre) - std::arg(a - centre));
    return {false, a.real(), a.imag(), b.real(), b.imag(), r, d > 0 ? 0 : 1};
  }
  ChartGeodesic c = chart_of(geo);
  if (c.vertical) return {true, c.x0, 0.0, c.x0, vp.ymax, 0, 0};
  return {false, c.x0 - c.radius, 0.0, c.x0 + c.radius, 0.0, c.radius, 1};
}

inline bool in_viewport(cplx z, const Viewport& vp) {
  return z.real() >= vp.xmin && z.real() <= vp.xmax && z.imag() >= vp.ymin &&
         z.imag() <= vp.ymax;
}

}  // namespace detail

// Pentagon figure: geodesic edges (boundary edge e0 thickened), dashed axes
// of g_eff, h_eff and the commutator where they exist, labeled vertices.
inline std::string render_pentagon(const ConstructionResult& result, const Scene& scene_in) {
  Scene scene = scene_in;
  if (scene.model == Model::Disc) scene.viewport = {-1.05, 1.05, -1.05, 1.05};
  detail::SvgCanvas canvas(scene);
  if (scene.model == Model::Disc) canvas.circle_outline(0, 0, 1.0, scene.style.axis);

  auto draw_axis_of = [&](const Isometry& m) {
    if (!std::holds_alternative<Hyperbolic>(classify(m))) return;
    canvas.path({detail::model_axis(axis(m), scene.model, scene.viewport)},
                scene.style.axis, scene.style.axis_width, true, false);
  };
  draw_axis_of(result.g_eff);
  draw_axis_of(result.h_eff);
  draw_axis_of(commutator(result.g_eff, result.h_eff));

  auto v = detail::model_vertices(result.pentagon, scene.model);
  // boundary edge e0 first, thickened, then the remaining four
  canvas.path({detail::model_edge(v[0], v[1], scene.model)}, scene.style.boundary_edge,
              scene.style.boundary_width, false, false);
  for (int i = 1; i < 5; ++i)
    canvas.path({detail::model_edge(v[i], v[(i + 1) % 5], scene.model)}, scene.style.edge,
                scene.style.edge_width, false, false);

  static const char* names[5] = {"p", "[g-1,h-1]p", "hp", "ghp", "h-1ghp"};
  for (int i = 0; i < 5; ++i)
    canvas.text(v[i].real(), v[i].imag(), names[i], scene.style.label);
  return canvas.finish();
}

struct DevelopingStats {
  int words_enumerated = 0;
  int tiles_drawn = 0;
};

namespace detail {

// Reduced words over g, g^-1, h, h^-1 of length <= depth, in length-then-
// lexicographic order with letter order g < G < h < H.
inline std::vector<std::string> reduced_words(int depth) {
  std::vector<std::string> all{""};
  std::vector<std::string> prev{""};
  const char letters[4] = {'g', 'G', 'h', 'H'};
  auto inverse_of = [](char c) -> char {
    switch (c) {
      case 'g': return 'G';
      case 'G': return 'g';
      case 'h': return 'H';
      default: return 'h';
    }
  };
  for (int len = 1; len <= depth; ++len) {
    std::vector<std::string> cur;
    for (const auto& w : prev)
      for (char c : letters) {
        if (!w.empty() && w.back() == inverse_of(c)) continue;
        cur.push_back(w + c);
      }
    all.insert(all.end(), cur.begin(), cur.end());
    prev = std::move(cur);
  }
  return all;
}

inline Isometry word_isometry(const std::string& w, const Isometry& g, const Isometry& h) {
  Isometry m = Isometry::identity();
  for (char c : w) {
    switch (c) {
      case 'g': m = m * g; break;
      case 'G': m = m * g.inverse(); break;
      case 'h': m = m * h; break;
      default: m = m * h.inverse(); break;
    }
  }
  return m;
}

}  // namespace detail

// Partial developing map: the pentagon copies under all reduced words of
// length <= scene.depth; copies entirely outside the viewport are culled.
inline std::string render_developing(const ConstructionResult& result, const Scene& scene_in,
                                     DevelopingStats* stats = nullptr) {
  Scene scene = scene_in;
  if (scene.depth > max_render_depth)
    throw DepthTooLarge("depth " + std::to_string(scene.depth) + " exceeds " +
                        std::to_string(max_render_depth));
  if (scene.model == Model::Disc) scene.viewport = {-1.05, 1.05, -1.05, 1.05};
  detail::SvgCanvas canvas(scene);
  if (scene.model == Model::Disc) canvas.circle_outline(0, 0, 1.0, scene.style.axis);

  DevelopingStats local;
  auto words = detail::reduced_words(scene.depth);
  local.words_enumerated = static_cast<int>(words.size());
  for (const auto& w : words) {
    Isometry m = detail::word_isometry(w, result.g_eff, result.h_eff);
    std::array<cplx, 5> v{};
    bool visible = false, valid = true;
    for (int i = 0; i < 5; ++i) {
      try {
        cplx z = apply(m, result.pentagon.v[i]).z();
        v[i] = scene.model == Model::Disc ? detail::cayley(z) : z;
      } catch (const NumericOverflow&) {
        valid = false;
        break;
      }
      if (detail::in_viewport(v[i], scene.viewport)) visible = true;
    }
    if (!valid || !visible) continue;
    std::vector<svg::Arc> arcs;
    arcs.reserve(5);
    for (int i = 0; i < 5; ++i) arcs.push_back(detail::model_edge(v[i], v[(i + 1) % 5], scene.model));
    bool base = w.empty();
    canvas.path(arcs, base ? scene.style.boundary_edge : scene.style.tile,
                base ? scene.style.tile_width * 1.5 : scene.style.tile_width, false, true);
    ++local.tiles_drawn;
  }
  if (stats) *stats = local;
  return canvas.finish();
}

}  // namespace holonomy
