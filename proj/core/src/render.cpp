#include "nne/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace nne {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

// Maps model coordinates (y up) to pixels (y down).
struct Viewport {
  double half_extent = 1.0;
  double size = 800.0;

  double px(double x) const { return (x / half_extent + 1.0) * 0.5 * size; }
  double py(double y) const { return (1.0 - y / half_extent) * 0.5 * size; }
  double len(double r) const { return r / half_extent * 0.5 * size; }
};

std::array<double, 2> planar(const NNEGraph& g, std::size_t v, RenderStyle style) {
  const Point& pt = g.config.points[v];
  if (style == RenderStyle::Poincare) return poincare_coords(pt);
  return {pt[0], pt[1]};
}

}  // namespace

RenderStyle parse_render_style(const std::string& name) {
  if (name == "euclidean") return RenderStyle::Euclidean;
  if (name == "poincare") return RenderStyle::Poincare;
  throw std::invalid_argument("unknown render style '" + name + "' (expected euclidean or poincare)");
}

std::array<double, 2> poincare_coords(const Point& pt) {
  if (pt.size() != 3) throw std::invalid_argument("Poincare disk rendering needs points of H^2");
  const double s = 1.0 + pt[0];
  return {pt[1] / s, pt[2] / s};
}

DiskGeodesic disk_geodesic(std::array<double, 2> a, std::array<double, 2> b) {
  DiskGeodesic g;
  g.from = a;
  g.to = b;
  const double na = a[0] * a[0] + a[1] * a[1];
  const double nb = b[0] * b[0] + b[1] * b[1];
  // The orthogonal circle also passes through the inverse of the farther point.
  const auto& far = na >= nb ? a : b;
  const double nf = std::max(na, nb);
  if (nf < 1e-24) return g;
  const std::array<double, 2> inv{far[0] / nf, far[1] / nf};
  const double ninv = inv[0] * inv[0] + inv[1] * inv[1];
  // 2 (b - a) . c = |b|^2 - |a|^2 ; 2 (inv - a) . c = |inv|^2 - |a|^2
  const double m00 = 2.0 * (b[0] - a[0]), m01 = 2.0 * (b[1] - a[1]);
  const double m10 = 2.0 * (inv[0] - a[0]), m11 = 2.0 * (inv[1] - a[1]);
  const double r0 = nb - na, r1 = ninv - na;
  const double det = m00 * m11 - m01 * m10;
  const double scale = std::hypot(m00, m01) * std::hypot(m10, m11);
  if (scale == 0.0 || std::abs(det) <= 1e-12 * scale) return g;  // collinear with the origin
  const std::array<double, 2> c{(r0 * m11 - m01 * r1) / det, (m00 * r1 - r0 * m10) / det};
  const double radius = std::hypot(a[0] - c[0], a[1] - c[1]);
  if (!(radius <= kMaxArcRadius)) return g;
  g.chord = false;
  g.center = c;
  g.radius = radius;
  const double cross = (a[0] - c[0]) * (b[1] - c[1]) - (a[1] - c[1]) * (b[0] - c[0]);
  g.counterclockwise = cross > 0.0;
  return g;
}

void render_svg(std::ostream& out, const NNEGraph& graph, const RenderOptions& options) {
  const Space& space = graph.config.space;
  if (space.dim() != 2) throw std::invalid_argument("only two-dimensional graphs can be rendered");
  const bool poincare = options.style == RenderStyle::Poincare;
  if (poincare != space.hyperbolic()) {
    throw std::invalid_argument(poincare ? "poincare style needs a hyperbolic graph"
                                         : "euclidean style needs a Euclidean graph");
  }
  if (options.size < 16) throw std::invalid_argument("render size must be at least 16 pixels");
  if (!(options.window >= 0.0)) throw std::invalid_argument("window radius must be >= 0");

  Viewport vp;
  vp.size = options.size;
  double window_r = 0.0;
  if (poincare) {
    vp.half_extent = 1.02;
    window_r = std::tanh(0.5 * options.window);
  } else {
    double extent = options.window;
    for (const Point& pt : graph.config.points) extent = std::max({extent, std::abs(pt[0]), std::abs(pt[1])});
    vp.half_extent = extent > 0.0 ? 1.05 * extent : 1.0;
    window_r = options.window;
  }

  const std::string sz = std::to_string(options.size);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << sz << "\" height=\"" << sz
      << "\" viewBox=\"0 0 " << sz << ' ' << sz << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const std::string cx = num(vp.px(0.0)), cy = num(vp.py(0.0));
  if (poincare) {
    out << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << num(vp.len(1.0))
        << "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
  }

  out << "<g stroke=\"#1f3b73\" stroke-width=\"0.8\" fill=\"none\">\n";
  for (std::size_t v = 0; v < graph.size(); ++v) {
    for (std::size_t u : graph.adjacency[v]) {
      if (u <= v) continue;
      const auto a = planar(graph, v, options.style);
      const auto b = planar(graph, u, options.style);
      const DiskGeodesic geo = poincare ? disk_geodesic(a, b) : DiskGeodesic{a, b};
      if (geo.chord) {
        out << "<line x1=\"" << num(vp.px(a[0])) << "\" y1=\"" << num(vp.py(a[1])) << "\" x2=\""
            << num(vp.px(b[0])) << "\" y2=\"" << num(vp.py(b[1])) << "\"/>\n";
      } else {
        // Screen y points down, so a counterclockwise model arc has positive sweep.
        const std::string r = num(vp.len(geo.radius));
        out << "<path d=\"M " << num(vp.px(a[0])) << ' ' << num(vp.py(a[1])) << " A " << r << ' ' << r
            << " 0 0 " << (geo.counterclockwise ? 1 : 0) << ' ' << num(vp.px(b[0])) << ' ' << num(vp.py(b[1]))
            << "\"/>\n";
      }
    }
  }
  out << "</g>\n<g fill=\"#c0392b\">\n";
  for (std::size_t v = 0; v < graph.size(); ++v) {
    const auto a = planar(graph, v, options.style);
    out << "<circle cx=\"" << num(vp.px(a[0])) << "\" cy=\"" << num(vp.py(a[1])) << "\" r=\"2\"/>\n";
  }
  out << "</g>\n";
  if (window_r > 0.0) {
    out << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << num(vp.len(window_r))
        << "\" fill=\"none\" stroke=\"#27ae60\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace nne
