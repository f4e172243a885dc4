#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include "nne/graph.hpp"

namespace nne {

enum class RenderStyle { Euclidean, Poincare };

RenderStyle parse_render_style(const std::string& name);

struct RenderOptions {
  RenderStyle style = RenderStyle::Euclidean;
  double window = 0.0;  // radius of the overlaid window circle; 0 = none
  int size = 800;       // pixels per side
};

// Hyperboloid point (d = 2) -> Poincare disk, x_i / (1 + x_0).
std::array<double, 2> poincare_coords(const Point& pt);

// Geodesic between two disk points: a circular arc orthogonal to the unit
// circle, or a straight chord when the arc would be (nearly) a diameter.
struct DiskGeodesic {
  std::array<double, 2> from{};
  std::array<double, 2> to{};
  bool chord = true;
  std::array<double, 2> center{};
  double radius = 0.0;
  bool counterclockwise = false;  // orientation from `from` to `to`
};

inline constexpr double kMaxArcRadius = 1e4;

DiskGeodesic disk_geodesic(std::array<double, 2> a, std::array<double, 2> b);

// SVG 1.1 drawing of a planar graph. Only d = 2 is rendered; the Poincare
// style needs a hyperbolic graph, the Euclidean style a Euclidean one.
void render_svg(std::ostream& out, const NNEGraph& graph, const RenderOptions& options);

}  // namespace nne
