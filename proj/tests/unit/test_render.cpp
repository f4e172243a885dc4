#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nne/render.hpp"

using namespace nne;

namespace {

std::string svg(const NNEGraph& g, const RenderOptions& o) {
  std::ostringstream ss;
  render_svg(ss, g, o);
  return ss.str();
}

std::size_t count(const std::string& s, const std::string& what) {
  std::size_t n = 0;
  for (auto pos = s.find(what); pos != std::string::npos; pos = s.find(what, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("empty graph draws only the window") {
  NNEGraph g;
  g.config.space = Space(SpaceKind::Euclidean, 2);
  const auto out = svg(g, RenderOptions{RenderStyle::Euclidean, 3.0, 400});
  CHECK(out.find("<svg") != std::string::npos);
  CHECK(out.find("</svg>") != std::string::npos);
  CHECK(count(out, "<circle") == 1);
  CHECK(count(out, "<line") + count(out, "<path") == 0);
}

TEST_CASE("poincare map and geodesics") {
  const Space h2(SpaceKind::Hyperbolic, 2);
  const auto a = poincare_coords(origin(h2));
  const auto b = poincare_coords(Point{std::cosh(1.0), std::sinh(1.0), 0.0});
  CHECK(std::hypot(a[0], a[1]) == 0.0);
  CHECK(std::hypot(b[0], b[1]) == doctest::Approx(std::tanh(0.5)));
  CHECK(std::tanh(0.5) == doctest::Approx(0.4621).epsilon(1e-4));
  // Through the centre the geodesic is a diameter.
  CHECK(disk_geodesic(a, b).chord);

  // Off-centre geodesics are arcs orthogonal to the unit circle: |c|^2 = 1 + r^2.
  const auto g = disk_geodesic({0.3, 0.1}, {-0.2, 0.5});
  REQUIRE_FALSE(g.chord);
  const double c2 = g.center[0] * g.center[0] + g.center[1] * g.center[1];
  CHECK(c2 == doctest::Approx(1.0 + g.radius * g.radius));
  CHECK(std::hypot(0.3 - g.center[0], 0.1 - g.center[1]) == doctest::Approx(g.radius));
  CHECK(std::hypot(-0.2 - g.center[0], 0.5 - g.center[1]) == doctest::Approx(g.radius));
  // Nearly a diameter: falls back to the chord.
  CHECK(disk_geodesic({0.5, 1e-9}, {-0.5, 0.0}).chord);
}

TEST_CASE("single hyperbolic edge renders deterministically") {
  const Space h2(SpaceKind::Hyperbolic, 2);
  NNEGraph g;
  g.config.space = h2;
  g.config.points = {origin(h2), Point{std::cosh(1.0), std::sinh(1.0), 0.0}};
  g.out_neighbors = {{1}, {}};
  g.closed = {true, false};
  g.residual = {0.0, 0.0};
  rebuild_adjacency(g);
  const RenderOptions o{RenderStyle::Poincare, 2.0, 500};
  const auto out = svg(g, o);
  CHECK(out == svg(g, o));
  CHECK(count(out, "<line") == 1);
  // x2 = centre + tanh(1/2) scaled to the viewport.
  const double px = (std::tanh(0.5) / 1.02 + 1.0) * 0.5 * 500;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", px);
  CHECK(out.find(std::string("x2=\"") + buf) != std::string::npos);
}

TEST_CASE("render preconditions") {
  NNEGraph g;
  g.config.space = Space(SpaceKind::Euclidean, 3);
  CHECK_THROWS_AS(svg(g, RenderOptions{}), std::invalid_argument);
  g.config.space = Space(SpaceKind::Euclidean, 2);
  CHECK_THROWS_AS(svg(g, RenderOptions{RenderStyle::Poincare, 1.0, 400}), std::invalid_argument);
  CHECK_THROWS(parse_render_style("klein"));
}
