#include "nne/hull.hpp"

#include <stdexcept>

#include "nne/min_norm_point.hpp"

namespace nne {

HullTest hull_test(const Space& space, const Point& x, std::span<const Point> pts, double tol) {
  if (pts.empty()) throw std::invalid_argument("hull query needs at least one point");
  if (!(tol > 0.0)) throw std::invalid_argument("hull tolerance must be > 0");
  const int d = space.dim();
  MinNormPoint<double> solver(d, tol);
  std::array<double, kMaxDim> buf{};
  const std::span<double> chart(buf.data(), static_cast<std::size_t>(d));
  for (const Point& y : pts) {
    klein_coords(space, x, y, chart);
    solver.add_point(chart);
  }
  const auto r = solver.solve();
  return HullTest{r.contained, r.residual, r.iterations};
}

bool contains_in_hull(const Space& space, const Point& x, std::span<const Point> pts, double tol) {
  return hull_test(space, x, pts, tol).contained;
}

bool contains_in_hull_exact(const Space& space, const Point& x, std::span<const Point> pts, double tol) {
  if (pts.empty()) throw std::invalid_argument("hull query needs at least one point");
  const int d = space.dim();
  if (d <= 3) {
    std::vector<std::vector<double>> vecs;
    vecs.reserve(pts.size());
    for (const Point& y : pts) vecs.push_back(klein_coords(space, x, y));
    return origin_in_hull_rational(d, vecs);
  }
  MinNormPoint<long double> solver(d, static_cast<long double>(tol) / 100);
  for (const Point& y : pts) {
    const auto v = klein_coords(space, x, y);
    solver.add_point(v);
  }
  return solver.solve().contained;
}

}  // namespace nne
