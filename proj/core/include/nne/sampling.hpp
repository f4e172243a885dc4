#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "nne/geometry.hpp"
#include "nne/random.hpp"

namespace nne {

struct Ball {
  Point center;
  double radius = 0.0;
};

// A finite realization of the Poisson process, observed on B(p, window_radius)
// and sampled on B(p, sample_radius). `bounds` lists extra balls the sample was
// intersected with (restrict_to_ball); the sampling region is the intersection
// of B(p, sample_radius) with all of them.
struct PointConfiguration {
  Space space{SpaceKind::Euclidean, 2};
  std::vector<Point> points;
  double sample_radius = std::numeric_limits<double>::infinity();
  double window_radius = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::vector<Ball> bounds;

  std::size_t size() const noexcept { return points.size(); }

  // Distance from pt to the boundary of the sampling region; a neighbour list
  // that closes within this radius is the same as for the unrestricted process.
  double trusted_radius(const Point& pt) const noexcept;
};

// Checks the configuration invariants; throws std::invalid_argument.
void validate(const PointConfiguration& config);

PointConfiguration sample_poisson_ball(const Space& space, double radius, RandomStream& rng);

// Radius r with vol(B_r) = u vol(B_R).
double radial_inverse_cdf(const Space& space, double radius, double u);

// Keeps the points with d(p, x) <= r.
PointConfiguration restrict(const PointConfiguration& config, double r);

// Keeps the points with d(center, x) <= r and records the ball in `bounds`.
PointConfiguration restrict_to_ball(const PointConfiguration& config, const Point& center, double r);

// Copy of config with pt appended as the last vertex.
PointConfiguration with_point(const PointConfiguration& config, const Point& pt);

// Line format: "space dim sample_radius window_radius seed stream", then one
// point per line, coordinates in %.17g. Restriction balls are not serialized.
void write_configuration(std::ostream& out, const PointConfiguration& config);
PointConfiguration read_configuration(std::istream& in);

std::string format_double(double v);

}  // namespace nne
