#pragma once

#include <span>
#include <vector>

#include "nne/geometry.hpp"

namespace nne {

inline constexpr double kDefaultHullTolerance = 1e-9;

struct HullTest {
  bool contained = false;
  // Distance from the origin to the hull of the unit chart directions; small
  // values flag boundary-ambiguous queries.
  double residual = 0.0;
  int iterations = 0;
};

// Is x in the (geodesic) convex hull of pts? Answered in the Klein chart at x,
// where the question becomes whether the origin lies in a Euclidean hull.
// Throws NumericalFailure if the minimum-norm iteration does not converge.
HullTest hull_test(const Space& space, const Point& x, std::span<const Point> pts,
                   double tol = kDefaultHullTolerance);

bool contains_in_hull(const Space& space, const Point& x, std::span<const Point> pts,
                      double tol = kDefaultHullTolerance);

// Independent oracle: exact rational phase-one simplex on the chart images
// for d <= 3, long-double minimum-norm point with tol/100 otherwise.
bool contains_in_hull_exact(const Space& space, const Point& x, std::span<const Point> pts,
                            double tol = kDefaultHullTolerance);

// Exact feasibility of {lambda >= 0, sum lambda = 1, sum lambda_i v_i = 0}.
// Each row of `vectors` is one point of the given dimension.
bool origin_in_hull_rational(int dim, const std::vector<std::vector<double>>& vectors);

}  // namespace nne
