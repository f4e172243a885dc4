#pragma once

// Independent oracles shared by the unit tests. They re-derive the objects from
// their definitions with brute force, sharing no search code with the library.

#include <algorithm>
#include <cmath>
#include <vector>

#include "nne/graph.hpp"
#include "nne/hull.hpp"
#include "nne/random.hpp"
#include "nne/sampling.hpp"

namespace nne::testing {

// Out-neighbour list by brute force: sort everything, add one neighbour at a
// time, ask the exact hull oracle after each addition. Returns empty when the
// hull never closes.
inline std::vector<std::size_t> brute_out_neighbors(const PointConfiguration& config, std::size_t v) {
  const Space& space = config.space;
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t j = 0; j < config.size(); ++j) {
    if (j != v) order.emplace_back(distance(space, config.points[v], config.points[j]), j);
  }
  std::sort(order.begin(), order.end());
  std::vector<Point> pts;
  std::vector<std::size_t> ids;
  for (const auto& [dist, j] : order) {
    pts.push_back(config.points[j]);
    ids.push_back(j);
    if (static_cast<int>(pts.size()) >= space.dim() + 1 && contains_in_hull_exact(space, config.points[v], pts)) {
      return ids;
    }
  }
  return {};
}

// F_t^(alpha) read straight off the definition: half the sum over vertices in
// B_t of alpha-powered lengths of all incident (undirected) edges.
inline double naive_length_power(const NNEGraph& g, double alpha, double t) {
  const Space& space = g.config.space;
  const std::size_t n = g.size();
  std::vector<std::vector<bool>> edge(n, std::vector<bool>(n, false));
  for (std::size_t v = 0; v < n; ++v) {
    if (!g.closed[v]) continue;
    for (std::size_t u : g.out_neighbors[v]) edge[v][u] = edge[u][v] = true;
  }
  double sum = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    if (norm_from_origin(space, g.config.points[x]) > t) continue;
    for (std::size_t y = 0; y < n; ++y) {
      if (edge[x][y]) sum += std::pow(distance(space, g.config.points[x], g.config.points[y]), alpha);
    }
  }
  return 0.5 * sum;
}

inline PointConfiguration hand_config(const Space& space, std::vector<Point> pts) {
  PointConfiguration c;
  c.space = space;
  c.points = std::move(pts);
  return c;
}

inline Point random_point_in_ball(const Space& space, double radius, RandomStream& rng) {
  std::vector<double> dir(static_cast<std::size_t>(space.dim()));
  double n2 = 0.0;
  while (n2 == 0.0) {
    n2 = 0.0;
    for (double& v : dir) {
      v = rng.normal();
      n2 += v * v;
    }
  }
  for (double& v : dir) v /= std::sqrt(n2);
  return point_at(space, radial_inverse_cdf(space, radius, rng.uniform()), dir);
}

}  // namespace nne::testing
