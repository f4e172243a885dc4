#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "nne/graph.hpp"
#include "support.hpp"

using namespace nne;
using nne::testing::brute_out_neighbors;
using nne::testing::hand_config;

namespace {
const Space E2{SpaceKind::Euclidean, 2};
const Space H2{SpaceKind::Hyperbolic, 2};
}  // namespace

TEST_CASE("nearest_sorted") {
  const auto two = hand_config(E2, {Point{0.0, 0.0}, Point{1.0, 1.0}});
  const auto only = nearest_sorted(two, 0);
  REQUIRE(only.size() == 1);
  CHECK(only[0].index == 1);

  const auto c = hand_config(E2, {Point{0.0, 0.0}, Point{-3.0, 0.0}, Point{1.0, 0.0}, Point{0.0, 2.0}});
  const auto nb = nearest_sorted(c, 0);
  REQUIRE(nb.size() == 3);
  CHECK(nb[0].index == 2);
  CHECK(nb[1].index == 3);
  CHECK(nb[2].index == 1);
  CHECK(nb[2].distance == doctest::Approx(3.0));
}

TEST_CASE("nearest_sorted order is isometry invariant") {
  for (const Space& space : {E2, H2}) {
    RandomStream rng(31, 0);
    const auto c = sample_poisson_ball(space, 3.0, rng);
    REQUIRE(c.size() > 10);
    const auto iso = random_isometry(space, rng);
    PointConfiguration moved = c;
    for (auto& p : moved.points) p = apply_isometry(iso, p);
    for (std::size_t v = 0; v < c.size(); v += 3) {
      const auto a = nearest_sorted(c, v);
      const auto b = nearest_sorted(moved, v);
      for (std::size_t i = 0; i < a.size(); ++i) {
        // Exact ties aside, the order must survive the isometry.
        if (i + 1 < a.size() && a[i + 1].distance - a[i].distance < 1e-9) continue;
        if (i > 0 && a[i].distance - a[i - 1].distance < 1e-9) continue;
        CHECK(a[i].index == b[i].index);
      }
    }
  }
}

TEST_CASE("kd-tree cursor matches a full sort") {
  for (const Space& space : {E2, H2, Space{SpaceKind::Hyperbolic, 3}}) {
    RandomStream rng(32, 1);
    const auto c = sample_poisson_ball(space, space.dim() == 3 ? 3.0 : (space.hyperbolic() ? 5.0 : 8.0), rng);
    const KdTree tree(space, c.points);
    for (std::size_t v = 0; v < c.size(); v += 17) {
      const auto ref = nearest_sorted(c, v);
      auto cur = tree.nearest(c.points[v], v);
      for (const auto& want : ref) {
        const auto got = cur.next();
        REQUIRE(got.has_value());
        CHECK(got->index == want.index);
      }
      CHECK_FALSE(cur.next().has_value());
    }
  }
}

TEST_CASE("build_nne hand examples") {
  std::vector<Point> tri{Point{0.0, 0.0}};
  for (int i = 0; i < 3; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 3.0 + 0.1;
    tri.push_back(Point{std::cos(a), std::sin(a)});
  }
  const auto g1 = build_nne(hand_config(E2, tri));
  CHECK(g1.closed[0]);
  CHECK(g1.outdegree(0) == 3);

  const auto g2 = build_nne(hand_config(
      E2, {Point{0.0, 0.0}, Point{1.0, 0.0}, Point{1.1, 0.3}, Point{1.2, -0.3}, Point{-2.0, 0.1}}));
  CHECK(g2.closed[0]);
  CHECK(g2.outdegree(0) == 4);
  CHECK(g2.out_neighbors[0] == brute_out_neighbors(g2.config, 0));

  const auto g3 = build_nne(hand_config(E2, {Point{0.5, 0.5}}));
  CHECK_FALSE(g3.closed[0]);
  CHECK(g3.adjacency[0].empty());
}

TEST_CASE("build_nne agrees with the brute-force definition") {
  for (const Space& space : {E2, H2, Space{SpaceKind::Euclidean, 3}, Space{SpaceKind::Hyperbolic, 3}}) {
    for (std::uint64_t s = 0; s < 2; ++s) {
      RandomStream rng(33, s);
      const double radius = space.dim() == 2 ? (space.hyperbolic() ? 2.5 : 3.5) : (space.hyperbolic() ? 1.7 : 2.0);
      auto c = sample_poisson_ball(space, radius, rng);
      c.sample_radius = std::numeric_limits<double>::infinity();  // score against the finite set itself
      const auto g = build_nne(c);
      for (std::size_t v = 0; v < g.size(); ++v) {
        const auto want = brute_out_neighbors(c, v);
        CHECK(g.closed[v] == !want.empty());
        if (g.closed[v]) CHECK(g.out_neighbors[v] == want);
      }
    }
  }
}

TEST_CASE("trusted radius closure") {
  RandomStream rng(34, 0);
  const auto c = sample_poisson_ball(E2, 6.0, rng);
  const auto g = build_nne(c);
  std::size_t closed = 0;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!g.closed[v]) {
      // Its scan stopped at the sampling boundary.
      for (std::size_t u : g.out_neighbors[v]) {
        CHECK(distance(E2, c.points[v], c.points[u]) <= c.trusted_radius(c.points[v]));
      }
      continue;
    }
    ++closed;
    CHECK(g.outdegree(v) >= 3);
    const double reach = distance(E2, c.points[v], c.points[g.out_neighbors[v].back()]);
    CHECK(reach <= c.trusted_radius(c.points[v]));
  }
  CHECK(closed > g.size() / 2);
}

TEST_CASE("threads do not change the graph") {
  RandomStream rng(35, 0);
  const auto c = sample_poisson_ball(H2, 5.0, rng);
  const auto a = build_nne(c);
  const auto b = build_nne(c, BuildOptions{kDefaultHullTolerance, 4});
  CHECK(a.out_neighbors == b.out_neighbors);
  CHECK(a.closed == b.closed);
}

TEST_CASE("verify_graph") {
  RandomStream rng(36, 0);
  auto c = sample_poisson_ball(E2, 8.0, rng);
  c = restrict(c, 8.0);
  REQUIRE(c.size() > 150);
  auto g = build_nne(c);
  const auto ok = verify_graph(g);
  CHECK(ok.violations.empty());
  CHECK(ok.checked > 100);

  std::size_t victim = 0;
  while (!g.closed[victim]) ++victim;
  g.out_neighbors[victim].pop_back();
  rebuild_adjacency(g);
  const auto bad = verify_graph(g);
  REQUIRE(bad.violations.size() == 1);
  CHECK(bad.violations[0].vertex == victim);

  NNEGraph empty;
  CHECK(verify_graph(empty).violations.empty());
  CHECK(verify_graph(empty).checked == 0);
}

TEST_CASE("graph text round trip") {
  RandomStream rng(37, 0);
  const auto g = build_nne(sample_poisson_ball(H2, 3.0, rng));
  std::stringstream ss;
  write_graph(ss, g);
  const auto back = read_graph(ss);
  CHECK(back.out_neighbors == g.out_neighbors);
  CHECK(back.closed == g.closed);
  CHECK(back.adjacency == g.adjacency);
  CHECK(back.config.points == g.config.points);
}
