#include "nne/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nne/error.hpp"

namespace nne {
namespace {

using Edge = std::pair<std::size_t, std::size_t>;

bool in_window(const NNEGraph& g, std::size_t v, double t) {
  return norm_from_origin(g.config.space, g.config.points[v]) <= t;
}

void enforce_policy(const NNEGraph& graph, double t, UnclosedPolicy policy) {
  if (policy == UnclosedPolicy::Lenient) return;
  const auto bad = unclosed_in_window(graph, t);
  if (!bad.empty()) {
    throw UnclosedVertexError("vertex " + std::to_string(bad.front()) + " inside B_t (t=" + format_double(t) +
                                  ") did not close its hull; " + std::to_string(bad.size()) +
                                  " such vertices (stream " + std::to_string(graph.config.stream) + ")",
                              bad.front(), graph.config.stream);
  }
}

// Undirected edges (i < j) induced by closed out-lists, sorted.
std::vector<Edge> edge_set(const NNEGraph& g) {
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!g.closed[v]) continue;
    for (std::size_t u : g.out_neighbors[v]) edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

double edge_term(const NNEGraph& g, const Edge& e, double alpha, double t) {
  const int inside = (in_window(g, e.first, t) ? 1 : 0) + (in_window(g, e.second, t) ? 1 : 0);
  if (inside == 0) return 0.0;
  const double len = distance_unchecked(g.config.space, g.config.points[e.first], g.config.points[e.second]);
  return 0.5 * inside * std::pow(len, alpha);
}

// Sum in ascending order so equal multisets give bit-identical sums.
double ordered_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double v : terms) s += v;
  return s;
}

// F(with) - F(without), where `with` has the same vertices plus trailing extras.
double length_power_difference(const NNEGraph& without, const NNEGraph& with, double alpha, double t) {
  const auto before = edge_set(without);
  const auto after = edge_set(with);
  std::vector<Edge> added, removed;
  std::set_difference(after.begin(), after.end(), before.begin(), before.end(), std::back_inserter(added));
  std::set_difference(before.begin(), before.end(), after.begin(), after.end(), std::back_inserter(removed));
  std::vector<double> plus, minus;
  for (const Edge& e : added) plus.push_back(edge_term(with, e, alpha, t));
  for (const Edge& e : removed) minus.push_back(edge_term(without, e, alpha, t));
  return ordered_sum(std::move(plus)) - ordered_sum(std::move(minus));
}

double difference(const NNEGraph& without, const NNEGraph& with, const FunctionalSpec& spec, UnclosedPolicy policy) {
  enforce_policy(without, spec.t, policy);
  enforce_policy(with, spec.t, policy);
  if (const auto* lp = std::get_if<LengthPower>(&spec.kind)) {
    return length_power_difference(without, with, lp->alpha, spec.t);
  }
  const int k = std::get<OutdegreeCount>(spec.kind).k;
  return static_cast<double>(outdegree_count(with, k, spec.t, UnclosedPolicy::Lenient) -
                             outdegree_count(without, k, spec.t, UnclosedPolicy::Lenient));
}

void check_inside_sample(const PointConfiguration& config, const Point& x) {
  validate_point(config.space, x);
  if (norm_from_origin(config.space, x) > config.sample_radius) {
    throw std::invalid_argument("inserted point lies outside the sampling ball");
  }
}

}  // namespace

FunctionalSpec FunctionalSpec::length_power(double alpha, double t) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("length-power exponent must be finite and >= 0 (negative exponents are not supported)");
  }
  if (!(t > 0.0)) throw std::invalid_argument("window radius t must be > 0");
  return FunctionalSpec{LengthPower{alpha}, t};
}

FunctionalSpec FunctionalSpec::outdegree_count(int k, double t, int dim) {
  if (k < dim + 1) {
    throw std::invalid_argument("outdegree k must satisfy k >= d+1 (at least d+1 points are needed to close a hull); got k=" +
                                std::to_string(k) + ", d=" + std::to_string(dim));
  }
  if (!(t > 0.0)) throw std::invalid_argument("window radius t must be > 0");
  return FunctionalSpec{OutdegreeCount{k}, t};
}

std::string FunctionalSpec::label() const { return is_length_power() ? "alpha" : "k"; }

double FunctionalSpec::parameter() const noexcept {
  if (const auto* lp = std::get_if<LengthPower>(&kind)) return lp->alpha;
  return static_cast<double>(std::get<OutdegreeCount>(kind).k);
}

std::vector<std::size_t> unclosed_in_window(const NNEGraph& graph, double t) {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < graph.size(); ++v) {
    if (!graph.closed[v] && in_window(graph, v, t)) out.push_back(v);
  }
  return out;
}

double length_power(const NNEGraph& graph, double alpha, double t, UnclosedPolicy policy) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("length-power exponent must be >= 0");
  enforce_policy(graph, t, policy);
  double sum = 0.0;
  for (std::size_t v = 0; v < graph.size(); ++v) {
    if (!graph.closed[v]) continue;
    for (std::size_t u : graph.out_neighbors[v]) {
      // A mutual pair is counted once, from its smaller endpoint.
      if (u < v && graph.closed[u]) {
        const auto& back = graph.out_neighbors[u];
        if (std::find(back.begin(), back.end(), v) != back.end()) continue;
      }
      sum += edge_term(graph, Edge{std::min(u, v), std::max(u, v)}, alpha, t);
    }
  }
  return sum;
}

long outdegree_count(const NNEGraph& graph, int k, double t, UnclosedPolicy policy) {
  if (k < graph.config.space.dim() + 1) {
    throw std::invalid_argument("outdegree k must satisfy k >= d+1");
  }
  enforce_policy(graph, t, policy);
  long count = 0;
  for (std::size_t v = 0; v < graph.size(); ++v) {
    if (graph.closed[v] && graph.outdegree(v) == static_cast<std::size_t>(k) && in_window(graph, v, t)) ++count;
  }
  return count;
}

double evaluate(const NNEGraph& graph, const FunctionalSpec& spec, UnclosedPolicy policy) {
  if (const auto* lp = std::get_if<LengthPower>(&spec.kind)) return length_power(graph, lp->alpha, spec.t, policy);
  return static_cast<double>(outdegree_count(graph, std::get<OutdegreeCount>(spec.kind).k, spec.t, policy));
}

double add_one_cost(const PointConfiguration& config, const Point& x, const FunctionalSpec& spec,
                    const DifferenceOptions& options) {
  check_inside_sample(config, x);
  const NNEGraph without = build_nne(config, options.build);
  const NNEGraph with = build_nne(with_point(config, x), options.build);
  return difference(without, with, spec, options.policy);
}

double second_difference(const PointConfiguration& config, const Point& x, const Point& y,
                         const FunctionalSpec& spec, const DifferenceOptions& options) {
  check_inside_sample(config, x);
  check_inside_sample(config, y);
  if (x == y) throw std::invalid_argument("second difference needs distinct points");
  const PointConfiguration cx = with_point(config, x);
  const NNEGraph g = build_nne(config, options.build);
  const NNEGraph gy = build_nne(with_point(config, y), options.build);
  const NNEGraph gx = build_nne(cx, options.build);
  const NNEGraph gxy = build_nne(with_point(cx, y), options.build);
  return difference(gx, gxy, spec, options.policy) - difference(g, gy, spec, options.policy);
}

StabilizationRecord stabilization_radius(const NNEGraph& without, const NNEGraph& with) {
  const std::size_t n = without.size();
  if (with.size() != n + 1) throw std::invalid_argument("graph with x must have exactly one extra vertex");
  const Space& space = with.config.space;
  const Point& x = with.config.points[n];

  StabilizationRecord rec;
  if (with.closed[n]) {
    for (std::size_t u : with.out_neighbors[n]) {
      rec.r1 = std::max(rec.r1, distance_unchecked(space, x, with.config.points[u]));
    }
  } else {
    rec.censored = true;
    rec.r1 = std::max(0.0, with.config.trusted_radius(x));
  }
  for (std::size_t z = 0; z < n; ++z) {
    if (!with.closed[z]) continue;
    const auto& out = with.out_neighbors[z];
    if (std::find(out.begin(), out.end(), n) == out.end()) continue;
    const Point& pz = without.config.points[z];
    double reach = distance_unchecked(space, pz, x);
    for (std::size_t y : without.out_neighbors[z]) {
      reach = std::max(reach, distance_unchecked(space, pz, without.config.points[y]));
    }
    rec.r2 = std::max(rec.r2, reach);
  }
  rec.r = std::max(rec.r1, 2.0 * rec.r2);
  return rec;
}

StabilizationRecord stabilization_radius(const PointConfiguration& config, const Point& x,
                                         const BuildOptions& options) {
  if (config.points.empty()) throw std::invalid_argument("stabilization radius needs a non-empty configuration");
  check_inside_sample(config, x);
  const NNEGraph without = build_nne(config, options);
  const NNEGraph with = build_nne(with_point(config, x), options);
  return stabilization_radius(without, with);
}

}  // namespace nne
