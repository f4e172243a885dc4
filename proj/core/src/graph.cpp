#include "nne/graph.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "nne/error.hpp"
#include "nne/min_norm_point.hpp"
#include "nne/spatial_index.hpp"

namespace nne {
namespace {

struct VertexResult {
  std::vector<std::size_t> out;
  bool closed = false;
  double residual = 0.0;
};

VertexResult scan_vertex(const PointConfiguration& config, const KdTree& tree, std::size_t v, double tol) {
  const Space& space = config.space;
  const int d = space.dim();
  const Point& x = config.points[v];
  const double trusted = config.trusted_radius(x);

  VertexResult res;
  MinNormPoint<double> solver(d, tol);
  std::array<double, kMaxDim> buf{};
  const std::span<double> chart(buf.data(), static_cast<std::size_t>(d));
  auto cursor = tree.nearest(x, v);
  while (auto nb = cursor.next()) {
    if (nb->distance > trusted) break;
    res.out.push_back(nb->index);
    klein_coords(space, x, config.points[nb->index], chart);
    solver.add_point(chart);
    if (static_cast<int>(res.out.size()) >= d + 1) {
      const auto r = solver.solve();
      if (r.contained) {
        res.closed = true;
        res.residual = r.residual;
        return res;
      }
      res.residual = r.residual;
    }
  }
  return res;
}

}  // namespace

std::vector<Neighbor> nearest_sorted(const PointConfiguration& config, std::size_t i) {
  if (config.size() < 2) throw std::invalid_argument("nearest_sorted needs at least two points");
  if (i >= config.size()) throw std::out_of_range("vertex index out of range");
  std::vector<Neighbor> out;
  out.reserve(config.size() - 1);
  for (std::size_t j = 0; j < config.size(); ++j) {
    if (j == i) continue;
    out.push_back(Neighbor{j, distance_unchecked(config.space, config.points[i], config.points[j])});
  }
  std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  });
  return out;
}

void rebuild_adjacency(NNEGraph& graph) {
  const std::size_t n = graph.size();
  graph.adjacency.assign(n, {});
  for (std::size_t v = 0; v < n; ++v) {
    if (!graph.closed[v]) continue;
    for (std::size_t u : graph.out_neighbors[v]) {
      graph.adjacency[v].push_back(u);
      graph.adjacency[u].push_back(v);
    }
  }
  for (auto& adj : graph.adjacency) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
}

NNEGraph build_nne(const PointConfiguration& config, const BuildOptions& options) {
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("hull tolerance must be > 0");
  const std::size_t n = config.size();
  NNEGraph graph;
  graph.config = config;
  graph.out_neighbors.resize(n);
  graph.closed.assign(n, false);
  graph.residual.assign(n, 0.0);

  const KdTree tree(config.space, config.points);
  std::vector<VertexResult> results(n);

  auto work = [&](std::size_t v) {
    try {
      results[v] = scan_vertex(config, tree, v, options.tolerance);
    } catch (const NumericalFailure& e) {
      throw NumericalFailure("vertex " + std::to_string(v) + ": " + e.what(), e.residual());
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(n / 64 + 1)));
  if (threads == 1) {
    for (std::size_t v = 0; v < n; ++v) work(v);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t v = next.fetch_add(1);
          if (v >= n) return;
          try {
            work(v);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
            next.store(n);
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  for (std::size_t v = 0; v < n; ++v) {
    graph.out_neighbors[v] = std::move(results[v].out);
    graph.closed[v] = results[v].closed;
    graph.residual[v] = results[v].residual;
  }
  rebuild_adjacency(graph);
  return graph;
}

VerifyReport verify_graph(const NNEGraph& graph, double tol) {
  VerifyReport report;
  const Space& space = graph.config.space;
  const int d = space.dim();
  const auto& pts = graph.config.points;
  for (std::size_t v = 0; v < graph.size(); ++v) {
    if (!graph.closed[v]) continue;
    ++report.checked;
    const auto& out = graph.out_neighbors[v];
    const Point& x = pts[v];
    if (static_cast<int>(out.size()) < d + 1) {
      report.violations.push_back({v, "outdegree " + std::to_string(out.size()) + " below d+1"});
      continue;
    }
    bool sorted = true;
    for (std::size_t i = 1; i < out.size(); ++i) {
      sorted = sorted && distance_unchecked(space, x, pts[out[i - 1]]) < distance_unchecked(space, x, pts[out[i]]);
    }
    if (!sorted) {
      report.violations.push_back({v, "out-neighbours not strictly increasing in distance"});
      continue;
    }

    std::vector<Point> full;
    full.reserve(out.size());
    for (std::size_t u : out) full.push_back(pts[u]);
    const std::span<const Point> all(full);
    const std::span<const Point> shorter = all.first(all.size() - 1);

    const HullTest with = hull_test(space, x, all, tol);
    const HullTest without = hull_test(space, x, shorter, tol);
    auto ambiguous = [tol](const HullTest& h) { return h.residual >= tol / 2 && h.residual <= 2 * tol; };
    if (ambiguous(with) || ambiguous(without)) {
      ++report.ambiguous;
      continue;
    }
    if (!contains_in_hull_exact(space, x, all, tol)) {
      report.violations.push_back({v, "vertex not in the hull of its out-neighbours"});
    } else if (contains_in_hull_exact(space, x, shorter, tol)) {
      report.violations.push_back({v, "hull already closed without the farthest out-neighbour"});
    }
  }
  return report;
}

void write_graph(std::ostream& out, const NNEGraph& graph) {
  write_configuration(out, graph.config);
  out << "graph " << graph.size() << '\n';
  for (std::size_t v = 0; v < graph.size(); ++v) {
    out << v << ' ' << (graph.closed[v] ? 1 : 0) << ' ' << graph.out_neighbors[v].size();
    for (std::size_t u : graph.out_neighbors[v]) out << ' ' << u;
    out << '\n';
  }
}

NNEGraph read_graph(std::istream& in) {
  NNEGraph graph;
  graph.config = read_configuration(in);
  std::string line;
  while (std::getline(in, line) && line.empty()) {
  }
  std::istringstream head(line);
  std::string tag;
  std::size_t n = 0;
  if (!(head >> tag >> n) || tag != "graph") throw std::invalid_argument("expected 'graph <n>' line");
  if (n != graph.config.size()) throw std::invalid_argument("graph vertex count does not match point count");
  graph.out_neighbors.resize(n);
  graph.closed.assign(n, false);
  graph.residual.assign(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    if (!std::getline(in, line)) throw std::invalid_argument("truncated graph file");
    std::istringstream row(line);
    std::size_t idx = 0, k = 0;
    int closed = 0;
    if (!(row >> idx >> closed >> k) || idx != v) throw std::invalid_argument("malformed vertex record: '" + line + "'");
    graph.closed[v] = closed != 0;
    graph.out_neighbors[v].resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      if (!(row >> graph.out_neighbors[v][i]) || graph.out_neighbors[v][i] >= n || graph.out_neighbors[v][i] == v) {
        throw std::invalid_argument("bad neighbour index in record for vertex " + std::to_string(v));
      }
    }
  }
  rebuild_adjacency(graph);
  return graph;
}

}  // namespace nne
