#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nne/hull.hpp"
#include "nne/sampling.hpp"
#include "nne/spatial_index.hpp"

namespace nne {

// Nearest neighbour embracing graph of a configuration.
//
// Vertex x scans its neighbours in increasing distance and stops at the first
// k >= d+1 whose hull contains x. The scan only trusts neighbours within
// config.trusted_radius(x); if the hull has not closed by then (or the
// candidates run out) the vertex is marked not closed and out_neighbors holds
// every candidate that was scanned. Only closed vertices contribute edges.
struct NNEGraph {
  PointConfiguration config;
  std::vector<std::vector<std::size_t>> out_neighbors;
  std::vector<bool> closed;
  std::vector<double> residual;  // min-norm residual of the closing hull test
  // Sorted union of closed out-lists in both directions.
  std::vector<std::vector<std::size_t>> adjacency;

  std::size_t size() const noexcept { return out_neighbors.size(); }
  std::size_t outdegree(std::size_t v) const noexcept { return out_neighbors[v].size(); }
};

struct BuildOptions {
  double tolerance = kDefaultHullTolerance;
  unsigned threads = 1;
};

// All other vertices in ascending (distance, index) order.
std::vector<Neighbor> nearest_sorted(const PointConfiguration& config, std::size_t i);

NNEGraph build_nne(const PointConfiguration& config, const BuildOptions& options = {});

// Recomputes adjacency from out_neighbors and closed.
void rebuild_adjacency(NNEGraph& graph);

struct GraphViolation {
  std::size_t vertex = 0;
  std::string reason;
};

struct VerifyReport {
  std::vector<GraphViolation> violations;
  std::size_t checked = 0;
  std::size_t ambiguous = 0;  // skipped: residual within [tol/2, 2 tol]
};

// Re-checks every closed vertex against the exact hull oracle: the full
// out-list embraces the vertex, the list without its farthest element does not.
VerifyReport verify_graph(const NNEGraph& graph, double tol = kDefaultHullTolerance);

// Configuration block, then "graph <n>", then "<index> <closed> <k> <n1> ... <nk>" per vertex.
void write_graph(std::ostream& out, const NNEGraph& graph);
NNEGraph read_graph(std::istream& in);

}  // namespace nne
