#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "nne/graph.hpp"

namespace nne {

struct LengthPower {
  double alpha = 1.0;
};

struct OutdegreeCount {
  int k = 3;
};

// F_t^(alpha): half the alpha-powered lengths of all edges incident to vertices
// in B_t (edges with one endpoint outside B_t weigh 1/2).
// G_t^(k): number of vertices in B_t with outdegree exactly k.
struct FunctionalSpec {
  std::variant<LengthPower, OutdegreeCount> kind;
  double t = 1.0;

  static FunctionalSpec length_power(double alpha, double t);
  static FunctionalSpec outdegree_count(int k, double t, int dim);

  bool is_length_power() const noexcept { return std::holds_alternative<LengthPower>(kind); }
  std::string label() const;  // "alpha" or "k"
  double parameter() const noexcept;
};

// Strict: an unclosed vertex inside B_t throws UnclosedVertexError.
// Lenient: such vertices are skipped (they contribute no out-edges either way).
enum class UnclosedPolicy { Strict, Lenient };

double length_power(const NNEGraph& graph, double alpha, double t, UnclosedPolicy policy = UnclosedPolicy::Strict);
long outdegree_count(const NNEGraph& graph, int k, double t, UnclosedPolicy policy = UnclosedPolicy::Strict);
double evaluate(const NNEGraph& graph, const FunctionalSpec& spec, UnclosedPolicy policy = UnclosedPolicy::Strict);

// Vertices inside B_t that did not close, in index order.
std::vector<std::size_t> unclosed_in_window(const NNEGraph& graph, double t);

struct DifferenceOptions {
  BuildOptions build;
  UnclosedPolicy policy = UnclosedPolicy::Lenient;
};

// D_x F = F(config + x) - F(config), by two full builds.
double add_one_cost(const PointConfiguration& config, const Point& x, const FunctionalSpec& spec,
                    const DifferenceOptions& options = {});

// D_{x,y} F by the four-term alternating sum.
double second_difference(const PointConfiguration& config, const Point& x, const Point& y,
                         const FunctionalSpec& spec, const DifferenceOptions& options = {});

struct StabilizationRecord {
  double r1 = 0.0;
  double r2 = 0.0;
  double r = 0.0;
  bool censored = false;  // x did not close within its trusted radius
};

// R1 = max distance from x to N(x, config + x).
// R2 = max over z with x in N(z, config + x) of max_{y in N(z, config) + x} d(z, y).
// For a closed z the extra term d(z, x) never exceeds the maximum; for a z
// that only closes thanks to x it covers the closing distance.
StabilizationRecord stabilization_radius(const PointConfiguration& config, const Point& x,
                                         const BuildOptions& options = {});

// Same, reusing already built graphs of config and config + x (x last).
StabilizationRecord stabilization_radius(const NNEGraph& without, const NNEGraph& with);

}  // namespace nne
