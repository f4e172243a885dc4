#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nne/functionals.hpp"
#include "nne/stats.hpp"

namespace nne {

struct ExperimentPlan {
  Space space{SpaceKind::Euclidean, 2};
  std::vector<FunctionalSpec> cells;
  double buffer = 4.0;
  int replications = 2;
  std::uint64_t base_seed = 1;
  unsigned parallelism = 1;

  double max_t() const;
  double sample_radius() const { return max_t() + buffer; }
};

// Default buffer added to the largest window: 4 (Euclidean), 3 (hyperbolic).
double default_buffer(SpaceKind kind);

void validate(const ExperimentPlan& plan);

struct CellStats {
  double mean = 0.0;
  double variance = 0.0;
  double ks_distance = 0.0;
  double wasserstein_distance = 0.0;
  double vol_bt = 0.0;
};

struct ExperimentResult {
  ExperimentPlan plan;
  std::vector<std::vector<double>> samples;  // [cell][replication]
  std::vector<CellStats> stats;
};

// One sample on B_{t_max + buffer} and one graph build per replication (stream
// id = replication index); every cell is evaluated on that graph. Output is
// independent of the thread count.
ExperimentResult run_campaign(const ExperimentPlan& plan);

CellStats cell_stats(std::span<const double> samples, const Space& space, double t);

struct VarianceRow {
  double t = 0.0;
  double vol_bt = 0.0;
  double variance = 0.0;
  double ratio = 0.0;
};

struct VarianceScalingReport {
  std::vector<VarianceRow> rows;
  double min_ratio = 0.0;
  double spread = 0.0;  // max ratio / min ratio
};

// Var / vol(B_t) over the cells matching one functional (label, parameter),
// restricted to the given t values when `ts` is non-empty.
VarianceScalingReport variance_scaling_report(const ExperimentResult& result, const std::string& label,
                                              double parameter, const std::vector<double>& ts = {});
VarianceScalingReport variance_scaling_report(const std::vector<VarianceRow>& rows);

struct RatePoint {
  double t = 0.0;
  double vol_bt = 0.0;
  double distance = 0.0;
};

struct RateReport {
  LinearFit fit;  // log distance on log vol(B_t)
  std::vector<double> scaled;  // distance * sqrt(vol(B_t))
  double scaled_spread = 0.0;  // max / min of `scaled`
};

RateReport rate_check(const std::vector<RatePoint>& points);

// Rate points for one functional, using the KS or the Wasserstein distance.
std::vector<RatePoint> rate_points(const ExperimentResult& result, const std::string& label, double parameter,
                                   bool kolmogorov = true);

// Plan file: flat "key = value" lines, '#' comments. Keys: space, dim, t
// (comma list), alpha (comma list), k (comma list), buffer, replications,
// seed, threads. Unknown keys are rejected.
ExperimentPlan read_plan(std::istream& in);

// CSV: seed,stream,t,kind,param,value (one row per replication per cell).
void write_samples_csv(std::ostream& out, const ExperimentResult& result);
// JSON: per-cell stats plus rate and variance summaries per functional.
void write_summary_json(std::ostream& out, const ExperimentResult& result);

// Stabilization radii of points inserted uniformly in B(p, insert_radius) into
// independent samples on B(p, sample_radius).
struct StabilizationSample {
  std::vector<double> radii;          // uncensored R values
  std::vector<double> point_counts;   // eta(B(x, R)) per uncensored record
  std::size_t censored = 0;
  std::size_t total = 0;
};

StabilizationSample sample_stabilization_radii(const Space& space, double sample_radius, double insert_radius,
                                               int count, std::uint64_t seed, unsigned parallelism = 1);

struct TailReport {
  std::vector<double> s;         // evaluation points (sorted distinct radii)
  std::vector<double> survival;  // P(R > s)
  std::vector<double> rho_half;  // rho(s / 2)
  double spearman = 0.0;         // log survival vs rho(s/2), on survival in [lo, hi]
  std::size_t points_used = 0;
};

TailReport tail_report(const Space& space, std::span<const double> radii, double survival_lo = 0.01,
                       double survival_hi = 0.5);

}  // namespace nne
