#include "nne/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "nne/error.hpp"

namespace nne {
namespace {

// Runs body(i) for i in [0, n). On failure the exception of the lowest failing
// index is rethrown, so error reports do not depend on scheduling either.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = n;
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        {
          std::lock_guard lock(mu);
          if (i > failed_at) return;
        }
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (i < failed_at) {
            failed_at = i;
            failure = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> parse_list(const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    const std::string tok = item.substr(b, e - b + 1);
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("malformed list entry '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool same_functional(const FunctionalSpec& spec, const std::string& label, double parameter) {
  return spec.label() == label && spec.parameter() == parameter;
}

}  // namespace

double default_buffer(SpaceKind kind) { return kind == SpaceKind::Euclidean ? 4.0 : 3.0; }

double ExperimentPlan::max_t() const {
  double m = 0.0;
  for (const auto& c : cells) m = std::max(m, c.t);
  return m;
}

void validate(const ExperimentPlan& plan) {
  if (plan.cells.empty()) throw std::invalid_argument("experiment plan has an empty grid");
  if (plan.replications < 2) throw std::invalid_argument("experiment plan needs at least 2 replications");
  if (!(plan.buffer >= 0.0)) throw std::invalid_argument("buffer must be >= 0");
  for (const auto& c : plan.cells) {
    if (!(c.t > 0.0)) throw std::invalid_argument("window radius t must be > 0");
    if (!c.is_length_power() && c.parameter() < plan.space.dim() + 1) {
      throw std::invalid_argument("outdegree k must satisfy k >= d+1");
    }
  }
}

CellStats cell_stats(std::span<const double> samples, const Space& space, double t) {
  CellStats s;
  s.mean = mean(samples);
  s.variance = variance(samples);
  s.vol_bt = ball_volume(space, t);
  if (s.variance > 0.0) {
    const auto z = standardize(samples);
    s.ks_distance = ks_distance_to_normal(z);
    s.wasserstein_distance = wasserstein_distance_to_normal(z);
  } else {
    s.ks_distance = 1.0;
    s.wasserstein_distance = std::numeric_limits<double>::infinity();
  }
  return s;
}

ExperimentResult run_campaign(const ExperimentPlan& plan) {
  validate(plan);
  ExperimentResult result;
  result.plan = plan;
  const std::size_t reps = static_cast<std::size_t>(plan.replications);
  result.samples.assign(plan.cells.size(), std::vector<double>(reps));
  const double radius = plan.sample_radius();

  parallel_for(reps, plan.parallelism, [&](std::size_t r) {
    RandomStream rng(plan.base_seed, r);
    const PointConfiguration config = sample_poisson_ball(plan.space, radius, rng);
    const NNEGraph graph = build_nne(config);
    for (std::size_t c = 0; c < plan.cells.size(); ++c) {
      try {
        result.samples[c][r] = evaluate(graph, plan.cells[c], UnclosedPolicy::Strict);
      } catch (const UnclosedVertexError& e) {
        throw UnclosedVertexError("campaign replication (stream " + std::to_string(r) + "), vertex " +
                                      std::to_string(e.vertex()) + ": " + e.what(),
                                  e.vertex(), r);
      }
    }
  });

  result.stats.reserve(plan.cells.size());
  for (std::size_t c = 0; c < plan.cells.size(); ++c) {
    result.stats.push_back(cell_stats(result.samples[c], plan.space, plan.cells[c].t));
  }
  return result;
}

VarianceScalingReport variance_scaling_report(const std::vector<VarianceRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("variance scaling report needs at least one row");
  VarianceScalingReport rep;
  rep.rows = rows;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (auto& row : rep.rows) {
    row.ratio = row.variance / row.vol_bt;
    lo = std::min(lo, row.ratio);
    hi = std::max(hi, row.ratio);
  }
  rep.min_ratio = lo;
  rep.spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return rep;
}

VarianceScalingReport variance_scaling_report(const ExperimentResult& result, const std::string& label,
                                              double parameter, const std::vector<double>& ts) {
  std::vector<VarianceRow> rows;
  for (std::size_t c = 0; c < result.plan.cells.size(); ++c) {
    const auto& cell = result.plan.cells[c];
    if (!same_functional(cell, label, parameter)) continue;
    if (!ts.empty() && std::find(ts.begin(), ts.end(), cell.t) == ts.end()) continue;
    rows.push_back(VarianceRow{cell.t, result.stats[c].vol_bt, result.stats[c].variance, 0.0});
  }
  if (rows.size() < 2) throw std::invalid_argument("variance scaling needs at least two window radii");
  return variance_scaling_report(rows);
}

RateReport rate_check(const std::vector<RatePoint>& points) {
  if (points.size() < 3) throw std::invalid_argument("rate check needs at least three window radii");
  std::vector<double> lx, ly;
  RateReport rep;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& p : points) {
    lx.push_back(std::log(p.vol_bt));
    ly.push_back(std::log(p.distance));
    const double scaled = p.distance * std::sqrt(p.vol_bt);
    rep.scaled.push_back(scaled);
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
  }
  rep.fit = linear_regression(lx, ly);
  rep.scaled_spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return rep;
}

std::vector<RatePoint> rate_points(const ExperimentResult& result, const std::string& label, double parameter,
                                   bool kolmogorov) {
  std::vector<RatePoint> out;
  for (std::size_t c = 0; c < result.plan.cells.size(); ++c) {
    if (!same_functional(result.plan.cells[c], label, parameter)) continue;
    const auto& s = result.stats[c];
    out.push_back(RatePoint{result.plan.cells[c].t, s.vol_bt, kolmogorov ? s.ks_distance : s.wasserstein_distance});
  }
  std::sort(out.begin(), out.end(), [](const RatePoint& a, const RatePoint& b) { return a.t < b.t; });
  return out;
}

ExperimentPlan read_plan(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("plan line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    static const char* const known[] = {"space", "dim", "t", "alpha", "k", "buffer", "replications", "seed", "threads"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known)) {
      throw std::invalid_argument("plan line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (kv.count(key)) throw std::invalid_argument("plan key '" + key + "' given twice");
    kv[key] = trim(line.substr(eq + 1));
  }
  auto get = [&](const std::string& key, const std::string& fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  };

  ExperimentPlan plan;
  plan.space = Space(parse_space_kind(get("space", "euclidean")), std::stoi(get("dim", "2")));
  plan.buffer = kv.count("buffer") ? std::stod(kv["buffer"]) : default_buffer(plan.space.kind());
  plan.replications = std::stoi(get("replications", "2"));
  plan.base_seed = std::stoull(get("seed", "1"));
  plan.parallelism = static_cast<unsigned>(std::stoul(get("threads", "1")));

  const auto ts = parse_list(get("t", ""));
  const auto alphas = parse_list(get("alpha", ""));
  const auto ks = parse_list(get("k", ""));
  if (ts.empty()) throw std::invalid_argument("plan needs a non-empty 't' list");
  if (alphas.empty() && ks.empty()) throw std::invalid_argument("plan needs an 'alpha' or 'k' list");
  for (double t : ts) {
    for (double a : alphas) plan.cells.push_back(FunctionalSpec::length_power(a, t));
    for (double k : ks) {
      if (k != std::floor(k)) throw std::invalid_argument("outdegree k must be an integer");
      plan.cells.push_back(FunctionalSpec::outdegree_count(static_cast<int>(k), t, plan.space.dim()));
    }
  }
  validate(plan);
  return plan;
}

void write_samples_csv(std::ostream& out, const ExperimentResult& result) {
  out << "seed,stream,t,kind,param,value\n";
  const auto& plan = result.plan;
  for (std::size_t r = 0; r < static_cast<std::size_t>(plan.replications); ++r) {
    for (std::size_t c = 0; c < plan.cells.size(); ++c) {
      const auto& cell = plan.cells[c];
      out << plan.base_seed << ',' << r << ',' << format_double(cell.t) << ',' << cell.label() << ','
          << format_double(cell.parameter()) << ',' << format_double(result.samples[c][r]) << '\n';
    }
  }
}

void write_summary_json(std::ostream& out, const ExperimentResult& result) {
  using nlohmann::ordered_json;
  const auto& plan = result.plan;
  ordered_json j;
  j["space"] = to_string(plan.space.kind());
  j["dim"] = plan.space.dim();
  j["buffer"] = plan.buffer;
  j["replications"] = plan.replications;
  j["seed"] = plan.base_seed;
  j["common_random_numbers"] = true;

  ordered_json cells = ordered_json::array();
  std::vector<std::pair<std::string, double>> functionals;
  for (std::size_t c = 0; c < plan.cells.size(); ++c) {
    const auto& cell = plan.cells[c];
    const auto& s = result.stats[c];
    cells.push_back({{"t", cell.t},
                     {"kind", cell.label()},
                     {"param", cell.parameter()},
                     {"mean", s.mean},
                     {"variance", s.variance},
                     {"ks", s.ks_distance},
                     {"wasserstein", s.wasserstein_distance},
                     {"vol_bt", s.vol_bt}});
    const std::pair<std::string, double> key{cell.label(), cell.parameter()};
    if (std::find(functionals.begin(), functionals.end(), key) == functionals.end()) functionals.push_back(key);
  }
  j["cells"] = cells;

  ordered_json summaries = ordered_json::array();
  for (const auto& [label, param] : functionals) {
    ordered_json f;
    f["kind"] = label;
    f["param"] = param;
    const auto ks_points = rate_points(result, label, param, true);
    ordered_json ks_by_t = ordered_json::array();
    for (const auto& p : ks_points) ks_by_t.push_back({{"t", p.t}, {"ks", p.distance}});
    f["ks_by_t"] = ks_by_t;
    if (ks_points.size() >= 3) {
      for (const bool kolmogorov : {true, false}) {
        const auto rep = rate_check(rate_points(result, label, param, kolmogorov));
        f[kolmogorov ? "rate_ks" : "rate_wasserstein"] = {{"slope", rep.fit.slope},
                                                          {"slope_ci_low", rep.fit.slope_ci_low},
                                                          {"slope_ci_high", rep.fit.slope_ci_high},
                                                          {"scaled_distance", rep.scaled},
                                                          {"scaled_spread", rep.scaled_spread}};
      }
    }
    if (ks_points.size() >= 2) {
      const auto vs = variance_scaling_report(result, label, param);
      ordered_json rows = ordered_json::array();
      for (const auto& r : vs.rows) {
        rows.push_back({{"t", r.t}, {"vol_bt", r.vol_bt}, {"variance", r.variance}, {"ratio", r.ratio}});
      }
      f["variance_scaling"] = {{"rows", rows}, {"min_ratio", vs.min_ratio}, {"spread", vs.spread}};
    }
    summaries.push_back(f);
  }
  j["functionals"] = summaries;
  out << j.dump(2) << '\n';
}

StabilizationSample sample_stabilization_radii(const Space& space, double sample_radius, double insert_radius,
                                               int count, std::uint64_t seed, unsigned parallelism) {
  if (count < 1) throw std::invalid_argument("need at least one stabilization sample");
  if (!(insert_radius > 0.0 && insert_radius < sample_radius)) {
    throw std::invalid_argument("insertion radius must lie in (0, sample_radius)");
  }
  struct Slot {
    StabilizationRecord rec;
    double count = 0.0;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(count));
  parallel_for(slots.size(), parallelism, [&](std::size_t i) {
    RandomStream rng(seed, i);
    const PointConfiguration config = sample_poisson_ball(space, sample_radius, rng);
    std::array<double, kMaxDim> dir{};
    double n2 = 0.0;
    while (n2 == 0.0) {
      for (int j = 0; j < space.dim(); ++j) {
        dir[static_cast<std::size_t>(j)] = rng.normal();
        n2 += dir[static_cast<std::size_t>(j)] * dir[static_cast<std::size_t>(j)];
      }
    }
    for (int j = 0; j < space.dim(); ++j) dir[static_cast<std::size_t>(j)] /= std::sqrt(n2);
    const double r = radial_inverse_cdf(space, insert_radius, rng.uniform());
    const Point x = point_at(space, r, std::span<const double>(dir.data(), static_cast<std::size_t>(space.dim())));
    const NNEGraph without = build_nne(config);
    const NNEGraph with = build_nne(with_point(config, x));
    slots[i].rec = stabilization_radius(without, with);
    for (const Point& pt : config.points) {
      if (distance_unchecked(space, x, pt) <= slots[i].rec.r) slots[i].count += 1.0;
    }
  });
  StabilizationSample out;
  out.total = slots.size();
  for (const auto& s : slots) {
    if (s.rec.censored) {
      ++out.censored;
      continue;
    }
    out.radii.push_back(s.rec.r);
    out.point_counts.push_back(s.count);
  }
  return out;
}

TailReport tail_report(const Space& space, std::span<const double> radii, double survival_lo, double survival_hi) {
  if (radii.empty()) throw std::invalid_argument("tail report needs radii");
  std::vector<double> sorted(radii.begin(), radii.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  TailReport rep;
  std::vector<double> log_surv, rho_used;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    const double s = sorted[i];
    const double surv = (n - static_cast<double>(i + 1)) / n;
    rep.s.push_back(s);
    rep.survival.push_back(surv);
    rep.rho_half.push_back(rho(space, 0.5 * s));
    if (surv >= survival_lo && surv <= survival_hi) {
      log_surv.push_back(std::log(surv));
      rho_used.push_back(rep.rho_half.back());
    }
  }
  rep.points_used = log_surv.size();
  rep.spearman = log_surv.size() >= 2 ? spearman(log_surv, rho_used) : 0.0;
  return rep;
}

}  // namespace nne
