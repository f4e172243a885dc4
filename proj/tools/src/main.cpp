// nne: sample Poisson configurations, build NNE graphs, evaluate functionals,
// run Monte Carlo campaigns and render planar realizations.
//
// Exit codes: 0 ok, 1 I/O failure, 2 usage or precondition, 3 domain error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nne/campaign.hpp"
#include "nne/error.hpp"
#include "nne/functionals.hpp"
#include "nne/graph.hpp"
#include "nne/render.hpp"
#include "nne/sampling.hpp"

namespace {

constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

// Writes through a buffer so a failed run never leaves half a file behind.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

// Files every flat key under the subcommand being run.
class FlatConfig : public CLI::ConfigINI {
 public:
  explicit FlatConfig(std::string section) : section_(std::move(section)) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigINI::from_config(input);
    for (auto& item : items) {
      if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == "default")) {
        throw CLI::ConfigError("config file must be flat (no sections): " + item.fullname());
      }
      item.parents.clear();
      if (!section_.empty()) item.parents.push_back(section_);
    }
    return items;
  }

 private:
  std::string section_;
};

struct Options {
  std::string space = "euclidean";
  int dim = 2;
  double radius = 0.0;
  std::optional<double> window;
  std::optional<double> buffer;
  std::optional<double> alpha;
  std::optional<int> k;
  std::optional<double> t;
  std::optional<int> replications;
  std::optional<std::uint64_t> seed;
  std::uint64_t stream = 0;
  unsigned threads = 1;
  std::string out;
  std::string style;
  std::string input;
};

int cmd_sample(const Options& o) {
  const nne::Space space(nne::parse_space_kind(o.space), o.dim);
  if (!(o.radius > 0.0)) throw std::invalid_argument("--radius must be > 0");
  nne::RandomStream rng(o.seed.value_or(1), o.stream);
  nne::PointConfiguration config = nne::sample_poisson_ball(space, o.radius, rng);
  if (o.window) {
    if (!(*o.window > 0.0 && *o.window <= o.radius)) throw std::invalid_argument("--window must lie in (0, radius]");
    config.window_radius = *o.window;
  }
  std::ostringstream ss;
  nne::write_configuration(ss, config);
  emit(o.out, ss.str());
  return 0;
}

int cmd_build(const Options& o) {
  auto in = open_in(o.input);
  const nne::PointConfiguration config = nne::read_configuration(in);
  nne::BuildOptions opts;
  opts.threads = o.threads;
  const nne::NNEGraph graph = nne::build_nne(config, opts);
  std::ostringstream ss;
  nne::write_graph(ss, graph);
  emit(o.out, ss.str());
  std::size_t unclosed = 0;
  for (bool c : graph.closed) unclosed += c ? 0 : 1;
  if (unclosed > 0) std::cerr << "note: " << unclosed << " vertices near the sampling boundary did not close\n";
  return 0;
}

int cmd_measure(const Options& o) {
  if (o.alpha.has_value() == o.k.has_value()) throw std::invalid_argument("measure needs exactly one of --alpha, --k");
  auto in = open_in(o.input);
  const nne::NNEGraph graph = nne::read_graph(in);
  const double t = o.t.value_or(graph.config.window_radius);
  if (!std::isfinite(t)) throw std::invalid_argument("--t is required when the graph has no finite window");
  const auto spec = o.alpha ? nne::FunctionalSpec::length_power(*o.alpha, t)
                            : nne::FunctionalSpec::outdegree_count(*o.k, t, graph.config.space.dim());
  const double value = nne::evaluate(graph, spec, nne::UnclosedPolicy::Strict);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g\n", value);
  emit(o.out, buf);
  return 0;
}

int cmd_experiment(const Options& o) {
  auto in = open_in(o.input);
  nne::ExperimentPlan plan = nne::read_plan(in);
  if (o.buffer) plan.buffer = *o.buffer;
  if (o.replications) plan.replications = *o.replications;
  if (o.seed) plan.base_seed = *o.seed;
  plan.parallelism = o.threads;
  nne::validate(plan);

  const nne::ExperimentResult result = nne::run_campaign(plan);
  const std::filesystem::path dir = o.out.empty() ? "." : o.out;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");
  std::ostringstream csv, json;
  nne::write_samples_csv(csv, result);
  nne::write_summary_json(json, result);
  emit((dir / "samples.csv").string(), csv.str());
  emit((dir / "summary.json").string(), json.str());

  std::printf("%-6s %8s %8s %14s %14s %10s %12s\n", "kind", "param", "t", "mean", "variance", "ks", "wasserstein");
  for (std::size_t c = 0; c < plan.cells.size(); ++c) {
    const auto& cell = plan.cells[c];
    const auto& s = result.stats[c];
    std::printf("%-6s %8g %8g %14.6g %14.6g %10.4f %12.4f\n", cell.label().c_str(), cell.parameter(), cell.t, s.mean,
                s.variance, s.ks_distance, s.wasserstein_distance);
  }
  std::vector<std::pair<std::string, double>> seen;
  for (const auto& cell : plan.cells) {
    const std::pair<std::string, double> key{cell.label(), cell.parameter()};
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(key);
    const auto points = nne::rate_points(result, key.first, key.second);
    if (points.size() < 3) continue;
    const auto rep = nne::rate_check(points);
    std::printf("rate %s=%g: slope of log KS on log vol(B_t) = %.3f  [95%% CI %.3f, %.3f], KS*sqrt(vol) spread %.2f\n",
                key.first.c_str(), key.second, rep.fit.slope, rep.fit.slope_ci_low, rep.fit.slope_ci_high,
                rep.scaled_spread);
  }
  std::printf("wrote %s and %s\n", (dir / "samples.csv").string().c_str(), (dir / "summary.json").string().c_str());
  return 0;
}

int cmd_render(const Options& o) {
  auto in = open_in(o.input);
  const nne::NNEGraph graph = nne::read_graph(in);
  nne::RenderOptions ro;
  ro.style = o.style.empty() ? (graph.config.space.hyperbolic() ? nne::RenderStyle::Poincare : nne::RenderStyle::Euclidean)
                             : nne::parse_render_style(o.style);
  const double w = o.t ? *o.t : o.window ? *o.window : graph.config.window_radius;
  ro.window = std::isfinite(w) ? w : 0.0;
  std::ostringstream ss;
  nne::render_svg(ss, graph, ro);
  emit(o.out, ss.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nearest neighbour embracing graphs in Euclidean and hyperbolic space"};
  app.name("nne");
  app.require_subcommand(1);

  Options o;
  auto threads = [&](CLI::App* sub) {
    sub->add_option("--threads", o.threads, "Worker threads")->envname("NNE_THREADS")->check(CLI::Range(1u, 1024u));
  };

  auto* sample = app.add_subcommand("sample", "Sample a Poisson configuration on B(p, R)");
  sample->add_option("--space", o.space, "euclidean or hyperbolic")->check(CLI::IsMember({"euclidean", "hyperbolic"}));
  sample->add_option("--dim", o.dim, "Dimension d (2..8)");
  sample->add_option("--radius", o.radius, "Sampling radius R")->required();
  sample->add_option("--window", o.window, "Observation window radius (default: R)");
  sample->add_option("--seed", o.seed, "Random seed");
  sample->add_option("--stream", o.stream, "Stream id within the seed");
  sample->add_option("--out", o.out, "Output file (default: stdout)");

  auto* build = app.add_subcommand("build", "Build the NNE graph of a points file");
  build->add_option("points", o.input, "Points file")->required();
  build->add_option("--out", o.out, "Output graph file (default: stdout)");
  threads(build);

  auto* measure = app.add_subcommand("measure", "Evaluate F_t^(alpha) or G_t^(k) on a graph file");
  measure->add_option("graph", o.input, "Graph file")->required();
  measure->add_option("--alpha", o.alpha, "Edge length exponent (>= 0)");
  measure->add_option("--k", o.k, "Outdegree to count (>= d+1)");
  measure->add_option("--t", o.t, "Window radius (default: the file's window)");
  measure->add_option("--out", o.out, "Output file (default: stdout)");

  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo campaign from a plan file");
  experiment->add_option("plan", o.input, "Plan file")->required();
  experiment->add_option("--buffer", o.buffer, "Override the plan's sampling buffer");
  experiment->add_option("--replications", o.replications, "Override the plan's replication count");
  experiment->add_option("--seed", o.seed, "Override the plan's seed");
  experiment->add_option("--out", o.out, "Output directory (default: .)");
  threads(experiment);

  auto* render = app.add_subcommand("render", "Draw a d=2 graph as SVG");
  render->add_option("graph", o.input, "Graph file")->required();
  render->add_option("--style", o.style, "euclidean or poincare (default: by space)");
  render->add_option("--t", o.t, "Window circle radius");
  render->add_option("--window", o.window, "Alias for --t");
  render->add_option("--out", o.out, "Output SVG (default: stdout)");

  // --config takes a flat key = value file whose keys are the flags of the
  // chosen subcommand. Flags on the command line win; unknown keys are errors.
  std::string chosen;
  for (int i = 1; i < argc && chosen.empty(); ++i) {
    for (auto* sub : {sample, build, measure, experiment, render}) {
      if (sub->get_name() == argv[i]) chosen = argv[i];
    }
  }
  app.set_config("--config", "", "Read flag values from a flat key = value file");
  app.config_formatter(std::make_shared<FlatConfig>(chosen));
  app.allow_config_extras(CLI::config_extras_mode::error);

  // CLI11 reads the config file on the top-level app only, so hoist --config
  // ahead of the subcommand wherever it was given.
  std::vector<std::string> args;
  std::vector<std::string> rest;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) {
      args.push_back(a);
      args.push_back(argv[++i]);
    } else if (a.rfind("--config=", 0) == 0) {
      args.push_back(a);
    } else {
      rest.push_back(a);
    }
  }
  args.insert(args.end(), rest.begin(), rest.end());
  std::reverse(args.begin(), args.end());  // CLI11 consumes vectors back to front

  try {
    app.parse(args);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sample) return cmd_sample(o);
    if (*build) return cmd_build(o);
    if (*measure) return cmd_measure(o);
    if (*experiment) return cmd_experiment(o);
    if (*render) return cmd_render(o);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: value out of range: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nne::UnclosedVertexError& e) {
    std::cerr << "error: " << e.what() << " (vertex " << e.vertex() << ", stream " << e.stream() << ")\n";
    return kExitDomain;
  } catch (const nne::NumericalFailure& e) {
    std::cerr << "error: numerical failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return kExitDomain;
  } catch (const nne::DegenerateSample& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
