#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "nne/campaign.hpp"

using namespace nne;

namespace {

ExperimentPlan small_plan(unsigned threads) {
  ExperimentPlan plan;
  plan.space = Space(SpaceKind::Euclidean, 2);
  for (double t : {2.0, 3.0, 4.0}) {
    plan.cells.push_back(FunctionalSpec::length_power(1.0, t));
    plan.cells.push_back(FunctionalSpec::outdegree_count(3, t, 2));
  }
  plan.replications = 8;
  plan.base_seed = 99;
  plan.parallelism = threads;
  return plan;
}

std::string csv_of(const ExperimentResult& r) {
  std::ostringstream ss;
  write_samples_csv(ss, r);
  return ss.str();
}

}  // namespace

TEST_CASE("campaigns are reproducible and schedule independent") {
  const auto a = run_campaign(small_plan(1));
  const auto b = run_campaign(small_plan(1));
  const auto c = run_campaign(small_plan(4));
  CHECK(a.samples.size() == 6);
  CHECK(a.samples[0].size() == 8);
  CHECK(csv_of(a) == csv_of(b));
  CHECK(csv_of(a) == csv_of(c));
  std::ostringstream ja, jc;
  write_summary_json(ja, a);
  write_summary_json(jc, c);
  CHECK(ja.str() == jc.str());
  const auto j = nlohmann::json::parse(ja.str());
  CHECK(j["cells"].size() == 6);
  CHECK(j["functionals"][0].contains("rate_ks"));
}

TEST_CASE("plan parsing") {
  std::istringstream in(
      "# comment\nspace = hyperbolic\ndim = 2\nt = 4, 6\nalpha = 1\nk = 3, 4\nreplications = 5\nseed = 3\n");
  const auto plan = read_plan(in);
  CHECK(plan.space.hyperbolic());
  CHECK(plan.buffer == 3.0);
  CHECK(plan.cells.size() == 6);
  CHECK(plan.sample_radius() == 9.0);
  std::istringstream unknown("space = euclidean\nt = 4\nalpha = 1\nfoo = 2\n");
  CHECK_THROWS_AS(read_plan(unknown), std::invalid_argument);
  std::istringstream small_k("t = 4\nk = 2\n");
  CHECK_THROWS_AS(read_plan(small_k), std::invalid_argument);
  std::istringstream empty("space = euclidean\n");
  CHECK_THROWS_AS(read_plan(empty), std::invalid_argument);
}

TEST_CASE("variance scaling and rate reports on constructed input") {
  const std::vector<VarianceRow> same{{8.0, 10.0, 20.0, 0.0}, {8.0, 10.0, 20.0, 0.0}};
  CHECK(variance_scaling_report(same).spread == 1.0);
  const std::vector<VarianceRow> twice{{8.0, 10.0, 20.0, 0.0}, {10.0, 31.0, 62.0, 0.0}, {12.0, 7.0, 14.0, 0.0}};
  const auto rep = variance_scaling_report(twice);
  for (const auto& row : rep.rows) CHECK(row.ratio == doctest::Approx(2.0));

  std::vector<RatePoint> exact, flat;
  for (double v : {100.0, 300.0, 900.0, 2000.0}) {
    exact.push_back({0.0, v, 0.7 / std::sqrt(v)});
    flat.push_back({0.0, v, 0.05});
  }
  CHECK(rate_check(exact).fit.slope == doctest::Approx(-0.5));
  CHECK(rate_check(exact).scaled_spread == doctest::Approx(1.0));
  CHECK(rate_check(flat).fit.slope == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS(rate_check(std::vector<RatePoint>(exact.begin(), exact.begin() + 2)));
}

TEST_CASE("variance is stable across independent campaigns") {
  ExperimentPlan plan;
  plan.space = Space(SpaceKind::Euclidean, 2);
  plan.cells = {FunctionalSpec::length_power(1.0, 10.0)};
  plan.replications = 1000;
  plan.base_seed = 1001;
  const auto a = run_campaign(plan);
  plan.base_seed = 2002;
  const auto b = run_campaign(plan);
  const double ratio = a.stats[0].variance / b.stats[0].variance;
  CHECK(ratio > 0.5);
  CHECK(ratio < 2.0);
}

TEST_CASE("tail report") {
  const Space e2(SpaceKind::Euclidean, 2);
  std::vector<double> radii;
  for (int i = 1; i <= 200; ++i) radii.push_back(std::sqrt(static_cast<double>(i)));
  const auto rep = tail_report(e2, radii);
  CHECK(rep.points_used > 50);
  CHECK(rep.spearman == doctest::Approx(-1.0));
  CHECK(rep.survival.back() == 0.0);
}
