#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

#include "nne/functionals.hpp"
#include "nne/graph.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = NNE_CLI_PATH;
const std::string kData = NNE_TEST_DATA_DIR;

int run(const std::string& args, const std::string& redirect = "") {
  const std::string cmd = kCli + " " + args + (redirect.empty() ? " >/dev/null 2>&1" : redirect);
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "nne_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("sample: counts, determinism, preconditions") {
  const auto a = scratch("a.pts");
  const auto b = scratch("b.pts");
  REQUIRE(run("sample --space euclidean --dim 2 --radius 5 --seed 7 --out " + a.string()) == 0);
  REQUIRE(run("sample --space euclidean --dim 2 --radius 5 --seed 7 --out " + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));
  std::ifstream in(a);
  const auto config = nne::read_configuration(in);
  // Poisson(25 pi): 6 standard deviations either side.
  const double mean = 25.0 * std::numbers::pi;
  CHECK(std::abs(static_cast<double>(config.size()) - mean) < 6.0 * std::sqrt(mean));
  CHECK(run("sample --radius 0") == 2);
  CHECK(run("sample --radius 3 --dim 1") == 2);
  CHECK(run("sample --radius 3 --space spherical") == 2);
  CHECK(run("sample --radius 3 --bogus") == 2);
  CHECK(run("sample --radius 3 --out /nonexistent/dir/x.pts") == 1);
}

TEST_CASE("build and measure") {
  const auto pts = scratch("m.pts");
  const auto graph = scratch("m.graph");
  const auto value = scratch("m.txt");
  REQUIRE(run("sample --radius 9 --seed 3 --out " + pts.string()) == 0);
  REQUIRE(run("build " + pts.string() + " --out " + graph.string()) == 0);
  REQUIRE(run("measure " + graph.string() + " --alpha 1 --t 5", " >" + value.string() + " 2>/dev/null") == 0);
  std::ifstream pin(pts);
  const auto g = nne::build_nne(nne::read_configuration(pin));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g\n", nne::length_power(g, 1.0, 5.0));
  CHECK(slurp(value) == buf);

  CHECK(run("measure " + graph.string() + " --k 2 --t 5") == 2);
  CHECK(run("measure " + graph.string() + " --k 3 --alpha 1 --t 5") == 2);
  CHECK(run("measure " + graph.string() + " --alpha 1 --t 9") == 3);  // unclosed vertices at the boundary
  CHECK(run("measure /nonexistent.graph --alpha 1 --t 1") == 1);

  const auto toy = scratch("toy.txt");
  REQUIRE(run("measure " + kData + "/two_edge.graph --alpha 0", " >" + toy.string() + " 2>/dev/null") == 0);
  CHECK(std::stod(slurp(toy)) == 1.5);
}

TEST_CASE("experiment: smoke plan is fast and reproducible") {
  const auto d1 = scratch("exp1");
  const auto d2 = scratch("exp2");
  const auto start = std::chrono::steady_clock::now();
  REQUIRE(run("experiment " + kData + "/../../tools/plans/smoke.plan --out " + d1.string()) == 0);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 5.0);
  REQUIRE(run("experiment " + kData + "/../../tools/plans/smoke.plan --threads 3 --out " + d2.string()) == 0);
  CHECK(slurp(d1 / "samples.csv") == slurp(d2 / "samples.csv"));
  CHECK(slurp(d1 / "samples.csv").rfind("seed,stream,t,kind,param,value\n", 0) == 0);
  CHECK(slurp(d1 / "summary.json").find("\"rate_ks\"") != std::string::npos);
  const auto bad = scratch("bad.plan");
  std::ofstream(bad) << "t = 3\nalpha = 1\ncolour = blue\n";
  CHECK(run("experiment " + bad.string()) == 2);
}

TEST_CASE("render") {
  const auto pts = scratch("r.pts");
  const auto graph = scratch("r.graph");
  const auto s1 = scratch("r1.svg");
  const auto s2 = scratch("r2.svg");
  REQUIRE(run("sample --space hyperbolic --radius 4 --seed 5 --out " + pts.string()) == 0);
  REQUIRE(run("build " + pts.string() + " --out " + graph.string()) == 0);
  REQUIRE(run("render " + graph.string() + " --style poincare --t 3 --out " + s1.string()) == 0);
  REQUIRE(run("render " + graph.string() + " --style poincare --t 3 --out " + s2.string()) == 0);
  CHECK(slurp(s1) == slurp(s2));
  CHECK(slurp(s1).find("<path") != std::string::npos);
  CHECK(run("render " + graph.string() + " --style euclidean") == 2);

  const auto p3 = scratch("r3.pts");
  const auto g3 = scratch("r3.graph");
  REQUIRE(run("sample --dim 3 --radius 2 --seed 5 --out " + p3.string()) == 0);
  REQUIRE(run("build " + p3.string() + " --out " + g3.string()) == 0);
  CHECK(run("render " + g3.string()) == 2);
}

TEST_CASE("config file and environment") {
  const auto cfg = scratch("run.ini");
  std::ofstream(cfg) << "radius = 4\nseed = 11\n";
  const auto a = scratch("cfg_a.pts");
  const auto b = scratch("cfg_b.pts");
  REQUIRE(run("sample --config " + cfg.string() + " --out " + a.string()) == 0);
  REQUIRE(run("sample --radius 4 --seed 11 --out " + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));
  // Flags win over the file.
  REQUIRE(run("sample --config " + cfg.string() + " --seed 12 --out " + a.string()) == 0);
  CHECK(slurp(a) != slurp(b));
  const auto bad = scratch("bad.ini");
  std::ofstream(bad) << "radius = 4\nunknown_key = 1\n";
  CHECK(run("sample --config " + bad.string()) == 2);
}
