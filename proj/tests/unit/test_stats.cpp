#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nne/error.hpp"
#include "nne/random.hpp"
#include "nne/stats.hpp"

using namespace nne;

TEST_CASE("standardize") {
  const auto z = standardize(std::vector<double>{1.0, 3.0});
  CHECK(z[0] == doctest::Approx(-std::sqrt(0.5)));
  CHECK(z[1] == doctest::Approx(std::sqrt(0.5)));
  CHECK_THROWS_AS(standardize(std::vector<double>{2.0, 2.0, 2.0}), DegenerateSample);
  const std::vector<double> xs{0.3, -1.2, 4.0, 2.2, 0.0};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(3.5 * x - 7.0);
  const auto a = standardize(xs);
  const auto b = standardize(ys);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("kolmogorov distance") {
  CHECK(ks_distance_to_normal(std::vector<double>(10, 0.0)) == doctest::Approx(0.5));
  CHECK(ks_distance_to_normal(std::vector<double>{-1.0, 1.0}) == doctest::Approx(normal_cdf(1.0) - 0.5));
  CHECK(ks_distance_to_normal(std::vector<double>{-1.0, 1.0}) == doctest::Approx(0.3413).epsilon(1e-4));
  RandomStream rng(51, 0);
  std::vector<double> z(1000);
  for (auto& v : z) v = rng.normal();
  CHECK(ks_distance_to_normal(z) < 0.05);
}

TEST_CASE("wasserstein distance") {
  CHECK(wasserstein_distance_to_normal(std::vector<double>(5, 0.0)) ==
        doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-12));
  const int n = 10000;
  std::vector<double> q(n);
  for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i)] = normal_quantile((i + 0.5) / n);
  CHECK(wasserstein_distance_to_normal(q) < 0.01);
  const std::vector<double> xs{0.4, -2.0, 1.3, 0.9, 3.1};
  std::vector<double> neg;
  for (double x : xs) neg.push_back(-x);
  CHECK(wasserstein_distance_to_normal(xs) == doctest::Approx(wasserstein_distance_to_normal(neg)).epsilon(1e-12));
  // Single point: integral of |1{x >= a} - Phi| is E|N - a|.
  const double a = 0.7;
  const double e_abs = 2.0 * normal_pdf(a) + a * (2.0 * normal_cdf(a) - 1.0);
  CHECK(wasserstein_distance_to_normal(std::vector<double>{a}) == doctest::Approx(e_abs).epsilon(1e-12));
}

TEST_CASE("normal quantile inverts the cdf") {
  for (double p : {1e-6, 0.025, 0.3, 0.5, 0.9, 0.999}) CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p));
  CHECK_THROWS(normal_quantile(0.0));
}

TEST_CASE("rank correlation and regression") {
  CHECK(spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{10, 20, 25, 100}) == doctest::Approx(1.0));
  CHECK(spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{4, 3, 2, 1}) == doctest::Approx(-1.0));
  const auto r = ranks(std::vector<double>{3.0, 1.0, 3.0});
  CHECK(r[0] == 2.5);
  CHECK(r[1] == 1.0);
  const auto fit = linear_regression(std::vector<double>{0, 1, 2, 3}, std::vector<double>{1, 3, 5, 7});
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.slope_ci_low == doctest::Approx(2.0));
  const auto noisy = linear_regression(std::vector<double>{0, 1, 2, 3, 4}, std::vector<double>{0.1, 0.9, 2.2, 2.8, 4.1});
  CHECK(noisy.slope_ci_low < noisy.slope);
  CHECK(noisy.slope_ci_high > noisy.slope);
}
