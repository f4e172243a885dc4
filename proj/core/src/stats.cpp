#include "nne/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "nne/error.hpp"

namespace nne {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile level must lie in (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty sample");
  double s = 0.0;
  for (double v : xs) s += v;
  return s / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double v : xs) s += (v - m) * (v - m);
  return s / static_cast<double>(xs.size() - 1);
}

std::vector<double> standardize(std::span<const double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("standardize needs at least two samples");
  const double m = mean(samples);
  const double var = variance(samples);
  if (!(var > 0.0)) throw DegenerateSample("sample has zero variance");
  const double sd = std::sqrt(var);
  std::vector<double> out(samples.size());
  std::transform(samples.begin(), samples.end(), out.begin(), [&](double v) { return (v - m) / sd; });
  return out;
}

double ks_distance_to_normal(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("KS distance of empty sample");
  std::vector<double> xs(samples.begin(), samples.end());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double phi = normal_cdf(xs[i]);
    d = std::max(d, static_cast<double>(i + 1) / n - phi);
    d = std::max(d, phi - static_cast<double>(i) / n);
  }
  return std::min(d, 1.0);
}

namespace {

// G(x) = integral_{-inf}^x Phi = x Phi(x) + phi(x).
double integrated_cdf(double x) { return x * normal_cdf(x) + normal_pdf(x); }

// integral over [a, b] of |c - Phi(x)|.
double abs_gap_integral(double c, double a, double b) {
  if (b <= a) return 0.0;
  // Phi(x) <= c on the left of q = Phi^{-1}(c), above it on the right.
  double q;
  if (c <= 0.0) {
    q = -std::numeric_limits<double>::infinity();
  } else if (c >= 1.0) {
    q = std::numeric_limits<double>::infinity();
  } else {
    q = normal_quantile(c);
  }
  const double split = std::clamp(q, a, b);
  const double left = c * (split - a) - (integrated_cdf(split) - integrated_cdf(a));
  const double right = (integrated_cdf(b) - integrated_cdf(split)) - c * (b - split);
  return std::max(left, 0.0) + std::max(right, 0.0);
}

}  // namespace

double wasserstein_distance_to_normal(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("Wasserstein distance of empty sample");
  std::vector<double> xs(samples.begin(), samples.end());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  // Left tail: integral of Phi up to x_(1); right tail: of 1 - Phi beyond x_(n).
  double total = integrated_cdf(xs.front());
  const double last = xs.back();
  total += normal_pdf(last) - last * normal_cdf(-last);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    total += abs_gap_integral(static_cast<double>(i + 1) / n, xs[i], xs[i + 1]);
  }
  return total;
}

std::vector<double> ranks(std::span<const double> xs) {
  std::vector<std::size_t> idx(xs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> r(xs.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && xs[idx[j + 1]] == xs[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("pearson needs two equal-length samples");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateSample("correlation of a constant sample");
  return sxy / std::sqrt(sxx * syy);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  return pearson(rx, ry);
}

LinearFit linear_regression(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("regression needs two equal-length samples");
  const double n = static_cast<double>(x.size());
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DegenerateSample("regression on constant abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
    const boost::math::students_t dist(n - 2.0);
    const double tq = boost::math::quantile(boost::math::complement(dist, 0.025));
    fit.slope_ci_low = fit.slope - tq * fit.slope_stderr;
    fit.slope_ci_high = fit.slope + tq * fit.slope_stderr;
  } else {
    fit.slope_ci_low = fit.slope_ci_high = fit.slope;
  }
  return fit;
}

}  // namespace nne
