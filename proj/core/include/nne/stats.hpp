#pragma once

#include <span>
#include <vector>

namespace nne {

double normal_cdf(double x);
double normal_pdf(double x);
double normal_quantile(double p);

double mean(std::span<const double> xs);
// Unbiased sample variance; 0 for fewer than two samples.
double variance(std::span<const double> xs);

// (x - mean) / sd with the unbiased sd. Throws DegenerateSample on zero variance.
std::vector<double> standardize(std::span<const double> samples);

// sup_x |F_n(x) - Phi(x)|.
double ks_distance_to_normal(std::span<const double> samples);

// integral |F_n(x) - Phi(x)| dx, evaluated in closed form piece by piece.
double wasserstein_distance_to_normal(std::span<const double> samples);

// Average ranks (1-based), ties share their mean rank.
std::vector<double> ranks(std::span<const double> xs);
double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double slope_ci_low = 0.0;   // 95% Student-t band
  double slope_ci_high = 0.0;
};

LinearFit linear_regression(std::span<const double> x, std::span<const double> y);

}  // namespace nne
