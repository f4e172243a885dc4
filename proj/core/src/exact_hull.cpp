// Exact phase-one simplex over the rationals. Inputs are doubles, which convert
// to rationals without rounding, so the answer is exact for the given data.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nne/hull.hpp"

namespace nne {
namespace {

using Rational = boost::multiprecision::cpp_rational;

}  // namespace

bool origin_in_hull_rational(int dim, const std::vector<std::vector<double>>& vectors) {
  if (vectors.empty()) throw std::invalid_argument("hull query needs at least one point");
  const std::size_t rows = static_cast<std::size_t>(dim) + 1;
  const std::size_t m = vectors.size();
  const std::size_t cols = m + rows;  // structural + artificial
  const std::size_t rhs = cols;

  // Rows 0..dim-1: sum_j v_j[i] lambda_j = 0; row dim: sum_j lambda_j = 1.
  std::vector<std::vector<Rational>> t(rows, std::vector<Rational>(cols + 1));
  for (std::size_t j = 0; j < m; ++j) {
    if (vectors[j].size() != static_cast<std::size_t>(dim)) throw std::invalid_argument("vector has wrong dimension");
    for (std::size_t i = 0; i < static_cast<std::size_t>(dim); ++i) t[i][j] = Rational(vectors[j][i]);
    t[rows - 1][j] = 1;
  }
  for (std::size_t i = 0; i < rows; ++i) t[i][m + i] = 1;
  t[rows - 1][rhs] = 1;

  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) basis[i] = m + i;

  // Objective: minimise the sum of artificials; reduced cost of column j is
  // -(sum of column j over rows) for structural columns.
  auto reduced_cost = [&](std::size_t j) {
    Rational s = 0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (basis[i] >= m) s -= t[i][j];
    }
    if (j >= m) s += 1;
    return s;
  };

  for (;;) {
    // Bland's rule: lowest-index improving column.
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      bool in_basis = false;
      for (std::size_t b : basis) in_basis = in_basis || b == j;
      if (!in_basis && reduced_cost(j) < 0) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;

    std::size_t leave = rows;
    Rational best_ratio;
    for (std::size_t i = 0; i < rows; ++i) {
      if (t[i][enter] > 0) {
        const Rational ratio = t[i][rhs] / t[i][enter];
        if (leave == rows || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave == rows) break;  // unbounded direction cannot occur in phase one

    const Rational pivot = t[leave][enter];
    for (std::size_t j = 0; j <= cols; ++j) t[leave][j] /= pivot;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      const Rational f = t[i][enter];
      for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }

  Rational infeasibility = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] >= m) infeasibility += t[i][rhs];
  }
  return infeasibility == 0;
}

}  // namespace nne
