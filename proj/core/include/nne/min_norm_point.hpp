#pragma once

// Wolfe's minimum-norm-point algorithm for the convex hull of a growing point
// set. Points can be appended between solves; the active corral and weights are
// kept, so each solve warm-starts from the previous answer.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nne/error.hpp"
#include "nne/geometry.hpp"

namespace nne {

template <typename Scalar>
class MinNormPoint {
 public:
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

  struct Result {
    bool contained = false;
    Scalar residual = 0;  // norm of the minimum-norm point
    int iterations = 0;
  };

  MinNormPoint(int dim, Scalar tol) : dim_(dim), tol_(tol) {}

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return points_.size(); }

  // Appends a point. Only its direction matters for containment of the origin,
  // so points are scaled to unit length; a zero vector means the origin is a
  // candidate itself.
  void add_point(std::span<const double> p) {
    Vec v(dim_);
    Scalar n2 = 0;
    for (int i = 0; i < dim_; ++i) {
      v(i) = static_cast<Scalar>(p[static_cast<std::size_t>(i)]);
      n2 += v(i) * v(i);
    }
    if (n2 == 0) {
      has_zero_ = true;
    } else {
      v /= std::sqrt(n2);
    }
    points_.push_back(v);
  }

  Result solve() {
    Result res;
    if (points_.empty()) throw std::invalid_argument("hull query needs at least one point");
    if (has_zero_) {
      res.contained = true;
      return res;
    }
    if (corral_.empty()) {
      corral_.push_back(0);
      weights_.push_back(1);
      x_ = points_[0];
    }
    const Scalar gap_tol = tol_ / 10;
    // Points appended since the last negative answer that keep the same
    // argmin (or stay beyond the separating plane) cannot change that answer:
    // the first iteration below would return it again.
    if (certified_) {
      bool same = true;
      for (std::size_t j = checked_; j < points_.size() && same; ++j) same = x_.dot(points_[j]) >= threshold_;
      if (same) {
        checked_ = points_.size();
        res.residual = x_.norm();
        return res;
      }
      certified_ = false;
    }
    const int cap = std::max(10 * static_cast<int>(points_.size()) * dim_, 10);
    int it = 0;
    for (; it < cap; ++it) {
      const Scalar xnorm = x_.norm();
      if (xnorm <= tol_) {
        res.contained = true;
        res.residual = xnorm;
        res.iterations = it;
        return res;
      }
      std::size_t best = 0;
      Scalar best_dot = std::numeric_limits<Scalar>::infinity();
      for (std::size_t j = 0; j < points_.size(); ++j) {
        const Scalar dt = x_.dot(points_[j]);
        if (dt < best_dot) {
          best_dot = dt;
          best = j;
        }
      }
      // Every point lies in {y : <x/|x|, y> >= |x| - gap_tol}, which separates
      // the hull from the origin.
      const bool separated = xnorm * xnorm - best_dot <= gap_tol * xnorm;
      if (separated || std::find(corral_.begin(), corral_.end(), best) != corral_.end()) {
        certified_ = true;
        checked_ = points_.size();
        threshold_ = separated ? std::min(best_dot, xnorm * xnorm - gap_tol * xnorm) : best_dot;
        res.contained = false;
        res.residual = xnorm;
        res.iterations = it;
        return res;
      }
      corral_.push_back(best);
      weights_.push_back(0);
      it += minor_cycles();
    }
    throw NumericalFailure("minimum-norm point did not converge within " + std::to_string(cap) + " iterations",
                           static_cast<double>(x_.norm()));
  }

 private:
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim + 1>;
  using Coef = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, kMaxDim + 1, 1>;

  // Minimum-norm point of the affine hull of the corral, as affine weights.
  Coef affine_min_norm() const {
    const int m = static_cast<int>(corral_.size());
    Coef mu(m);
    if (m == 1) {
      mu(0) = 1;
      return mu;
    }
    const Vec& p0 = points_[corral_[0]];
    Mat a(dim_, m - 1);
    for (int j = 1; j < m; ++j) a.col(j - 1) = points_[corral_[static_cast<std::size_t>(j)]] - p0;
    const Vec rhs = -p0;
    const Coef c = a.colPivHouseholderQr().solve(rhs);
    mu(0) = 1 - c.sum();
    mu.tail(m - 1) = c;
    return mu;
  }

  void recompute_x() {
    x_.setZero(dim_);
    for (std::size_t i = 0; i < corral_.size(); ++i) x_ += weights_[i] * points_[corral_[i]];
  }

  int minor_cycles() {
    const Scalar eps = std::numeric_limits<Scalar>::epsilon() * 64;
    int cycles = 0;
    for (;;) {
      ++cycles;
      const Coef mu = affine_min_norm();
      const int m = static_cast<int>(corral_.size());
      bool interior = true;
      for (int i = 0; i < m; ++i) interior = interior && mu(i) > eps;
      if (interior) {
        for (int i = 0; i < m; ++i) weights_[static_cast<std::size_t>(i)] = mu(i);
        recompute_x();
        return cycles;
      }
      Scalar theta = 1;
      for (int i = 0; i < m; ++i) {
        const Scalar lam = weights_[static_cast<std::size_t>(i)];
        if (mu(i) <= eps && lam - mu(i) > 0) theta = std::min(theta, lam / (lam - mu(i)));
      }
      std::vector<std::size_t> keep_idx;
      std::vector<Scalar> keep_w;
      std::size_t drop = 0;
      Scalar drop_w = std::numeric_limits<Scalar>::infinity();
      for (int i = 0; i < m; ++i) {
        const Scalar w = (1 - theta) * weights_[static_cast<std::size_t>(i)] + theta * mu(i);
        if (w < drop_w) {
          drop_w = w;
          drop = static_cast<std::size_t>(i);
        }
        weights_[static_cast<std::size_t>(i)] = w;
      }
      for (int i = 0; i < m; ++i) {
        const Scalar w = weights_[static_cast<std::size_t>(i)];
        if (static_cast<std::size_t>(i) == drop || w <= eps) continue;
        keep_idx.push_back(corral_[static_cast<std::size_t>(i)]);
        keep_w.push_back(w);
      }
      Scalar total = 0;
      for (Scalar w : keep_w) total += w;
      for (Scalar& w : keep_w) w /= total;
      corral_ = std::move(keep_idx);
      weights_ = std::move(keep_w);
      recompute_x();
      if (corral_.size() <= 1) return cycles;
    }
  }

  int dim_;
  Scalar tol_;
  bool has_zero_ = false;
  bool certified_ = false;
  std::size_t checked_ = 0;
  Scalar threshold_ = 0;
  std::vector<Vec> points_;
  std::vector<std::size_t> corral_;
  std::vector<Scalar> weights_;
  Vec x_;
};

}  // namespace nne
