#pragma once

// Euclidean and hyperbolic space primitives.
//
// Hyperbolic points live on the upper sheet of the hyperboloid
//   -x0^2 + x1^2 + ... + xd^2 = -1,  x0 >= 1,
// with origin p = (1, 0, ..., 0). Euclidean points are plain coordinate
// vectors with origin 0. Convexity questions are answered in a Beltrami-Klein
// chart, where hyperbolic geodesics are straight chords.

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nne {

class RandomStream;

inline constexpr int kMaxDim = 8;

enum class SpaceKind { Euclidean, Hyperbolic };

std::string to_string(SpaceKind kind);
SpaceKind parse_space_kind(const std::string& name);

class Space {
 public:
  Space(SpaceKind kind, int dim);

  SpaceKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  bool hyperbolic() const noexcept { return kind_ == SpaceKind::Hyperbolic; }
  // Number of stored coordinates per point: d, or d+1 on the hyperboloid.
  int ambient_dim() const noexcept { return hyperbolic() ? dim_ + 1 : dim_; }

  friend bool operator==(const Space&, const Space&) = default;

 private:
  SpaceKind kind_;
  int dim_;
};

// Fixed-capacity coordinate vector; no heap traffic in the hot loops.
class Point {
 public:
  static constexpr int kCapacity = kMaxDim + 1;

  Point() = default;
  Point(std::initializer_list<double> coords);
  explicit Point(std::span<const double> coords);

  int size() const noexcept { return size_; }
  double operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) noexcept { return c_[static_cast<std::size_t>(i)]; }
  std::span<const double> coords() const noexcept { return {c_.data(), static_cast<std::size_t>(size_)}; }
  std::span<double> coords() noexcept { return {c_.data(), static_cast<std::size_t>(size_)}; }

  friend bool operator==(const Point& a, const Point& b) noexcept;

 private:
  std::array<double, kCapacity> c_{};
  int size_ = 0;
};

struct TangentVector {
  Point base;
  std::vector<double> vec;  // components in the tangent_frame at base
};

struct GeometryConstants {
  double kappa_d = 0.0;
  double gamma_d = 0.0;
  double Gamma_d = 0.0;
};

// Throws std::invalid_argument if pt is not a valid point of space.
void validate_point(const Space& space, const Point& pt);

Point origin(const Space& space);

double minkowski_dot(std::span<const double> a, std::span<const double> b) noexcept;

// Pushes a perturbed hyperbolic point back onto the hyperboloid by recomputing x0.
void renormalize(const Space& space, Point& pt) noexcept;

double distance(const Space& space, const Point& a, const Point& b);

// Same metric without validation; used inside neighbour searches.
double distance_unchecked(const Space& space, const Point& a, const Point& b) noexcept;

// Geodesic distance from the origin, computed from x0 (hyperbolic) or the norm.
double norm_from_origin(const Space& space, const Point& pt) noexcept;

// Orthonormal tangent frame at base, as columns of an ambient_dim x dim matrix.
// Deterministic in base: Gram-Schmidt of the spatial axes after projecting out
// the Minkowski normal.
Eigen::MatrixXd tangent_frame(const Space& space, const Point& base);

Point exp_map(const Space& space, const TangentVector& v);

// Point at distance r from the origin in direction u (unit vector, length d).
Point point_at(const Space& space, double r, std::span<const double> unit_direction);

double unit_ball_volume(int dim);
double ball_volume(const Space& space, double r);

// Volume proxy governing the stabilization tails: kappa_d r^d, or
// gamma_d e^{r(d-1)} 1{r >= 2} on the hyperbolic side.
double rho(const Space& space, double r);

// gamma_d and Gamma_d bracket vol(B_r) e^{-r(d-1)} for r >= 2, taken as the min
// and max over a 0.005-spaced grid on [2, r_max] plus the r -> infinity limit.
GeometryConstants compute_volume_constants(const Space& space, double r_max);

// Cached constants for this dimension (r_max = 24). Euclidean spaces get only kappa_d.
const GeometryConstants& volume_constants(const Space& space);

// Beltrami-Klein chart centred at center; Euclidean: q - center.
std::vector<double> klein_coords(const Space& space, const Point& center, const Point& q);
void klein_coords(const Space& space, const Point& center, const Point& q, std::span<double> out) noexcept;

// Euclidean: x -> Q x + b. Hyperbolic: x -> L x with L in SO+(d,1).
struct Isometry {
  Space space;
  Eigen::MatrixXd linear;
  Eigen::VectorXd shift;

  static Isometry identity(const Space& space);
};

// Lorentz boost moving the origin a distance `dist` along spatial axis `axis`.
Isometry hyperbolic_boost(const Space& space, int axis, double dist);

Isometry compose(const Isometry& outer, const Isometry& inner);
Isometry random_isometry(const Space& space, RandomStream& rng);
Point apply_isometry(const Isometry& iso, const Point& pt);

}  // namespace nne
