#include "nne/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "nne/random.hpp"

namespace nne {
namespace {

constexpr double kPi = std::numbers::pi;

// Adaptive Simpson on sinh^n over [a, b].
double simpson_step(int n, double a, double b, double fa, double fm, double fb, double whole, double tol,
                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = std::pow(std::sinh(lm), n);
  const double frm = std::pow(std::sinh(rm), n);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(n, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(n, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_sinh_power(int n, double a, double b, double rel_tol) {
  if (b <= a) return 0.0;
  const double fa = std::pow(std::sinh(a), n);
  const double fb = std::pow(std::sinh(b), n);
  const double fm = std::pow(std::sinh(0.5 * (a + b)), n);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // The integrand is positive and increasing, so the coarse estimate fixes the scale.
  const double scale = std::max(std::fabs(whole), (b - a) * fb * 1e-3);
  return simpson_step(n, a, b, fa, fm, fb, whole, rel_tol * scale, 60);
}

void check_dims(const Space& space, const Point& a) {
  if (a.size() != space.ambient_dim()) {
    throw std::invalid_argument("point has " + std::to_string(a.size()) + " coordinates, space expects " +
                                std::to_string(space.ambient_dim()));
  }
}

Eigen::MatrixXd boost_matrix(int dim, const Eigen::VectorXd& unit_dir, double dist) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim + 1, dim + 1);
  const double ch = std::cosh(dist);
  const double sh = std::sinh(dist);
  m(0, 0) = ch;
  m.block(0, 1, 1, dim) = sh * unit_dir.transpose();
  m.block(1, 0, dim, 1) = sh * unit_dir;
  m.block(1, 1, dim, dim) += (ch - 1.0) * unit_dir * unit_dir.transpose();
  return m;
}

Eigen::MatrixXd haar_rotation(int dim, RandomStream& rng) {
  Eigen::MatrixXd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

}  // namespace

std::string to_string(SpaceKind kind) {
  return kind == SpaceKind::Euclidean ? "euclidean" : "hyperbolic";
}

SpaceKind parse_space_kind(const std::string& name) {
  if (name == "euclidean") return SpaceKind::Euclidean;
  if (name == "hyperbolic") return SpaceKind::Hyperbolic;
  throw std::invalid_argument("unknown space '" + name + "' (expected euclidean or hyperbolic)");
}

Space::Space(SpaceKind kind, int dim) : kind_(kind), dim_(dim) {
  if (dim < 2 || dim > kMaxDim) {
    throw std::invalid_argument("dimension must be in [2, " + std::to_string(kMaxDim) + "], got " +
                                std::to_string(dim));
  }
}

Point::Point(std::initializer_list<double> coords) {
  if (coords.size() > static_cast<std::size_t>(kCapacity)) throw std::invalid_argument("too many coordinates");
  std::copy(coords.begin(), coords.end(), c_.begin());
  size_ = static_cast<int>(coords.size());
}

Point::Point(std::span<const double> coords) {
  if (coords.size() > static_cast<std::size_t>(kCapacity)) throw std::invalid_argument("too many coordinates");
  std::copy(coords.begin(), coords.end(), c_.begin());
  size_ = static_cast<int>(coords.size());
}

bool operator==(const Point& a, const Point& b) noexcept {
  return a.size_ == b.size_ && std::equal(a.c_.begin(), a.c_.begin() + a.size_, b.c_.begin());
}

void validate_point(const Space& space, const Point& pt) {
  check_dims(space, pt);
  for (double c : pt.coords()) {
    if (!std::isfinite(c)) throw std::invalid_argument("point has non-finite coordinate");
  }
  if (space.hyperbolic()) {
    const double x0 = pt[0];
    const double q = minkowski_dot(pt.coords(), pt.coords());
    if (x0 < 1.0 - 1e-9 || std::fabs(q + 1.0) > 1e-9 * std::max(1.0, x0 * x0)) {
      throw std::invalid_argument("point is not on the upper hyperboloid sheet");
    }
  }
}

Point origin(const Space& space) {
  std::array<double, Point::kCapacity> zeros{};
  if (space.hyperbolic()) zeros[0] = 1.0;
  return Point(std::span<const double>(zeros.data(), static_cast<std::size_t>(space.ambient_dim())));
}

double minkowski_dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = -a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void renormalize(const Space& space, Point& pt) noexcept {
  if (!space.hyperbolic()) return;
  double s = 0.0;
  for (int i = 1; i < pt.size(); ++i) s += pt[i] * pt[i];
  pt[0] = std::sqrt(1.0 + s);
}

double distance_unchecked(const Space& space, const Point& a, const Point& b) noexcept {
  const int n = space.ambient_dim();
  if (!space.hyperbolic()) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = a[i] - b[i];
      s += t * t;
    }
    return std::sqrt(s);
  }
  // cosh d = -<a,b>_L and 4 sinh^2(d/2) = <a-b,a-b>_L. Both lose precision to
  // cancellation; a perturbation of either propagates to d with the same
  // 1/sinh(d) factor (up to 1/2 for the second), so use the one whose terms
  // are smaller in magnitude.
  double m = a[0] * b[0];
  double m_mag = std::fabs(m);
  double t0 = a[0] - b[0];
  double q = -t0 * t0;
  double q_mag = t0 * t0;
  for (int i = 1; i < n; ++i) {
    const double p = a[i] * b[i];
    m -= p;
    m_mag += std::fabs(p);
    const double t = a[i] - b[i];
    q += t * t;
    q_mag += t * t;
  }
  if (q_mag >= 2.0 * m_mag) return std::acosh(std::max(m, 1.0));
  return 2.0 * std::asinh(0.5 * std::sqrt(std::max(q, 0.0)));
}

double distance(const Space& space, const Point& a, const Point& b) {
  check_dims(space, a);
  check_dims(space, b);
  return distance_unchecked(space, a, b);
}

double norm_from_origin(const Space& space, const Point& pt) noexcept {
  if (space.hyperbolic()) {
    double s = 0.0;
    for (int i = 1; i < pt.size(); ++i) s += pt[i] * pt[i];
    // asinh of the spatial norm is accurate at both ends, unlike acosh(x0).
    return std::asinh(std::sqrt(s));
  }
  double s = 0.0;
  for (double c : pt.coords()) s += c * c;
  return std::sqrt(s);
}

Eigen::MatrixXd tangent_frame(const Space& space, const Point& base) {
  const int d = space.dim();
  if (!space.hyperbolic()) return Eigen::MatrixXd::Identity(d, d);

  const int n = d + 1;
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b(i) = base[i];
  auto mdot = [](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    return -u(0) * v(0) + u.tail(u.size() - 1).dot(v.tail(v.size() - 1));
  };
  Eigen::MatrixXd frame(n, d);
  for (int k = 0; k < d; ++k) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    v(k + 1) = 1.0;
    v += mdot(v, b) * b;
    for (int j = 0; j < k; ++j) v -= mdot(v, frame.col(j)) * frame.col(j);
    frame.col(k) = v / std::sqrt(mdot(v, v));
  }
  return frame;
}

Point exp_map(const Space& space, const TangentVector& v) {
  validate_point(space, v.base);
  const int d = space.dim();
  if (static_cast<int>(v.vec.size()) != d) throw std::invalid_argument("tangent vector has wrong length");
  for (double c : v.vec) {
    if (!std::isfinite(c)) throw std::invalid_argument("tangent vector has non-finite entry");
  }
  if (!space.hyperbolic()) {
    Point out = v.base;
    for (int i = 0; i < d; ++i) out[i] += v.vec[static_cast<std::size_t>(i)];
    return out;
  }
  double len2 = 0.0;
  for (double c : v.vec) len2 += c * c;
  const double len = std::sqrt(len2);
  if (len == 0.0) return v.base;

  const Eigen::MatrixXd frame = tangent_frame(space, v.base);
  const Eigen::VectorXd comps = Eigen::Map<const Eigen::VectorXd>(v.vec.data(), d);
  const Eigen::VectorXd w = frame * comps;
  Point out = v.base;
  const double ch = std::cosh(len);
  const double sh_over = std::sinh(len) / len;
  for (int i = 0; i <= d; ++i) out[i] = ch * v.base[i] + sh_over * w(i);
  renormalize(space, out);
  return out;
}

Point point_at(const Space& space, double r, std::span<const double> unit_direction) {
  const int d = space.dim();
  Point out = origin(space);
  if (!space.hyperbolic()) {
    for (int i = 0; i < d; ++i) out[i] = r * unit_direction[static_cast<std::size_t>(i)];
    return out;
  }
  const double sh = std::sinh(r);
  for (int i = 0; i < d; ++i) out[i + 1] = sh * unit_direction[static_cast<std::size_t>(i)];
  renormalize(space, out);
  return out;
}

double unit_ball_volume(int dim) {
  return std::pow(kPi, 0.5 * dim) / std::tgamma(1.0 + 0.5 * dim);
}

double ball_volume(const Space& space, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("ball radius must be >= 0");
  const int d = space.dim();
  const double kappa = unit_ball_volume(d);
  if (!space.hyperbolic()) return kappa * std::pow(r, d);
  if (std::isinf(r)) return std::numeric_limits<double>::infinity();
  switch (d) {
    case 2: {
      const double s = std::sinh(0.5 * r);
      return 4.0 * kPi * s * s;  // 2 pi (cosh r - 1)
    }
    case 3: {
      const double x = 2.0 * r;
      if (x < 1e-2) {
        const double x3 = x * x * x;
        return kPi * (x3 / 6.0 + x3 * x * x / 120.0 + x3 * x3 * x / 5040.0);
      }
      return kPi * (std::sinh(x) - x);
    }
    default:
      return d * kappa * integrate_sinh_power(d - 1, 0.0, r, 1e-10);
  }
}

double rho(const Space& space, double r) {
  const int d = space.dim();
  if (!space.hyperbolic()) return unit_ball_volume(d) * std::pow(r, d);
  if (r < 2.0) return 0.0;
  return volume_constants(space).gamma_d * std::exp(r * (d - 1));
}

GeometryConstants compute_volume_constants(const Space& space, double r_max) {
  if (!space.hyperbolic()) throw std::invalid_argument("volume constants are defined for hyperbolic space");
  if (!(r_max >= 4.0)) throw std::invalid_argument("r_max must be >= 4");
  const int d = space.dim();
  GeometryConstants c;
  c.kappa_d = unit_ball_volume(d);
  const double limit = d * c.kappa_d / (std::pow(2.0, d - 1) * (d - 1));
  c.gamma_d = limit;
  c.Gamma_d = limit;

  constexpr double step = 0.005;
  const int steps = static_cast<int>(std::ceil((r_max - 2.0) / step));
  double volume = ball_volume(space, 2.0);
  double prev_r = 2.0;
  for (int i = 0; i <= steps; ++i) {
    const double r = std::min(2.0 + i * step, r_max);
    if (d <= 3) {
      volume = ball_volume(space, r);
    } else if (r > prev_r) {
      volume += d * c.kappa_d * integrate_sinh_power(d - 1, prev_r, r, 1e-12);
    }
    prev_r = r;
    const double ratio = volume * std::exp(-r * (d - 1));
    c.gamma_d = std::min(c.gamma_d, ratio);
    c.Gamma_d = std::max(c.Gamma_d, ratio);
  }
  return c;
}

const GeometryConstants& volume_constants(const Space& space) {
  static std::array<std::once_flag, 2 * (kMaxDim + 1)> flags;
  static std::array<GeometryConstants, 2 * (kMaxDim + 1)> table;
  const std::size_t slot = static_cast<std::size_t>(space.dim()) + (space.hyperbolic() ? kMaxDim + 1 : 0);
  std::call_once(flags[slot], [&] {
    if (space.hyperbolic()) {
      table[slot] = compute_volume_constants(space, 24.0);
    } else {
      table[slot].kappa_d = unit_ball_volume(space.dim());
    }
  });
  return table[slot];
}

void klein_coords(const Space& space, const Point& center, const Point& q, std::span<double> out) noexcept {
  const int d = space.dim();
  if (!space.hyperbolic()) {
    for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] = q[i] - center[i];
    return;
  }
  // Boost L with L(center) = p, applied to the difference q - center (which
  // is far better conditioned than q itself when both are far from p).
  const double c0 = center[0];
  std::array<double, Point::kCapacity> delta{};
  for (int i = 0; i <= d; ++i) delta[static_cast<std::size_t>(i)] = q[i] - center[i];
  double cv_dot = 0.0;
  for (int i = 1; i <= d; ++i) cv_dot += center[i] * delta[static_cast<std::size_t>(i)];
  const double time = 1.0 + c0 * delta[0] - cv_dot;
  const double coef = cv_dot / (1.0 + c0) - delta[0];
  for (int i = 1; i <= d; ++i) {
    const double spatial = delta[static_cast<std::size_t>(i)] + center[i] * coef;
    out[static_cast<std::size_t>(i - 1)] = spatial / time;
  }
}

std::vector<double> klein_coords(const Space& space, const Point& center, const Point& q) {
  std::vector<double> out(static_cast<std::size_t>(space.dim()));
  klein_coords(space, center, q, out);
  return out;
}

Isometry Isometry::identity(const Space& space) {
  const int n = space.ambient_dim();
  return Isometry{space, Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n)};
}

Isometry hyperbolic_boost(const Space& space, int axis, double dist) {
  if (!space.hyperbolic()) throw std::invalid_argument("boosts are hyperbolic isometries");
  if (axis < 1 || axis > space.dim()) throw std::invalid_argument("boost axis out of range");
  Eigen::VectorXd dir = Eigen::VectorXd::Zero(space.dim());
  dir(axis - 1) = 1.0;
  return Isometry{space, boost_matrix(space.dim(), dir, dist), Eigen::VectorXd::Zero(space.dim() + 1)};
}

Isometry compose(const Isometry& outer, const Isometry& inner) {
  if (!(outer.space == inner.space)) throw std::invalid_argument("isometries act on different spaces");
  return Isometry{outer.space, outer.linear * inner.linear, outer.linear * inner.shift + outer.shift};
}

Isometry random_isometry(const Space& space, RandomStream& rng) {
  const int d = space.dim();
  const Eigen::MatrixXd rot = haar_rotation(d, rng);
  if (!space.hyperbolic()) {
    Eigen::VectorXd shift(d);
    for (int i = 0; i < d; ++i) shift(i) = 2.0 * rng.uniform() - 1.0;
    return Isometry{space, rot, shift};
  }
  Eigen::MatrixXd rotation = Eigen::MatrixXd::Identity(d + 1, d + 1);
  rotation.block(1, 1, d, d) = rot;
  Eigen::VectorXd dir(d);
  for (int i = 0; i < d; ++i) dir(i) = rng.normal();
  dir.normalize();
  const double dist = rng.uniform();
  return Isometry{space, boost_matrix(d, dir, dist) * rotation, Eigen::VectorXd::Zero(d + 1)};
}

Point apply_isometry(const Isometry& iso, const Point& pt) {
  check_dims(iso.space, pt);
  const int n = iso.space.ambient_dim();
  const Eigen::Map<const Eigen::VectorXd> x(pt.coords().data(), n);
  const Eigen::VectorXd y = iso.linear * x + iso.shift;
  Point out(std::span<const double>(y.data(), static_cast<std::size_t>(n)));
  renormalize(iso.space, out);
  return out;
}

}  // namespace nne
