#include "nne/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nne {

double PointConfiguration::trusted_radius(const Point& pt) const noexcept {
  double r = sample_radius - norm_from_origin(space, pt);
  for (const Ball& b : bounds) r = std::min(r, b.radius - distance_unchecked(space, b.center, pt));
  return r;
}

void validate(const PointConfiguration& config) {
  if (!(config.window_radius <= config.sample_radius)) {
    throw std::invalid_argument("window radius exceeds sample radius");
  }
  const Point p = origin(config.space);
  for (const Point& pt : config.points) {
    validate_point(config.space, pt);
    if (distance_unchecked(config.space, p, pt) > config.sample_radius + 1e-9) {
      throw std::invalid_argument("point lies outside the sampling ball");
    }
  }
}

double radial_inverse_cdf(const Space& space, double radius, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("u must lie in [0, 1]");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("radius must be finite and > 0");
  if (u == 0.0) return 0.0;
  if (u == 1.0) return radius;
  const int d = space.dim();
  if (!space.hyperbolic()) return radius * std::pow(u, 1.0 / d);
  if (d == 2) return std::acosh(1.0 + u * (std::cosh(radius) - 1.0));

  const double target = u * ball_volume(space, radius);
  double lo = 0.0;
  double hi = radius;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (ball_volume(space, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (mid == lo && mid == hi) break;
  }
  return 0.5 * (lo + hi);
}

PointConfiguration sample_poisson_ball(const Space& space, double radius, RandomStream& rng) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("sampling radius must be finite and > 0");
  PointConfiguration config;
  config.space = space;
  config.sample_radius = radius;
  config.window_radius = radius;
  config.seed = rng.seed();
  config.stream = rng.stream_id();

  const auto count = rng.poisson(ball_volume(space, radius));
  config.points.reserve(count);
  const int d = space.dim();
  std::array<double, kMaxDim> dir{};
  for (std::uint64_t i = 0; i < count; ++i) {
    double norm2;
    do {
      norm2 = 0.0;
      for (int j = 0; j < d; ++j) {
        dir[static_cast<std::size_t>(j)] = rng.normal();
        norm2 += dir[static_cast<std::size_t>(j)] * dir[static_cast<std::size_t>(j)];
      }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (int j = 0; j < d; ++j) dir[static_cast<std::size_t>(j)] *= inv;
    const double r = radial_inverse_cdf(space, radius, rng.uniform());
    config.points.push_back(point_at(space, r, std::span<const double>(dir.data(), static_cast<std::size_t>(d))));
  }
  return config;
}

PointConfiguration restrict(const PointConfiguration& config, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("restriction radius must be > 0");
  if (r > config.sample_radius) throw std::invalid_argument("cannot restrict beyond the sample radius");
  PointConfiguration out = config;
  out.points.clear();
  for (const Point& pt : config.points) {
    if (norm_from_origin(config.space, pt) <= r) out.points.push_back(pt);
  }
  out.sample_radius = r;
  out.window_radius = std::min(config.window_radius, r);
  return out;
}

PointConfiguration restrict_to_ball(const PointConfiguration& config, const Point& center, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("restriction radius must be >= 0");
  validate_point(config.space, center);
  PointConfiguration out = config;
  out.points.clear();
  for (const Point& pt : config.points) {
    if (distance_unchecked(config.space, center, pt) <= r) out.points.push_back(pt);
  }
  out.bounds.push_back(Ball{center, r});
  return out;
}

PointConfiguration with_point(const PointConfiguration& config, const Point& pt) {
  validate_point(config.space, pt);
  PointConfiguration out = config;
  out.points.push_back(pt);
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_configuration(std::ostream& out, const PointConfiguration& config) {
  out << to_string(config.space.kind()) << ' ' << config.space.dim() << ' ' << format_double(config.sample_radius)
      << ' ' << format_double(config.window_radius) << ' ' << config.seed << ' ' << config.stream << '\n';
  for (const Point& pt : config.points) {
    for (int i = 0; i < pt.size(); ++i) {
      if (i) out << ' ';
      out << format_double(pt[i]);
    }
    out << '\n';
  }
}

namespace {

double parse_double(const std::string& tok) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed number '" + tok + "'");
  }
  if (used != tok.size()) throw std::invalid_argument("malformed number '" + tok + "'");
  return v;
}

}  // namespace

PointConfiguration read_configuration(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("missing configuration header");
  std::istringstream header(line);
  std::string kind, dim, sample, window, seed, stream;
  if (!(header >> kind >> dim >> sample >> window >> seed >> stream)) {
    throw std::invalid_argument("malformed configuration header: '" + line + "'");
  }
  PointConfiguration config;
  config.space = Space(parse_space_kind(kind), std::stoi(dim));
  config.sample_radius = parse_double(sample);
  config.window_radius = parse_double(window);
  config.seed = std::stoull(seed);
  config.stream = std::stoull(stream);

  const int n = config.space.ambient_dim();
  // Stop at the first non-numeric line; graph files continue after the points.
  while (in.peek() != EOF) {
    const auto pos = in.tellg();
    if (!std::getline(in, line)) break;
    if (line.empty()) continue;
    if (!(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-' || line[0] == '+' || line[0] == '.')) {
      in.clear();
      in.seekg(pos);
      break;
    }
    std::istringstream row(line);
    std::array<double, Point::kCapacity> c{};
    std::string tok;
    int k = 0;
    while (row >> tok) {
      if (k >= n) throw std::invalid_argument("too many coordinates in point line");
      c[static_cast<std::size_t>(k++)] = parse_double(tok);
    }
    if (k != n) throw std::invalid_argument("point line has " + std::to_string(k) + " coordinates, expected " +
                                            std::to_string(n));
    config.points.emplace_back(std::span<const double>(c.data(), static_cast<std::size_t>(n)));
  }
  validate(config);
  return config;
}

}  // namespace nne
