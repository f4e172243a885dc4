#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nne/geometry.hpp"

namespace nne {

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;
};

// kd-tree. Euclidean points are indexed by their coordinates with the usual
// point-to-box bound. Hyperbolic points are indexed in the Poincare ball,
// u = x_i / (1 + x_0), where 1 - |u|^2 = 2 / (1 + x_0) exactly, so
//   cosh d(u, v) - 1 = |u - v|^2 (1 + x_0)(1 + y_0) / 2
// and a box gap g together with the box's smallest x_0 bounds d from below.
class KdTree {
 public:
  KdTree(const Space& space, std::span<const Point> points);

  // Yields points in ascending (distance, index) order, one at a time.
  class Cursor {
   public:
    std::optional<Neighbor> next();

   private:
    friend class KdTree;
    struct Entry {
      double key;
      bool is_point;
      std::uint32_t id;
    };
    Cursor(const KdTree& tree, const Point& query, std::optional<std::size_t> exclude);
    void push_node(std::uint32_t node);
    double lower_bound(std::uint32_t node) const;

    const KdTree* tree_;
    Point query_;
    std::array<double, kMaxDim> key_{};  // query in index coordinates
    std::optional<std::size_t> exclude_;
    std::vector<Entry> heap_;
  };

  Cursor nearest(const Point& query, std::optional<std::size_t> exclude = std::nullopt) const;

  std::size_t size() const noexcept { return points_.size(); }

 private:
  struct Node {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::array<double, kMaxDim> lo{};
    std::array<double, kMaxDim> hi{};
    double min_x0 = 0.0;  // hyperbolic only
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  std::array<double, kMaxDim> index_key(const Point& p) const noexcept;

  Space space_;
  std::span<const Point> points_;
  std::vector<std::array<double, kMaxDim>> keys_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace nne
