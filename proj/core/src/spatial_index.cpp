#include "nne/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nne {
namespace {

constexpr std::uint32_t kLeafSize = 8;

}  // namespace

KdTree::KdTree(const Space& space, std::span<const Point> points)
    : space_(space), points_(points), order_(points.size()) {
  std::iota(order_.begin(), order_.end(), 0u);
  keys_.reserve(points.size());
  for (const Point& p : points) keys_.push_back(index_key(p));
  if (!points.empty()) {
    nodes_.reserve(2 * points.size() / kLeafSize + 2);
    build(0, static_cast<std::uint32_t>(points.size()));
  }
}

std::array<double, kMaxDim> KdTree::index_key(const Point& p) const noexcept {
  std::array<double, kMaxDim> key{};
  const int d = space_.dim();
  if (space_.hyperbolic()) {
    const double s = 1.0 + p[0];
    for (int k = 0; k < d; ++k) key[static_cast<std::size_t>(k)] = p[k + 1] / s;
  } else {
    for (int k = 0; k < d; ++k) key[static_cast<std::size_t>(k)] = p[k];
  }
  return key;
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const int d = space_.dim();
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();
  Node node;
  node.begin = begin;
  node.end = end;
  node.lo.fill(std::numeric_limits<double>::infinity());
  node.hi.fill(-std::numeric_limits<double>::infinity());
  node.min_x0 = std::numeric_limits<double>::infinity();
  for (std::uint32_t i = begin; i < end; ++i) {
    const auto& key = keys_[order_[i]];
    for (std::size_t k = 0; k < static_cast<std::size_t>(d); ++k) {
      node.lo[k] = std::min(node.lo[k], key[k]);
      node.hi[k] = std::max(node.hi[k], key[k]);
    }
    if (space_.hyperbolic()) node.min_x0 = std::min(node.min_x0, points_[order_[i]][0]);
  }
  if (end - begin > kLeafSize) {
    std::size_t axis = 0;
    double widest = -1.0;
    for (std::size_t k = 0; k < static_cast<std::size_t>(d); ++k) {
      const double w = node.hi[k] - node.lo[k];
      if (w > widest) {
        widest = w;
        axis = k;
      }
    }
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                       const double pa = keys_[a][axis];
                       const double pb = keys_[b][axis];
                       return pa < pb || (pa == pb && a < b);
                     });
    node.left = build(begin, mid);
    node.right = build(mid, end);
  }
  nodes_[static_cast<std::size_t>(id)] = node;
  return id;
}

KdTree::Cursor KdTree::nearest(const Point& query, std::optional<std::size_t> exclude) const {
  return Cursor(*this, query, exclude);
}

KdTree::Cursor::Cursor(const KdTree& tree, const Point& query, std::optional<std::size_t> exclude)
    : tree_(&tree), query_(query), key_(tree.index_key(query)), exclude_(exclude) {
  heap_.reserve(64);
  if (!tree.nodes_.empty()) push_node(0);
}

double KdTree::Cursor::lower_bound(std::uint32_t node_id) const {
  const Node& node = tree_->nodes_[node_id];
  const std::size_t d = static_cast<std::size_t>(tree_->space_.dim());
  double s = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double q = key_[k];
    double gap = 0.0;
    if (q < node.lo[k]) {
      gap = node.lo[k] - q;
    } else if (q > node.hi[k]) {
      gap = q - node.hi[k];
    }
    s += gap * gap;
  }
  const double g = std::sqrt(s);
  if (!tree_->space_.hyperbolic()) return g * (1.0 - 1e-12);
  if (g == 0.0) return 0.0;
  // Slack covers rounding in the chart coordinates against the exact distance.
  const double lb = 2.0 * std::asinh(0.5 * g * std::sqrt((1.0 + query_[0]) * (1.0 + node.min_x0)));
  return std::max(0.0, lb * (1.0 - 1e-9) - 1e-12);
}

void KdTree::Cursor::push_node(std::uint32_t node_id) {
  auto cmp = [](const Entry& a, const Entry& b) {
    // std heap is a max-heap; invert to pop the smallest (key, node-first, id).
    if (a.key != b.key) return a.key > b.key;
    if (a.is_point != b.is_point) return a.is_point;
    return a.id > b.id;
  };
  const Node& node = tree_->nodes_[node_id];
  if (node.left < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const std::uint32_t idx = tree_->order_[i];
      if (exclude_ && *exclude_ == idx) continue;
      heap_.push_back(Entry{distance_unchecked(tree_->space_, query_, tree_->points_[idx]), true, idx});
      std::push_heap(heap_.begin(), heap_.end(), cmp);
    }
    return;
  }
  heap_.push_back(Entry{lower_bound(static_cast<std::uint32_t>(node.left)), false,
                        static_cast<std::uint32_t>(node.left)});
  std::push_heap(heap_.begin(), heap_.end(), cmp);
  heap_.push_back(Entry{lower_bound(static_cast<std::uint32_t>(node.right)), false,
                        static_cast<std::uint32_t>(node.right)});
  std::push_heap(heap_.begin(), heap_.end(), cmp);
}

std::optional<Neighbor> KdTree::Cursor::next() {
  auto cmp = [](const Entry& a, const Entry& b) {
    if (a.key != b.key) return a.key > b.key;
    if (a.is_point != b.is_point) return a.is_point;
    return a.id > b.id;
  };
  while (!heap_.empty()) {
    std::pop_heap(heap_.begin(), heap_.end(), cmp);
    const Entry e = heap_.back();
    heap_.pop_back();
    if (e.is_point) return Neighbor{e.id, e.key};
    push_node(e.id);
  }
  return std::nullopt;
}

}  // namespace nne
