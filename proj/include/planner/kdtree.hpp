#pragma once

#include <algorithm>
#include <limits>
#include <utility>
#include <vector>

#include "planner/geometry.hpp"

namespace planner {

// 2D kd-tree over a fixed point set, median-split by alternating axis.
// Nearest-neighbor queries are exact.
class KdTree {
 public:
  KdTree() = default;

  explicit KdTree(const std::vector<Point2>& points) {
    std::vector<std::pair<Point2, int>> items;
    items.reserve(points.size());
    for (int i = 0; i < static_cast<int>(points.size()); ++i)
      items.emplace_back(points[i], i);
    nodes_.reserve(points.size());
    root_ = build(items, 0, static_cast<int>(items.size()), 0);
  }

  bool empty() const { return nodes_.empty(); }
  int size() const { return static_cast<int>(nodes_.size()); }

  struct Result {
    int index = -1;
    double distance = std::numeric_limits<double>::infinity();
  };

  Result nearest(const Point2& query) const {
    Result best;
    if (root_ >= 0) search(root_, query, best);
    return best;
  }

 private:
  struct Node {
    Point2 point;
    int index;
    int axis;
    int left = -1;
    int right = -1;
  };

  int build(std::vector<std::pair<Point2, int>>& items, int begin, int end, int depth) {
    if (begin >= end) return -1;
    const int axis = depth % 2;
    const int mid = begin + (end - begin) / 2;
    std::nth_element(items.begin() + begin, items.begin() + mid, items.begin() + end,
                     [axis](const auto& a, const auto& b) {
                       return a.first[axis] < b.first[axis];
                     });
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({items[mid].first, items[mid].second, axis, -1, -1});
    nodes_[id].left = build(items, begin, mid, depth + 1);
    nodes_[id].right = build(items, mid + 1, end, depth + 1);
    return id;
  }

  void search(int id, const Point2& q, Result& best) const {
    const Node& node = nodes_[id];
    const double dist = (q - node.point).norm();
    if (dist < best.distance) {
      best.distance = dist;
      best.index = node.index;
    }
    const double delta = q[node.axis] - node.point[node.axis];
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    if (near >= 0) search(near, q, best);
    if (far >= 0 && std::abs(delta) < best.distance) search(far, q, best);
  }

  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace planner
