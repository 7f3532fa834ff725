#include "mptn/kdtree.hpp"

#include <algorithm>
#include <numeric>

namespace mptn {

KdTree3::KdTree3(std::span<const Point> points) : points_(points.begin(), points.end()) {
  std::vector<std::uint32_t> ids(points_.size());
  std::iota(ids.begin(), ids.end(), 0u);
  nodes_.reserve(points_.size());
  root_ = build(ids, 0);
}

std::int32_t KdTree3::build(std::span<std::uint32_t> ids, int depth) {
  if (ids.empty()) return -1;
  const auto axis = static_cast<std::uint8_t>(depth % 3);
  const auto mid = ids.size() / 2;
  std::nth_element(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(mid), ids.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return points_[a][axis] != points_[b][axis] ? points_[a][axis] < points_[b][axis]
                                                                 : a < b;
                   });
  const auto self = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({ids[mid], -1, -1, axis});
  const auto left = build(ids.first(mid), depth + 1);
  const auto right = build(ids.subspan(mid + 1), depth + 1);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

void KdTree3::search(std::int32_t node, const Point& q, double r2, double r,
                     std::vector<std::uint32_t>& out) const {
  while (node >= 0) {
    const auto& nd = nodes_[node];
    const auto& p = points_[nd.point];
    const double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
    if (dx * dx + dy * dy + dz * dz <= r2) out.push_back(nd.point);
    const double diff = q[nd.axis] - p[nd.axis];
    const auto near = diff <= 0 ? nd.left : nd.right;
    const auto far = diff <= 0 ? nd.right : nd.left;
    if (diff * diff <= r2) search(far, q, r2, r, out);
    node = near;
  }
}

std::vector<std::uint32_t> KdTree3::within(const Point& query, double radius) const {
  std::vector<std::uint32_t> out;
  if (radius < 0) return out;
  search(root_, query, radius * radius, radius, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mptn
