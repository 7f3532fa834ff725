#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace mptn {

/// Static 3-d tree over Cartesian points for fixed-radius neighbour queries.
class KdTree3 {
 public:
  using Point = std::array<double, 3>;

  explicit KdTree3(std::span<const Point> points);

  /// Indices of all points within `radius` (Euclidean) of `query`, ascending.
  std::vector<std::uint32_t> within(const Point& query, double radius) const;

  std::size_t size() const { return points_.size(); }

 private:
  struct Node {
    std::uint32_t point = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint8_t axis = 0;
  };

  std::int32_t build(std::span<std::uint32_t> ids, int depth);
  void search(std::int32_t node, const Point& q, double r2, double r,
              std::vector<std::uint32_t>& out) const;

  std::vector<Point> points_;
  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
};

}  // namespace mptn
