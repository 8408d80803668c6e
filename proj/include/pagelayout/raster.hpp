#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pagelayout/geometry.hpp"

namespace pagelayout {

// Integer pixel position; pixel (row, col) is centered at (x = col, y = row).
struct Pixel {
  int row = 0;
  int col = 0;

  bool operator==(const Pixel&) const = default;
  auto operator<=>(const Pixel&) const = default;
};

/// Calls fn(row, col) for every in-bounds pixel whose center lies within
/// `radius` of the polyline (or ring, when `closed`). A pixel may be visited
/// more than once.
template <typename Fn>
void for_each_pixel_near(std::span<const Point> pts, bool closed, double radius, ImageSize size, Fn&& fn) {
  const std::size_t n = pts.size();
  if (n == 0) return;
  const std::size_t segments = closed ? n : n - 1;
  auto visit_segment = [&](const Point& a, const Point& b) {
    const int c0 = std::max(0, static_cast<int>(std::floor(std::min(a.x(), b.x()) - radius)));
    const int c1 = std::min(size.width - 1, static_cast<int>(std::ceil(std::max(a.x(), b.x()) + radius)));
    const int r0 = std::max(0, static_cast<int>(std::floor(std::min(a.y(), b.y()) - radius)));
    const int r1 = std::min(size.height - 1, static_cast<int>(std::ceil(std::max(a.y(), b.y()) + radius)));
    for (int r = r0; r <= r1; ++r)
      for (int c = c0; c <= c1; ++c)
        if (distance_to_segment(Point(c, r), a, b) <= radius) fn(r, c);
  };
  if (n == 1) {
    visit_segment(pts[0], pts[0]);
    return;
  }
  for (std::size_t i = 0; i < segments; ++i) visit_segment(pts[i], pts[(i + 1) % n]);
}

/// Pixels whose centers lie inside the polygon, in raster order.
std::vector<Pixel> pixels_inside(std::span<const Point> ring, ImageSize size);

/// Pixels visited by walking the polyline in 1 px arc steps and rounding,
/// deduplicated in walk order; out-of-bounds samples are skipped.
std::vector<Pixel> polyline_pixels(std::span<const Point> pts, ImageSize size);

} // namespace pagelayout
