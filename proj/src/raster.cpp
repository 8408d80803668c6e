#include "pagelayout/raster.hpp"

#include <set>

namespace pagelayout {

std::vector<Pixel> pixels_inside(std::span<const Point> ring, ImageSize size) {
  std::vector<Pixel> out;
  if (ring.size() < 3) return out;
  const Box box = bounding_box(ring);
  const int r0 = std::max(0, static_cast<int>(std::ceil(box.min.y())));
  const int r1 = std::min(size.height - 1, static_cast<int>(std::floor(box.max.y())));
  const int c0 = std::max(0, static_cast<int>(std::ceil(box.min.x())));
  const int c1 = std::min(size.width - 1, static_cast<int>(std::floor(box.max.x())));
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c)
      if (contains(ring, Point(c, r))) out.push_back({r, c});
  return out;
}

std::vector<Pixel> polyline_pixels(std::span<const Point> pts, ImageSize size) {
  std::vector<Pixel> out;
  std::set<Pixel> seen;
  for (const auto& p : sample_polyline(pts, 1.0)) {
    const Pixel px{static_cast<int>(std::lround(p.y())), static_cast<int>(std::lround(p.x()))};
    if (px.row < 0 || px.col < 0 || px.row >= size.height || px.col >= size.width) continue;
    if (seen.insert(px).second) out.push_back(px);
  }
  return out;
}

} // namespace pagelayout
