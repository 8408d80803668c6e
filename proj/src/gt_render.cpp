#include "pagelayout/gt_render.hpp"

#include <limits>
#include <set>
#include <stdexcept>

#include "pagelayout/raster.hpp"

namespace pagelayout {

void RenderParams::validate() const {
  if (baseline_thickness < 1.0 || endpoint_radius < 1.0 || block_boundary_thickness < 1.0)
    throw std::invalid_argument("render params must be >= 1");
}

ChannelMaps render_gt(const PageLayout& layout, const RenderParams& params, Diagnostics* diag) {
  params.validate();
  const ImageSize size = layout.size;
  ChannelMaps maps = ChannelMaps::zeros(size);
  Plane<int> owner = Plane<int>::Constant(size.height, size.width, -1);
  std::set<std::pair<int, int>> conflicts;

  int index = 0;
  for (const auto& block : layout.blocks) {
    for (const auto& line : block.lines) {
      const auto& pts = line.baseline.points;
      for_each_pixel_near(pts, false, 0.5 * params.baseline_thickness, size, [&](int r, int c) {
        const int prev = owner(r, c);
        if (prev >= 0 && prev != index) conflicts.emplace(prev, index);
        owner(r, c) = index;
        maps.base(r, c) = 1.0f;
        maps.asc(r, c) = static_cast<float>(line.ascender);
        maps.des(r, c) = static_cast<float>(line.descender);
      });
      if (!pts.empty()) {
        for (const Point& end : {pts.front(), pts.back()}) {
          for_each_pixel_near(std::span<const Point>(&end, 1), false, params.endpoint_radius, size,
                              [&](int r, int c) { maps.end(r, c) = 1.0f; });
        }
      }
      ++index;
    }
    for_each_pixel_near(block.polygon.ring, true, 0.5 * params.block_boundary_thickness, size,
                        [&](int r, int c) { maps.block(r, c) = 1.0f; });
  }
  for (const auto& [a, b] : conflicts)
    warn(diag, "render_gt: baselines of lines #" + std::to_string(a) + " and #" + std::to_string(b) +
                   " overlap; later line wins");
  return maps;
}

OrientationMaps render_orientation_gt(const PageLayout& layout, Diagnostics* diag) {
  const ImageSize size = layout.size;
  OrientationMaps maps = OrientationMaps::zeros(size);
  Plane<int> owner = Plane<int>::Constant(size.height, size.width, -1);
  int index = 0;
  int overlaps = 0;
  for (const auto& block : layout.blocks) {
    for (const auto& line : block.lines) {
      const auto& pts = line.baseline.points;
      for (const Pixel px : pixels_inside(line.polygon.ring, size)) {
        const Point p(px.col, px.row);
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
          const double d = distance_to_segment(p, pts[i], pts[i + 1]);
          if (d < best_d && pts[i] != pts[i + 1]) {
            best_d = d;
            best = i;
          }
        }
        const Point dir = (pts[best + 1] - pts[best]).normalized();
        if (owner(px.row, px.col) >= 0 && owner(px.row, px.col) != index) ++overlaps;
        owner(px.row, px.col) = index;
        maps.ox(px.row, px.col) = static_cast<float>(dir.x());
        maps.oy(px.row, px.col) = static_cast<float>(dir.y());
      }
      ++index;
    }
  }
  if (overlaps > 0)
    warn(diag, "render_orientation_gt: " + std::to_string(overlaps) + " pixels covered by several lines; later line wins");
  return maps;
}

} // namespace pagelayout
