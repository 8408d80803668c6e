#include "pagelayout/line_blocks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pagelayout/baseline_extract.hpp"
#include "pagelayout/raster.hpp"

namespace pagelayout {

void BlockParams::validate() const {
  if (!(height_percentile >= 0.0 && height_percentile <= 100.0))
    throw std::invalid_argument("height_percentile must lie in [0, 100]");
  if (penalty_area_thickness < 1) throw std::invalid_argument("penalty_area_thickness must be >= 1");
  if (max_control_points < 2) throw std::invalid_argument("max_control_points must be >= 2");
}

double nearest_rank_percentile(std::vector<double> values, double percentile) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  const auto n = static_cast<double>(values.size());
  const auto rank = static_cast<std::size_t>(std::max(1.0, std::ceil(percentile / 100.0 * n)));
  const std::size_t k = std::min(values.size(), rank) - 1;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
  return values[k];
}

double baseline_y_at(const Baseline& baseline, double x) {
  const auto& pts = baseline.points;
  if (x <= pts.front().x()) return pts.front().y();
  if (x >= pts.back().x()) return pts.back().y();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Point& a = pts[i];
    const Point& b = pts[i + 1];
    if (x <= b.x()) {
      const double dx = b.x() - a.x();
      return dx > 0.0 ? a.y() + (x - a.x()) / dx * (b.y() - a.y()) : b.y();
    }
  }
  return pts.back().y();
}

namespace {

Point up_normal(const Point& dir) { return {dir.y(), -dir.x()}; }

// Removes loops from a ring by dropping the vertices between the first pair
// of crossing edges found. Returns an empty ring when nothing sensible is
// left.
std::vector<Point> drop_self_intersections(std::vector<Point> ring) {
  for (int guard = 0; guard < 256 && ring.size() >= 3; ++guard) {
    const std::size_t n = ring.size();
    bool found = false;
    for (std::size_t i = 0; i < n && !found; ++i) {
      for (std::size_t j = i + 2; j < n && !found; ++j) {
        if (i == 0 && j == n - 1) continue;
        if (!segments_intersect(ring[i], ring[(i + 1) % n], ring[j], ring[(j + 1) % n])) continue;
        // Drop whichever side of the loop has fewer vertices.
        const std::size_t inner = j - i;
        std::vector<Point> next;
        if (inner <= n - inner) {
          for (std::size_t k = 0; k < n; ++k)
            if (k <= i || k > j) next.push_back(ring[k]);
        } else {
          for (std::size_t k = i + 1; k <= j; ++k) next.push_back(ring[k]);
        }
        ring = std::move(next);
        found = true;
      }
    }
    if (!found) return ring;
  }
  return {};
}

} // namespace

Polygon offset_polygon(const Baseline& baseline, double ascender, double descender) {
  const auto& pts = baseline.points;
  const std::size_t n = pts.size();
  if (n < 2) throw std::invalid_argument("offset_polygon: baseline needs two points");
  std::vector<Point> normals(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point in = i > 0 ? (pts[i] - pts[i - 1]).normalized() : Point::Zero();
    const Point out = i + 1 < n ? (pts[i + 1] - pts[i]).normalized() : Point::Zero();
    Point dir = in + out;
    if (dir.norm() < 1e-12) dir = out.norm() > 0.0 ? out : in;
    normals[i] = up_normal(dir.normalized());
  }
  std::vector<Point> ring;
  ring.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) ring.push_back(pts[i] + ascender * normals[i]);
  for (std::size_t i = n; i-- > 0;) ring.push_back(pts[i] - descender * normals[i]);

  if (!is_simple(ring)) {
    auto cleaned = drop_self_intersections(ring);
    const auto keeps_baseline = [&] {
      for (const auto& p : pts)
        if (!contains(cleaned, p) && distance_to_ring(p, cleaned) > 1e-6) return false;
      return true;
    };
    if (cleaned.size() >= 3 && is_simple(cleaned) && std::abs(signed_area(cleaned)) > 0.0 && keeps_baseline()) {
      ring = std::move(cleaned);
    } else {
      // Each baseline point lies between its two offsets, so the hull holds it.
      ring = convex_hull(ring).ring;
    }
  }
  return Polygon{std::move(ring)};
}

HeightSamples sample_heights(const Baseline& baseline, const ChannelMaps& maps) {
  HeightSamples s;
  for (const Pixel px : polyline_pixels(baseline.points, maps.size())) {
    s.asc.push_back(maps.asc(px.row, px.col));
    s.des.push_back(maps.des(px.row, px.col));
  }
  return s;
}

TextLine make_line(Baseline baseline, const HeightSamples& samples, const BlockParams& params) {
  if (samples.asc.empty()) throw InputError("baseline out of bounds");
  TextLine line;
  line.ascender = std::max(1.0, nearest_rank_percentile(samples.asc, params.height_percentile));
  line.descender = std::max(0.0, nearest_rank_percentile(samples.des, params.height_percentile));
  line.polygon = offset_polygon(baseline, line.ascender, line.descender);
  line.baseline = std::move(baseline);
  return line;
}

TextLine line_polygon(const Baseline& baseline, const ChannelMaps& maps, const BlockParams& params) {
  params.validate();
  if (baseline.points.size() < 2) throw std::invalid_argument("line_polygon: baseline needs two points");
  return make_line(baseline, sample_heights(baseline, maps), params);
}

namespace {

double strip_mass(const Baseline& baseline, double offset, int c0, int c1, const ChannelMaps& maps, int thickness) {
  const ImageSize size = maps.size();
  double sum = 0.0;
  for (int c = c0; c <= c1; ++c) {
    if (c < 0 || c >= size.width) continue;
    const double center = baseline_y_at(baseline, c) + offset;
    const int r0 = static_cast<int>(std::lround(center - 0.5 * (thickness - 1)));
    for (int r = r0; r < r0 + thickness; ++r)
      if (r >= 0 && r < size.height) sum += maps.block(r, c);
  }
  return sum;
}

} // namespace

Penalties adjacency_penalty(const TextLine& upper, const TextLine& lower, const ChannelMaps& maps,
                            const BlockParams& params) {
  const Interval a = x_extent(upper.polygon.ring);
  const Interval b = x_extent(lower.polygon.ring);
  const int c0 = static_cast<int>(std::ceil(std::max(a.lo, b.lo)));
  const int c1 = static_cast<int>(std::floor(std::min(a.hi, b.hi)));
  if (horizontal_overlap(a, b) <= 0.0 || c1 < c0) throw std::invalid_argument("not neighbours");
  const double length = c1 - c0 + 1;
  const int t = params.penalty_area_thickness;
  return {strip_mass(upper.baseline, upper.descender, c0, c1, maps, t) / length,
          strip_mass(lower.baseline, -lower.ascender, c0, c1, maps, t) / length};
}

bool vertical_neighbours(const TextLine& a, const TextLine& b, bool* upper_first) {
  const Interval ea = x_extent(a.polygon.ring);
  const Interval eb = x_extent(b.polygon.ring);
  if (horizontal_overlap(ea, eb) <= 0.0) return false;
  const double lo = std::max(ea.lo, eb.lo);
  const double hi = std::min(ea.hi, eb.hi);
  if (std::floor(hi) < std::ceil(lo)) return false;
  const double xm = 0.5 * (lo + hi);
  const double ya = baseline_y_at(a.baseline, xm);
  const double yb = baseline_y_at(b.baseline, xm);
  if (upper_first) *upper_first = ya <= yb;
  return std::abs(ya - yb) < std::max(a.height(), b.height());
}

bool same_block(const TextLine& a, const TextLine& b, const ChannelMaps& maps, const BlockParams& params) {
  bool a_upper = true;
  if (!vertical_neighbours(a, b, &a_upper)) return false;
  const Penalties p = a_upper ? adjacency_penalty(a, b, maps, params) : adjacency_penalty(b, a, maps, params);
  return p.upper < params.penalty_threshold && p.lower < params.penalty_threshold;
}

std::vector<int> cluster_labels(std::span<const TextLine> lines, const ChannelMaps& maps, const BlockParams& params) {
  const int n = static_cast<int>(lines.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (same_block(lines[i], lines[j], maps, params)) {
        const int ri = find(i);
        const int rj = find(j);
        parent[std::max(ri, rj)] = std::min(ri, rj);
      }
  std::vector<int> label(n, -1);
  std::vector<int> root_label(n, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (root_label[r] < 0) root_label[r] = next++;
    label[i] = root_label[r];
  }
  return label;
}

double block_alpha(std::span<const TextLine> lines) {
  std::vector<double> heights;
  for (const auto& l : lines) heights.push_back(l.height());
  if (heights.empty()) return 0.0;
  std::sort(heights.begin(), heights.end());
  const std::size_t m = heights.size();
  const double median = m % 2 ? heights[m / 2] : 0.5 * (heights[m / 2 - 1] + heights[m / 2]);
  return median > 0.0 ? 1.0 / (2.0 * median) : 0.0;
}

Polygon block_polygon(std::span<const TextLine> lines) {
  const double alpha = block_alpha(lines);
  std::vector<Point> points;
  for (const auto& l : lines) {
    const auto dense = alpha > 0.0 ? densify_ring(l.polygon.ring, 1.0 / alpha) : l.polygon.ring;
    points.insert(points.end(), dense.begin(), dense.end());
  }
  Polygon shape = alpha_shape(points, alpha);
  bool ok = is_simple(shape.ring);
  for (std::size_t i = 0; ok && i < lines.size(); ++i)
    ok = intersection_area(shape, lines[i].polygon) >= 0.95 * area(lines[i].polygon);
  if (!ok) shape = convex_hull(points);
  return shape;
}

std::vector<TextBlock> cluster_blocks(std::vector<TextLine> lines, const ChannelMaps& maps, const BlockParams& params) {
  params.validate();
  const auto labels = cluster_labels(lines, maps, params);
  const int count = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<TextBlock> blocks(count);
  for (std::size_t i = 0; i < lines.size(); ++i) blocks[labels[i]].lines.push_back(std::move(lines[i]));
  for (auto& b : blocks) {
    sort_reading_order(b);
    b.polygon = block_polygon(b.lines);
  }
  std::stable_sort(blocks.begin(), blocks.end(), [](const TextBlock& a, const TextBlock& b) {
    const Point pa = polyline_midpoint(a.lines.front().baseline.points);
    const Point pb = polyline_midpoint(b.lines.front().baseline.points);
    if (pa.y() != pb.y()) return pa.y() < pb.y();
    return pa.x() < pb.x();
  });
  for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i].id = "b" + std::to_string(i);
  return blocks;
}

namespace {

bool should_merge(const TextLine& a, const TextLine& b, const BlockParams& params) {
  const double h = std::min(a.height(), b.height());
  const double dy = std::abs(polyline_midpoint(a.baseline.points).y() - polyline_midpoint(b.baseline.points).y());
  if (dy > params.merge_y_tolerance * h) return false;
  const Interval ea = x_extent(a.baseline.points);
  const Interval eb = x_extent(b.baseline.points);
  const double gap = std::max(eb.lo - ea.hi, ea.lo - eb.hi);
  return gap <= params.merge_x_gap * h;
}

TextLine merge_pair(const TextLine& a, const TextLine& b, const ChannelMaps& maps, const BlockParams& params) {
  auto samples = sample_polyline(a.baseline.points, 1.0);
  const auto more = sample_polyline(b.baseline.points, 1.0);
  samples.insert(samples.end(), more.begin(), more.end());
  Baseline merged = fit_spline(samples, params.max_control_points);
  if (merged.points.size() < 2) return a;

  HeightSamples heights = sample_heights(a.baseline, maps);
  const HeightSamples hb = sample_heights(b.baseline, maps);
  heights.asc.insert(heights.asc.end(), hb.asc.begin(), hb.asc.end());
  heights.des.insert(heights.des.end(), hb.des.begin(), hb.des.end());
  if (heights.asc.empty()) {
    heights.asc = {std::max(a.ascender, b.ascender)};
    heights.des = {std::max(a.descender, b.descender)};
  }
  TextLine out = make_line(std::move(merged), heights, params);
  out.id = x_extent(a.baseline.points).lo <= x_extent(b.baseline.points).lo ? a.id : b.id;
  return out;
}

} // namespace

TextBlock merge_block_lines(TextBlock block, const ChannelMaps& maps, const BlockParams& params) {
  params.validate();
  sort_reading_order(block);
  bool merged_any = false;
  for (bool changed = true; changed;) {
    changed = false;
    auto& lines = block.lines;
    for (std::size_t i = 0; i < lines.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < lines.size() && !changed; ++j) {
        if (!should_merge(lines[i], lines[j], params)) continue;
        lines[i] = merge_pair(lines[i], lines[j], maps, params);
        lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(j));
        changed = merged_any = true;
      }
    }
    if (changed) sort_reading_order(block);
  }
  if (merged_any) block.polygon = block_polygon(block.lines);
  return block;
}

} // namespace pagelayout
