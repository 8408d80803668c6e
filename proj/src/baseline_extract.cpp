#include "pagelayout/baseline_extract.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pagelayout {

void ExtractParams::validate() const {
  if (smooth_size < 1 || nms_size < 1 || smooth_size % 2 == 0 || nms_size % 2 == 0)
    throw std::invalid_argument("smooth_size and nms_size must be positive and odd");
  if (cc_width < 1 || cc_height < 1 || min_length < 1 || max_control_points < 2)
    throw std::invalid_argument("extract params must be positive");
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw std::invalid_argument("threshold must lie in [0, 1]");
}

namespace {

struct UnionFind {
  std::vector<int> parent;

  int make() {
    parent.push_back(static_cast<int>(parent.size()));
    return parent.back();
  }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

} // namespace

ComponentLabels connected_components(const Plane<bool>& mask, int window_width, int window_height) {
  const int rows = static_cast<int>(mask.rows());
  const int cols = static_cast<int>(mask.cols());
  const int hw = window_width / 2;
  const int hh = window_height / 2;
  Plane<int> provisional = Plane<int>::Constant(rows, cols, -1);
  UnionFind sets;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (!mask(r, c)) continue;
      const int id = sets.make();
      provisional(r, c) = id;
      // Already-scanned part of the window: rows above, plus the left half of this row.
      for (int rr = std::max(0, r - hh); rr <= r; ++rr) {
        const int c_hi = rr == r ? c - 1 : std::min(cols - 1, c + hw);
        for (int cc = std::max(0, c - hw); cc <= c_hi; ++cc) {
          const int other = provisional(rr, cc);
          if (other >= 0) sets.unite(id, other);
        }
      }
    }
  }

  ComponentLabels out{Plane<int>::Zero(rows, cols), 0};
  std::vector<int> final_label(sets.parent.size(), 0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int id = provisional(r, c);
      if (id < 0) continue;
      const int root = sets.find(id);
      if (final_label[root] == 0) final_label[root] = ++out.count;
      out.labels(r, c) = final_label[root];
    }
  }
  return out;
}

Polyline fit_spline(std::span<const Point> samples, int max_control_points) {
  Polyline line;
  if (samples.empty()) return line;
  const Interval ext = x_extent(samples);
  const double span = ext.hi - ext.lo;
  const int n = std::min(max_control_points, static_cast<int>(std::floor(span)) + 1);
  if (n < 2 || span <= 0.0) return line;
  const double step = span / (n - 1);
  std::vector<double> sum(n, 0.0);
  std::vector<int> count(n, 0);
  for (const auto& p : samples) {
    const int bin = std::clamp(static_cast<int>(std::lround((p.x() - ext.lo) / step)), 0, n - 1);
    sum[bin] += p.y();
    ++count[bin];
  }
  for (int i = 0; i < n; ++i) {
    if (count[i] == 0) continue;
    const double x = i == n - 1 ? ext.hi : ext.lo + i * step;
    line.points.emplace_back(x, sum[i] / count[i]);
  }
  if (line.points.size() < 2) line.points.clear();
  return line;
}

Plane<bool> baseline_mask(const ChannelMaps& maps, const ExtractParams& params) {
  const PlaneF thin = vertical_nms(smooth(maps.base, params.smooth_size), params.nms_size);
  const PlaneF separated = (thin - maps.end).max(0.0f);
  return separated >= static_cast<float>(params.threshold);
}

std::vector<Baseline> detect_baselines(const ChannelMaps& maps, const ExtractParams& params, Diagnostics* diag) {
  params.validate();
  const ComponentLabels cc = connected_components(baseline_mask(maps, params), params.cc_width, params.cc_height);

  std::vector<std::vector<Point>> members(cc.count);
  for (Eigen::Index r = 0; r < cc.labels.rows(); ++r)
    for (Eigen::Index c = 0; c < cc.labels.cols(); ++c)
      if (const int l = cc.labels(r, c)) members[l - 1].emplace_back(static_cast<double>(c), static_cast<double>(r));

  std::vector<Baseline> out;
  int tall = 0;
  for (int k = 0; k < cc.count; ++k) {
    const auto& pts = members[k];
    const Box box = bounding_box(pts);
    const double width = box.max.x() - box.min.x() + 1.0;
    if (width < params.min_length) continue;
    if (box.max.y() - box.min.y() + 1.0 > params.cc_height) ++tall;
    Polyline line = fit_spline(pts, params.max_control_points);
    if (line.points.size() >= 2) out.push_back(std::move(line));
  }
  if (tall > 0)
    warn(diag, "detect_baselines: " + std::to_string(tall) + " component(s) taller than the connectivity window");
  return out;
}

} // namespace pagelayout
