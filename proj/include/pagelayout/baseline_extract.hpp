#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pagelayout/channel_maps.hpp"
#include "pagelayout/errors.hpp"
#include "pagelayout/layout.hpp"

namespace pagelayout {

struct ExtractParams {
  int smooth_size = 3;
  int nms_size = 7;
  double threshold = 0.3;
  int cc_width = 5;
  int cc_height = 9;
  int min_length = 5;
  int max_control_points = 10;

  void validate() const;
};

/// size x size box mean with edge replication. Separable, accumulated in
/// double.
template <typename Derived>
Plane<typename Derived::Scalar> smooth(const Eigen::ArrayBase<Derived>& map, int size) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index rows = map.rows();
  const Eigen::Index cols = map.cols();
  const int half = size / 2;
  Plane<double> horiz(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (int k = -half; k <= half; ++k)
        acc += static_cast<double>(map(r, std::clamp<Eigen::Index>(c + k, 0, cols - 1)));
      horiz(r, c) = acc / size;
    }
  }
  Plane<Scalar> out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (int k = -half; k <= half; ++k) acc += horiz(std::clamp<Eigen::Index>(r + k, 0, rows - 1), c);
      out(r, c) = static_cast<Scalar>(acc / size);
    }
  }
  return out;
}

/// Keeps a pixel (value unchanged) iff it equals the maximum of the
/// size-tall vertical window centered on it, truncated at the borders; ties
/// with the maximum are kept. Everything else becomes 0.
template <typename Derived>
Plane<typename Derived::Scalar> vertical_nms(const Eigen::ArrayBase<Derived>& map, int size) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index rows = map.rows();
  const Eigen::Index cols = map.cols();
  const int half = size / 2;
  Plane<Scalar> out = Plane<Scalar>::Zero(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, r - half);
    const Eigen::Index hi = std::min<Eigen::Index>(rows - 1, r + half);
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Scalar v = map(r, c);
      bool is_max = true;
      for (Eigen::Index k = lo; k <= hi && is_max; ++k) is_max = map(k, c) <= v;
      if (is_max) out(r, c) = v;
    }
  }
  return out;
}

struct ComponentLabels {
  Plane<int> labels; // 0 = background, components numbered 1..count in raster order of first pixel
  int count = 0;
};

/// Connected components where two foreground pixels are adjacent iff
/// |dx| <= window_width / 2 and |dy| <= window_height / 2.
ComponentLabels connected_components(const Plane<bool>& mask, int window_width, int window_height);

/// Linear spline through samples: n = min(max_control_points, floor(x extent) + 1)
/// uniformly spaced x positions spanning the samples; each control point takes
/// the mean y of the samples nearest to it in x. Empty bins are dropped.
Polyline fit_spline(std::span<const Point> samples, int max_control_points);

/// Foreground mask fed to connected components:
/// clamp0(vertical_nms(smooth(base)) - end) >= threshold.
Plane<bool> baseline_mask(const ChannelMaps& maps, const ExtractParams& params);

/// Full baseline detection on one frame. Baselines are returned in label
/// order with strictly increasing x.
std::vector<Baseline> detect_baselines(const ChannelMaps& maps, const ExtractParams& params = {},
                                       Diagnostics* diag = nullptr);

} // namespace pagelayout
