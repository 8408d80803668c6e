#pragma once

#include <array>
#include <string>

#include "pagelayout/extract.hpp"

namespace pagelayout {

struct OrientationEstimate {
  double angle_deg = 0.0; // atan2(y_med, x_med), in (-180, 180]
  double x_med = 0.0;
  double y_med = 0.0;
};

/// Quarter turns of the three processing passes, in the order
/// detect_multi_orientation expects its maps.
inline constexpr std::array<int, 3> kProcessingTurns{0, 1, 3};

/// Smallest absolute difference of two angles, in [0, 180].
double angular_distance(double a_deg, double b_deg);

/// Processing angle of a pass: 90 degrees per counterclockwise quarter turn,
/// expressed in image coordinates (y down), so turns = 1 matches text running
/// top to bottom.
double processing_angle(int turns);

/// Componentwise medians of the orientation field over the pixels inside the
/// line polygon. Zero vectors carry no direction and are skipped; if every
/// vector is zero the estimate is (0, 0), angle 0. Throws
/// InputError("empty polygon") if no pixel center falls inside.
OrientationEstimate estimate_line_angle(const TextLine& line, const OrientationMaps& omaps);

struct MultiOrientParams {
  PipelineParams pipeline;
  double max_angle_deviation = 45.0;
  double duplicate_iou = 0.5;
};

/// Runs extraction in each processing frame, maps lines back to the original
/// frame, keeps a line only if its estimated angle is within
/// max_angle_deviation of its pass angle, drops cross-pass duplicates
/// (polygon IoU > duplicate_iou, the smaller deviation survives) and clusters
/// the survivors per pass with that pass's maps.
///
/// `maps_by_turn[k]` holds the detection maps of the page rotated by
/// kProcessingTurns[k]; `omaps` is in the original frame.
PageLayout detect_multi_orientation(const std::array<ChannelMaps, 3>& maps_by_turn, const OrientationMaps& omaps,
                                    const MultiOrientParams& params = {}, std::string page_id = {},
                                    Diagnostics* diag = nullptr);

TextLine rotate90(const TextLine& line, ImageSize size, int turns);

} // namespace pagelayout
