#pragma once

#include <cstdint>

#include "pagelayout/channel_maps.hpp"

namespace pagelayout {

inline constexpr double kTargetAscender = 12.0;

struct ScaleEstimate {
  double median_ascender = 0.0;
  double scale_factor = 1.0; // target_ascender / median_ascender
  double target_ascender = kTargetAscender;
};

/// Median of maps.asc over pixels with maps.base >= raw_threshold (mean of
/// the two middle values for an even count). Throws InputError("no text
/// detected") when the mask is empty or the median is not positive.
ScaleEstimate estimate_scale(const ChannelMaps& maps, double raw_threshold = 0.3,
                             double target_ascender = kTargetAscender);

/// 2^x.
double scale_from_normal(double x);

/// s = 2^x with x the first normal draw of SplitMix64(seed).
double sample_scale_augmentation(std::uint64_t seed);

} // namespace pagelayout
