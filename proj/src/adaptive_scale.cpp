#include "pagelayout/adaptive_scale.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pagelayout/errors.hpp"
#include "pagelayout/rng.hpp"

namespace pagelayout {

ScaleEstimate estimate_scale(const ChannelMaps& maps, double raw_threshold, double target_ascender) {
  if (!(target_ascender > 0.0)) throw std::invalid_argument("target ascender must be positive");
  std::vector<double> values;
  for (Eigen::Index i = 0; i < maps.base.size(); ++i)
    if (maps.base.data()[i] >= raw_threshold) values.push_back(maps.asc.data()[i]);
  if (values.empty()) throw InputError("no text detected");
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  double median = *mid;
  if (n % 2 == 0) median = 0.5 * (median + *std::max_element(values.begin(), mid));
  if (!(median > 0.0)) throw InputError("no text detected");
  return {median, target_ascender / median, target_ascender};
}

double scale_from_normal(double x) { return std::exp2(x); }

double sample_scale_augmentation(std::uint64_t seed) {
  SplitMix64 rng(seed);
  return scale_from_normal(rng.normal());
}

} // namespace pagelayout
