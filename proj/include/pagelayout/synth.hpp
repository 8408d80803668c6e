#pragma once

#include <cstdint>

#include "pagelayout/channel_maps.hpp"
#include "pagelayout/layout.hpp"

namespace pagelayout {

template <typename T>
struct Range {
  T lo;
  T hi;
};

struct SynthConfig {
  std::uint64_t seed = 1;
  ImageSize page_size{1000, 750};
  Range<int> columns{1, 2};
  Range<int> blocks_per_column{1, 3};
  Range<int> lines_per_block{2, 8};
  Range<double> ascender_range{8.0, 24.0};
  Range<double> descender_ratio{0.2, 0.5};
  double vertical_line_prob = 0.0; // per block
  double baseline_jitter = 0.0;    // max |dy| of interior baseline points, pixels
  double margin = 40.0;

  void validate() const;
};

/// Seeded random page. Lines of a block share ascender and descender and sit
/// closer than one text height apart; blocks in a column are separated by at
/// least one text height; columns by at least two. With probability
/// vertical_line_prob a block is set vertically, running top to bottom or
/// bottom to top. When a column overflows, lines are removed from its
/// largest blocks down to lines_per_block.lo; if that is not enough the
/// config is rejected with InputError.
PageLayout generate(const SynthConfig& config);

/// Degrades maps in this order: dropout runs on base, blur_size box blur of
/// every channel, Gaussian noise of noise_sigma on every channel clamped to
/// its valid range. Dropout cuts vertical foreground segments over runs of 2
/// to 5 columns; dropout_prob is the expected fraction of foreground columns
/// removed, and 1 clears the channel.
ChannelMaps corrupt(const ChannelMaps& maps, double noise_sigma, int blur_size, double dropout_prob,
                    std::uint64_t seed);

} // namespace pagelayout
