#pragma once

#include <span>
#include <vector>

#include "pagelayout/channel_maps.hpp"
#include "pagelayout/errors.hpp"
#include "pagelayout/layout.hpp"

namespace pagelayout {

struct BlockParams {
  double height_percentile = 75.0;
  int penalty_area_thickness = 3;
  double penalty_threshold = 0.3;
  double merge_y_tolerance = 0.5; // fraction of the smaller line height
  double merge_x_gap = 1.0;       // fraction of the smaller line height
  int max_control_points = 10;

  void validate() const;
};

/// Nearest-rank percentile: the ceil(p / 100 * n)-th smallest value
/// (1-based, at least the first). Throws std::invalid_argument on empty input.
double nearest_rank_percentile(std::vector<double> values, double percentile);

/// Baseline y at column x by linear interpolation; x-monotone baselines only.
/// Clamps to the end points outside the baseline's x range.
double baseline_y_at(const Baseline& baseline, double x);

/// Text-line outline: the baseline offset by `ascender` along the local
/// upward normal followed by the reversed baseline offset by `descender`
/// along the downward normal. Interior normals bisect the adjacent segments;
/// self-intersections are removed by dropping the looping vertices, or the
/// outline becomes its convex hull when that would lose part of the baseline.
Polygon offset_polygon(const Baseline& baseline, double ascender, double descender);

struct HeightSamples {
  std::vector<double> asc;
  std::vector<double> des;
};

/// asc/des values at the pixels of the rasterized baseline.
HeightSamples sample_heights(const Baseline& baseline, const ChannelMaps& maps);

/// Builds a TextLine from heights given as sample sets.
TextLine make_line(Baseline baseline, const HeightSamples& samples, const BlockParams& params);

/// Line with heights taken as the percentile of asc/des sampled on the
/// baseline pixels. Throws InputError("baseline out of bounds") when no
/// baseline pixel lies inside the maps.
TextLine line_polygon(const Baseline& baseline, const ChannelMaps& maps, const BlockParams& params = {});

struct Penalties {
  double upper = 0.0; // strip on the upper line's descender line
  double lower = 0.0; // strip on the lower line's ascender line
};

/// Block-boundary mass in two penalty_area_thickness-tall strips spanning the
/// lines' horizontal intersection, each divided by its length in columns.
/// Throws std::invalid_argument("not neighbours") when the intersection
/// contains no pixel column.
Penalties adjacency_penalty(const TextLine& upper, const TextLine& lower, const ChannelMaps& maps,
                            const BlockParams& params = {});

/// Geometric half of the neighbour rule: horizontal overlap of the polygons
/// and baseline distance (at the middle of the overlap) below the larger of
/// the two text heights. Sets `upper_first` when `a` lies above `b`.
bool vertical_neighbours(const TextLine& a, const TextLine& b, bool* upper_first = nullptr);

/// Full pairwise rule: geometric neighbours whose two penalties are both
/// below the threshold.
bool same_block(const TextLine& a, const TextLine& b, const ChannelMaps& maps, const BlockParams& params);

/// Component index per input line (0-based, numbered by first member) of the
/// transitive closure of same_block.
std::vector<int> cluster_labels(std::span<const TextLine> lines, const ChannelMaps& maps, const BlockParams& params);

/// Groups lines into blocks; each block's lines are in reading order and its
/// polygon comes from block_polygon. Blocks are ordered by their first line.
std::vector<TextBlock> cluster_blocks(std::vector<TextLine> lines, const ChannelMaps& maps,
                                      const BlockParams& params = {});

/// Alpha used for block outlines: 1 / (2 * median line height).
double block_alpha(std::span<const TextLine> lines);

/// Alpha shape of the (densified) member line polygon vertices. Falls back
/// to the convex hull whenever the alpha shape is not simple or leaves more
/// than 5 % of any member line outside.
Polygon block_polygon(std::span<const TextLine> lines);

/// Merges same-row fragments until no pair qualifies: baseline midpoints
/// within merge_y_tolerance * h vertically and baselines no more than
/// merge_x_gap * h apart horizontally (h = smaller line height). The merged
/// baseline is refit from both baselines; heights use the percentile rule on
/// the union of both lines' samples.
TextBlock merge_block_lines(TextBlock block, const ChannelMaps& maps, const BlockParams& params = {});

} // namespace pagelayout
