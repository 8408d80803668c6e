#include "pagelayout/multi_orient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pagelayout/raster.hpp"

namespace pagelayout {

double angular_distance(double a_deg, double b_deg) {
  const double d = std::fmod(std::abs(a_deg - b_deg), 360.0);
  return std::min(d, 360.0 - d);
}

double processing_angle(int turns) {
  const double a = 90.0 * normalize_turns(turns);
  return a > 180.0 ? a - 360.0 : a;
}

namespace {

double median(std::vector<double> v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

OrientationEstimate estimate_line_angle(const TextLine& line, const OrientationMaps& omaps) {
  const auto pixels = pixels_inside(line.polygon.ring, omaps.size());
  if (pixels.empty()) throw InputError("empty polygon");
  std::vector<double> xs, ys;
  xs.reserve(pixels.size());
  ys.reserve(pixels.size());
  for (const Pixel px : pixels) {
    const float x = omaps.ox(px.row, px.col);
    const float y = omaps.oy(px.row, px.col);
    if (x == 0.0f && y == 0.0f) continue;
    xs.push_back(x);
    ys.push_back(y);
  }
  // No direction anywhere: the zero vector, read as horizontal.
  if (xs.empty()) {
    xs.push_back(0.0);
    ys.push_back(0.0);
  }
  OrientationEstimate e;
  e.x_med = median(std::move(xs));
  e.y_med = median(std::move(ys));
  e.angle_deg = std::atan2(e.y_med, e.x_med) * 180.0 / std::numbers::pi;
  if (e.angle_deg <= -180.0) e.angle_deg += 360.0;
  return e;
}

TextLine rotate90(const TextLine& line, ImageSize size, int turns) {
  TextLine out = line;
  out.baseline = rotate90(line.baseline, size, turns);
  out.polygon = rotate90(line.polygon, size, turns);
  return out;
}

namespace {

struct Candidate {
  int pass;
  TextLine frame_line; // in the pass's processing frame
  TextLine page_line;  // mapped back to the original frame
  double deviation;
  bool alive = true;
};

} // namespace

PageLayout detect_multi_orientation(const std::array<ChannelMaps, 3>& maps_by_turn, const OrientationMaps& omaps,
                                    const MultiOrientParams& params, std::string page_id, Diagnostics* diag) {
  const ImageSize page = omaps.size();
  for (std::size_t k = 0; k < kProcessingTurns.size(); ++k)
    if (maps_by_turn[k].size() != rotated_size(page, kProcessingTurns[k]))
      throw InputError("detect_multi_orientation: maps for turn " + std::to_string(kProcessingTurns[k]) +
                       " do not match the page shape");

  std::vector<Candidate> candidates;
  for (int k = 0; k < 3; ++k) {
    const int turns = kProcessingTurns[k];
    const ImageSize frame = maps_by_turn[k].size();
    const double alpha = processing_angle(turns);
    for (auto& line : extract_lines(maps_by_turn[k], params.pipeline, diag)) {
      TextLine page_line = rotate90(line, frame, 4 - turns);
      double deviation;
      try {
        deviation = angular_distance(estimate_line_angle(page_line, omaps).angle_deg, alpha);
      } catch (const InputError&) {
        continue;
      }
      if (deviation > params.max_angle_deviation) continue;
      candidates.push_back({k, std::move(line), std::move(page_line), deviation});
    }
  }

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t j = i + 1; j < candidates.size() && candidates[i].alive; ++j) {
      auto& a = candidates[i];
      auto& b = candidates[j];
      if (!b.alive || a.pass == b.pass) continue;
      if (polygon_iou(a.page_line.polygon, b.page_line.polygon) <= params.duplicate_iou) continue;
      (b.deviation < a.deviation ? a : b).alive = false;
    }
  }

  std::vector<TextBlock> blocks;
  for (int k = 0; k < 3; ++k) {
    const int turns = kProcessingTurns[k];
    const ImageSize frame = maps_by_turn[k].size();
    std::vector<TextLine> lines;
    for (const auto& c : candidates)
      if (c.alive && c.pass == k) lines.push_back(c.frame_line);
    auto pass_blocks = cluster_blocks(std::move(lines), maps_by_turn[k], params.pipeline.blocks);
    for (auto& block : pass_blocks) {
      if (params.pipeline.merge_lines) block = merge_block_lines(std::move(block), maps_by_turn[k], params.pipeline.blocks);
      TextBlock back;
      for (const auto& line : block.lines) back.lines.push_back(rotate90(line, frame, 4 - turns));
      blocks.push_back(std::move(back));
    }
  }
  return finalize_layout(std::move(blocks), page, std::move(page_id));
}

} // namespace pagelayout
