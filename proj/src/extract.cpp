#include "pagelayout/extract.hpp"

#include <algorithm>
#include <cmath>

namespace pagelayout {

std::vector<TextLine> extract_lines(const ChannelMaps& maps, const PipelineParams& params, Diagnostics* diag) {
  std::vector<TextLine> lines;
  for (auto& baseline : detect_baselines(maps, params.extract, diag)) {
    try {
      lines.push_back(line_polygon(baseline, maps, params.blocks));
    } catch (const InputError& e) {
      warn(diag, std::string("extract_lines: dropped baseline: ") + e.what());
    }
  }
  return lines;
}

namespace {

void clamp_line(TextLine& line, ImageSize size) {
  auto clamp = [&](Point& p) {
    p.x() = std::clamp(p.x(), 0.0, static_cast<double>(size.width));
    p.y() = std::clamp(p.y(), 0.0, static_cast<double>(size.height));
  };
  for (auto& p : line.baseline.points) clamp(p);
  for (auto& p : line.polygon.ring) clamp(p);
  auto& pts = line.baseline.points;
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  auto& ring = line.polygon.ring;
  ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
  while (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
}

} // namespace

PageLayout finalize_layout(std::vector<TextBlock> blocks, ImageSize size, std::string page_id) {
  PageLayout layout;
  layout.page_id = std::move(page_id);
  layout.size = size;
  for (auto& block : blocks) {
    std::vector<TextLine> kept;
    for (auto& line : block.lines) {
      clamp_line(line, size);
      if (line.baseline.points.size() < 2 || line.polygon.ring.size() < 3 || area(line.polygon) <= 0.0) continue;
      kept.push_back(std::move(line));
    }
    if (kept.empty()) continue;
    block.lines = std::move(kept);
    sort_reading_order(block);
    block.polygon = block_polygon(block.lines);
    layout.blocks.push_back(std::move(block));
  }
  std::stable_sort(layout.blocks.begin(), layout.blocks.end(), [](const TextBlock& a, const TextBlock& b) {
    const Point pa = polyline_midpoint(a.lines.front().baseline.points);
    const Point pb = polyline_midpoint(b.lines.front().baseline.points);
    if (pa.y() != pb.y()) return pa.y() < pb.y();
    return pa.x() < pb.x();
  });
  for (std::size_t i = 0; i < layout.blocks.size(); ++i) {
    auto& block = layout.blocks[i];
    block.id = "b" + std::to_string(i);
    for (std::size_t j = 0; j < block.lines.size(); ++j) block.lines[j].id = block.id + "l" + std::to_string(j);
  }
  return layout;
}

PageLayout extract_layout(const ChannelMaps& maps, const PipelineParams& params, std::string page_id,
                          Diagnostics* diag) {
  auto blocks = cluster_blocks(extract_lines(maps, params, diag), maps, params.blocks);
  if (params.merge_lines)
    for (auto& block : blocks) block = merge_block_lines(std::move(block), maps, params.blocks);
  return finalize_layout(std::move(blocks), maps.size(), std::move(page_id));
}

} // namespace pagelayout
