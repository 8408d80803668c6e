#pragma once

#include <string>
#include <vector>

#include "pagelayout/baseline_extract.hpp"
#include "pagelayout/line_blocks.hpp"

namespace pagelayout {

struct PipelineParams {
  ExtractParams extract;
  BlockParams blocks;
  bool merge_lines = true;
};

/// Lines for every detected baseline of one frame, unclustered.
std::vector<TextLine> extract_lines(const ChannelMaps& maps, const PipelineParams& params = {},
                                    Diagnostics* diag = nullptr);

/// Clamps geometry into the page, drops lines that collapse, recomputes block
/// outlines, orders blocks by their first line and assigns ids "b<i>" and
/// "b<i>l<j>".
PageLayout finalize_layout(std::vector<TextBlock> blocks, ImageSize size, std::string page_id);

/// Baselines -> line polygons -> blocks -> (optional) in-block line merging.
PageLayout extract_layout(const ChannelMaps& maps, const PipelineParams& params = {}, std::string page_id = {},
                          Diagnostics* diag = nullptr);

} // namespace pagelayout
