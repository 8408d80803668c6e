#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pagelayout/geometry.hpp"

namespace pagelayout {

using Baseline = Polyline;

struct TextLine {
  std::string id;
  Baseline baseline;
  double ascender = 1.0;  // pixels above the baseline, >= 1
  double descender = 0.0; // pixels below the baseline, >= 0
  Polygon polygon;

  double height() const { return ascender + descender; }
};

struct TextBlock {
  std::string id;
  std::vector<TextLine> lines; // reading order
  Polygon polygon;
};

struct PageLayout {
  std::string page_id;
  ImageSize size;
  std::vector<TextBlock> blocks;

  std::size_t line_count() const;
};

/// Canonical JSON encoding: fixed key order, two-space indentation,
/// shortest round-trip floats, trailing newline.
std::string save_layout(const PageLayout& layout);

/// Parses and validates a layout document. Coordinates are clamped into the
/// page box [0, width] x [0, height]; any other invariant violation throws
/// InputError naming the offending field, e.g. "blocks[0].lines[2].ascender".
PageLayout load_layout(std::string_view json_text);

/// Throws InputError if `layout` violates a data-model invariant.
void validate_layout(const PageLayout& layout);

/// Line ids ordered by the y of each baseline's arc-length midpoint, ties
/// broken by the smaller left x.
std::vector<std::string> reading_order(const TextBlock& block);

/// Reorders the lines of `block` in place per reading_order.
void sort_reading_order(TextBlock& block);

/// Clamps every coordinate into [0, width] x [0, height].
void clamp_to_page(PageLayout& layout);

std::vector<const TextLine*> all_lines(const PageLayout& layout);

PageLayout rotate90(const PageLayout& layout, int turns);

} // namespace pagelayout
