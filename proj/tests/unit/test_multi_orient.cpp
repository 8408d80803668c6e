#include <cmath>

#include "doctest.h"

#include "pagelayout/eval.hpp"
#include "pagelayout/extract.hpp"
#include "pagelayout/gt_render.hpp"
#include "pagelayout/line_blocks.hpp"
#include "pagelayout/multi_orient.hpp"
#include "pagelayout/synth.hpp"

using namespace pagelayout;

namespace {

std::array<ChannelMaps, 3> maps_by_turn(const PageLayout& page) {
  const ChannelMaps base = render_gt(page);
  return {rotate_maps(base, kProcessingTurns[0]), rotate_maps(base, kProcessingTurns[1]),
          rotate_maps(base, kProcessingTurns[2])};
}

TextLine box_line(double x0, double y0, double x1, double y1) {
  TextLine line;
  line.id = "l";
  line.baseline.points = {{x0, y1}, {x1, y1}};
  line.ascender = y1 - y0;
  line.polygon.ring = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  return line;
}

std::vector<NamedPolygon> line_polygons(const PageLayout& page) {
  std::vector<NamedPolygon> out;
  for (const TextLine* l : all_lines(page)) out.push_back({l->id, l->polygon});
  return out;
}

} // namespace

TEST_CASE("angular_distance") {
  CHECK(angular_distance(0, 0) == 0.0);
  CHECK(angular_distance(350, 10) == 20.0);
  CHECK(angular_distance(90, 270) == 180.0);
  CHECK(angular_distance(-90, 90) == 180.0);
  CHECK(angular_distance(-170, 170) == 20.0);
}

TEST_CASE("processing angles") {
  CHECK(processing_angle(0) == 0.0);
  CHECK(processing_angle(1) == 90.0);
  CHECK(processing_angle(3) == -90.0);
}

TEST_CASE("estimate_line_angle") {
  // Pixel centers 10..29 x 10..19 lie inside.
  const TextLine line = box_line(9.5, 9.5, 29.5, 19.5);
  OrientationMaps o = OrientationMaps::zeros({40, 40});

  o.ox.setConstant(1.0f);
  CHECK(estimate_line_angle(line, o).angle_deg == 0.0);

  o.ox.setZero();
  o.oy.setConstant(1.0f);
  CHECK(estimate_line_angle(line, o).angle_deg == 90.0);

  // 99 pixels (1, 0) and 101 pixels (0.6, 0.8).
  o.ox.setConstant(0.6f);
  o.oy.setConstant(0.8f);
  o.ox.block(10, 10, 10, 10).setConstant(1.0f);
  o.oy.block(10, 10, 10, 10).setConstant(0.0f);
  o.ox(10, 19) = 0.6f;
  o.oy(10, 19) = 0.8f;
  const OrientationEstimate e = estimate_line_angle(line, o);
  CHECK(e.x_med == doctest::Approx(0.6));
  CHECK(e.y_med == doctest::Approx(0.8));
  CHECK(e.angle_deg == doctest::Approx(53.1301).epsilon(1e-5));

  CHECK_THROWS_WITH_AS(estimate_line_angle(box_line(50, 50, 60, 55), o), "empty polygon", InputError);
}

TEST_CASE("rotate90 of a line round-trips") {
  const TextLine line = box_line(3, 4, 20, 9);
  const ImageSize size{30, 40};
  const TextLine back = rotate90(rotate90(line, size, 1), rotated_size(size, 1), 3);
  CHECK(back.baseline.points == line.baseline.points);
  CHECK(back.polygon.ring == line.polygon.ring);
}

TEST_CASE("horizontal-only page equals single-orientation extraction") {
  SynthConfig cfg;
  cfg.seed = 7;
  cfg.page_size = {480, 640};
  const PageLayout gt = generate(cfg);
  const auto maps = maps_by_turn(gt);
  const OrientationMaps omaps = render_orientation_gt(gt);
  const PageLayout multi = detect_multi_orientation(maps, omaps, {}, gt.page_id);
  const PageLayout single = extract_layout(maps[0], {}, gt.page_id);
  CHECK(save_layout(multi) == save_layout(single));
}

TEST_CASE("45 degrees from the pass angle is still retained") {
  SynthConfig cfg;
  cfg.seed = 8;
  cfg.page_size = {480, 640};
  const PageLayout gt = generate(cfg);
  const auto maps = maps_by_turn(gt);
  OrientationMaps omaps = OrientationMaps::zeros(gt.size);
  omaps.ox.setConstant(1.0f);
  omaps.oy.setConstant(1.0f);
  const PageLayout multi = detect_multi_orientation(maps, omaps, {}, gt.page_id);
  // Every line of the 0 degree pass survives; fragments from the 90 degree
  // pass sit on the boundary as well and may survive too.
  const PageLayout single = extract_layout(maps[0], {}, gt.page_id);
  CHECK(match_polygons(line_polygons(multi), line_polygons(single), 0.95).recall == 1.0);

  MultiOrientParams strict;
  strict.max_angle_deviation = 44.9;
  CHECK(detect_multi_orientation(maps, omaps, strict, gt.page_id).line_count() == 0);
}

TEST_CASE("one vertical line is kept once, from the matching pass") {
  PageLayout gt;
  gt.page_id = "v";
  gt.size = {200, 100};
  TextLine line;
  line.id = "l";
  line.baseline.points = {{50, 20}, {50, 180}};
  line.ascender = 12;
  line.descender = 4;
  line.polygon = offset_polygon(line.baseline, line.ascender, line.descender);
  TextBlock block;
  block.id = "b";
  block.lines = {line};
  block.polygon = line.polygon;
  gt.blocks = {block};

  const auto maps = maps_by_turn(gt);
  const OrientationMaps omaps = render_orientation_gt(gt);
  CHECK(estimate_line_angle(line, omaps).angle_deg == doctest::Approx(90.0));
  // Unfiltered, the horizontal pass also sees a fragment set or nothing; the
  // rule must leave exactly one line.
  const PageLayout multi = detect_multi_orientation(maps, omaps, {}, "v");
  REQUIRE(multi.line_count() == 1);
  const TextLine& got = multi.blocks[0].lines[0];
  CHECK(polygon_iou(got.polygon, line.polygon) > 0.7);
  CHECK(got.baseline.points.front().y() < got.baseline.points.back().y());
}

TEST_CASE("output is equivariant under a page rotation") {
  // Horizontal text stays within 90 degrees of every pass under a quarter
  // turn either way; lines turned upside down would be dropped by design.
  SynthConfig cfg;
  cfg.seed = 9;
  cfg.page_size = {480, 640};
  const PageLayout gt = generate(cfg);
  const PageLayout a = detect_multi_orientation(maps_by_turn(gt), render_orientation_gt(gt), {}, "p");
  CHECK(a.line_count() == gt.line_count());
  for (int turns : {1, 3}) {
    const PageLayout turned = rotate90(gt, turns);
    const PageLayout b = detect_multi_orientation(maps_by_turn(turned), render_orientation_gt(turned), {}, "p");
    CHECK(b.line_count() == a.line_count());
    const Prf lines = match_polygons(line_polygons(b), line_polygons(rotate90(a, turns)), 0.95);
    CHECK(lines.f == 1.0);
  }
}

TEST_CASE("upside-down text is discarded") {
  SynthConfig cfg;
  cfg.seed = 9;
  cfg.page_size = {480, 640};
  const PageLayout turned = rotate90(generate(cfg), 2);
  CHECK(detect_multi_orientation(maps_by_turn(turned), render_orientation_gt(turned), {}, "p").line_count() == 0);
}

TEST_CASE("inconsistent map shapes are rejected") {
  std::array<ChannelMaps, 3> maps{ChannelMaps::zeros({10, 20}), ChannelMaps::zeros({20, 10}),
                                  ChannelMaps::zeros({10, 20})};
  CHECK_THROWS_AS(detect_multi_orientation(maps, OrientationMaps::zeros({10, 20})), InputError);
}
