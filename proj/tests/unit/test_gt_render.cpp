#include <cmath>
#include <numbers>

#include "doctest.h"

#include "pagelayout/gt_render.hpp"
#include "pagelayout/line_blocks.hpp"

using namespace pagelayout;

namespace {

double segment_distance(double px, double py, double ax, double ay, double bx, double by) {
  const double dx = bx - ax, dy = by - ay;
  double t = ((px - ax) * dx + (py - ay) * dy) / (dx * dx + dy * dy);
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (ax + t * dx), py - (ay + t * dy));
}

TextLine make_line(std::string id, std::vector<Point> baseline, double asc, double des) {
  TextLine line;
  line.id = std::move(id);
  line.baseline.points = std::move(baseline);
  line.ascender = asc;
  line.descender = des;
  line.polygon = offset_polygon(line.baseline, asc, des);
  return line;
}

PageLayout one_block(ImageSize size, std::vector<TextLine> lines) {
  PageLayout page;
  page.page_id = "t";
  page.size = size;
  TextBlock block;
  block.id = "b";
  block.lines = std::move(lines);
  block.polygon = block_polygon(block.lines);
  page.blocks.push_back(block);
  return page;
}

} // namespace

TEST_CASE("empty layout renders all-zero maps") {
  PageLayout page;
  page.size = {16, 24};
  const ChannelMaps m = render_gt(page);
  CHECK(m.size() == ImageSize{16, 24});
  for (const PlaneF* p : {&m.base, &m.end, &m.asc, &m.des, &m.block}) CHECK((*p == 0.0f).all());
}

TEST_CASE("single horizontal baseline matches direct rasterization") {
  const PageLayout page = one_block({32, 32}, {make_line("l", {{5, 10}, {20, 10}}, 12, 4)});
  const ChannelMaps m = render_gt(page);
  for (int r = 0; r < 32; ++r)
    for (int c = 0; c < 32; ++c) {
      const bool on = segment_distance(c, r, 5, 10, 20, 10) <= 1.5;
      CHECK(m.base(r, c) == (on ? 1.0f : 0.0f));
      CHECK(m.asc(r, c) == (on ? 12.0f : 0.0f));
      CHECK(m.des(r, c) == (on ? 4.0f : 0.0f));
      const bool end = std::hypot(c - 5, r - 10) <= 3.0 || std::hypot(c - 20, r - 10) <= 3.0;
      CHECK(m.end(r, c) == (end ? 1.0f : 0.0f));
    }
}

TEST_CASE("two stacked lines share one block outline") {
  const PageLayout page =
      one_block({60, 60}, {make_line("a", {{10, 20}, {50, 20}}, 8, 3), make_line("b", {{10, 32}, {50, 32}}, 8, 3)});
  const ChannelMaps m = render_gt(page);
  // Between the lines, inside the block, there is no boundary.
  for (int c = 15; c <= 45; ++c)
    for (int r = 22; r <= 28; ++r) CHECK(m.block(r, c) == 0.0f);
  // Boundary above the first line and below the second.
  CHECK(m.block(12, 30) == 1.0f);
  CHECK(m.block(35, 30) == 1.0f);
}

TEST_CASE("overlapping baselines: later line wins with a diagnostic") {
  const PageLayout page =
      one_block({30, 40}, {make_line("a", {{5, 15}, {30, 15}}, 10, 2), make_line("b", {{5, 16}, {30, 16}}, 6, 1)});
  Diagnostics diag;
  const ChannelMaps m = render_gt(page, {}, &diag);
  CHECK_FALSE(diag.empty());
  CHECK(m.asc(16, 10) == 6.0f);
}

TEST_CASE("orientation maps") {
  SUBCASE("horizontal") {
    const PageLayout page = one_block({40, 40}, {make_line("l", {{5, 20}, {35, 20}}, 8, 3)});
    const OrientationMaps o = render_orientation_gt(page);
    CHECK(o.ox(16, 20) == 1.0f);
    CHECK(o.oy(16, 20) == 0.0f);
    CHECK(o.ox(2, 2) == 0.0f);
  }
  SUBCASE("vertical top to bottom") {
    const PageLayout page = one_block({40, 40}, {make_line("l", {{20, 5}, {20, 35}}, 8, 3)});
    const OrientationMaps o = render_orientation_gt(page);
    CHECK(o.ox(20, 22) == doctest::Approx(0.0));
    CHECK(o.oy(20, 22) == 1.0f);
  }
  SUBCASE("tilted by 30 degrees") {
    const double a = std::numbers::pi / 6.0;
    const Point p0(10, 10);
    const Point p1 = p0 + 40.0 * Point(std::cos(a), std::sin(a));
    const PageLayout page = one_block({60, 60}, {make_line("l", {p0, p1}, 8, 3)});
    const OrientationMaps o = render_orientation_gt(page);
    int interior = 0;
    for (int r = 0; r < 60; ++r)
      for (int c = 0; c < 60; ++c) {
        if (o.ox(r, c) == 0.0f && o.oy(r, c) == 0.0f) continue;
        ++interior;
        CHECK(o.ox(r, c) == doctest::Approx(std::cos(a)).epsilon(1e-3));
        CHECK(o.oy(r, c) == doctest::Approx(std::sin(a)).epsilon(1e-3));
      }
    CHECK(interior > 300);
  }
}

TEST_CASE("orientation vectors are unit length on a bent baseline") {
  const PageLayout page = one_block({60, 80}, {make_line("l", {{5, 30}, {30, 25}, {60, 35}, {75, 30}}, 9, 3)});
  const OrientationMaps o = render_orientation_gt(page);
  for (Eigen::Index i = 0; i < o.ox.size(); ++i) {
    const double n = std::hypot(o.ox(i), o.oy(i));
    CHECK((n == 0.0 || std::abs(n - 1.0) < 1e-6));
  }
}

TEST_CASE("render params are validated") {
  PageLayout page;
  page.size = {4, 4};
  RenderParams bad;
  bad.baseline_thickness = 0.5;
  CHECK_THROWS_AS(render_gt(page, bad), std::invalid_argument);
}
