#include <algorithm>
#include <numbers>
#include <set>

#include "doctest.h"
#include "oracles.hpp"

#include "pagelayout/gt_render.hpp"
#include "pagelayout/line_blocks.hpp"
#include "pagelayout/rng.hpp"

using namespace pagelayout;

namespace {

TextLine make_line(std::string id, std::vector<Point> baseline, double asc = 10, double des = 3) {
  TextLine line;
  line.id = std::move(id);
  line.baseline.points = std::move(baseline);
  line.ascender = asc;
  line.descender = des;
  line.polygon = offset_polygon(line.baseline, asc, des);
  return line;
}

// Renders `groups` as one block each.
ChannelMaps render_blocks(ImageSize size, const std::vector<std::vector<TextLine>>& groups) {
  PageLayout page;
  page.size = size;
  for (const auto& g : groups) {
    TextBlock block;
    block.lines = g;
    block.polygon = block_polygon(g);
    page.blocks.push_back(block);
  }
  return render_gt(page);
}

std::vector<std::set<std::string>> partition(const std::vector<TextBlock>& blocks) {
  std::vector<std::set<std::string>> out;
  for (const auto& b : blocks) {
    std::set<std::string> ids;
    for (const auto& l : b.lines) ids.insert(l.id);
    out.push_back(ids);
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

TEST_CASE("nearest-rank percentile") {
  CHECK(nearest_rank_percentile({10, 10, 10, 20}, 75) == 10.0);
  CHECK(nearest_rank_percentile({20, 10, 10, 10}, 75) == 10.0);
  CHECK(nearest_rank_percentile({1, 2, 3, 4, 5}, 75) == 4.0);
  CHECK(nearest_rank_percentile({7}, 0) == 7.0);
  CHECK_THROWS_AS(nearest_rank_percentile({}, 50), std::invalid_argument);
  SplitMix64 rng(61);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v(rng.uniform_int(1, 30));
    for (auto& x : v) x = rng.uniform_int(0, 20);
    const int p = rng.uniform_int(0, 100);
    CHECK(nearest_rank_percentile(v, p) == oracle::percentile(v, p));
  }
}

TEST_CASE("line_polygon of a horizontal baseline is a rectangle") {
  ChannelMaps maps = ChannelMaps::zeros({60, 80});
  maps.asc.setConstant(12.0f);
  maps.des.setConstant(4.0f);
  Baseline b;
  b.points = {{10, 30}, {60, 30}};
  const TextLine line = line_polygon(b, maps);
  CHECK(line.ascender == 12.0);
  CHECK(line.descender == 4.0);
  CHECK(area(line.polygon) == doctest::Approx(50.0 * 16.0));
  const Box box = bounding_box(line.polygon.ring);
  CHECK(box.min.y() == doctest::Approx(18.0));
  CHECK(box.max.y() == doctest::Approx(34.0));
}

TEST_CASE("line_polygon uses the 75th percentile of sampled heights") {
  ChannelMaps maps = ChannelMaps::zeros({40, 40});
  maps.asc.setConstant(10.0f);
  maps.des.setConstant(2.0f);
  maps.asc.block(0, 30, 40, 10).setConstant(20.0f);
  Baseline b;
  b.points = {{5, 20}, {34, 20}};
  // 25 of 30 baseline columns read 10, the rest 20.
  CHECK(line_polygon(b, maps).ascender == 10.0);
}

TEST_CASE("line_polygon rejects baselines outside the maps") {
  Baseline b;
  b.points = {{100, 100}, {120, 100}};
  CHECK_THROWS_WITH_AS(line_polygon(b, ChannelMaps::zeros({20, 20})), "baseline out of bounds", InputError);
}

TEST_CASE("offset polygon of a short zig-zag baseline keeps the baseline") {
  Baseline b;
  b.points = {{61, 209}, {62, 211}, {63, 211}, {64, 213}, {65, 213}};
  const Polygon poly = offset_polygon(b, 10.17, 3.28);
  CHECK(is_simple(poly.ring));
  CHECK(std::abs(signed_area(poly.ring)) > 0.0);
  for (const auto& p : b.points) CHECK((contains(poly.ring, p) || distance_to_ring(p, poly.ring) <= 1e-6));
}

TEST_CASE("offset polygon sides are perpendicular to a tilted segment") {
  const double a = 0.3;
  Baseline b;
  b.points = {{10, 10}, {10 + 40 * std::cos(a), 10 + 40 * std::sin(a)}};
  const Polygon p = offset_polygon(b, 9, 3);
  REQUIRE(p.ring.size() == 4);
  const Point dir = (b.points[1] - b.points[0]).normalized();
  CHECK(std::abs((p.ring[2] - p.ring[1]).normalized().dot(dir)) < 1e-6);
  CHECK(std::abs((p.ring[0] - p.ring[3]).normalized().dot(dir)) < 1e-6);
  CHECK(area(p) == doctest::Approx(40.0 * 12.0));
}

TEST_CASE("adjacency penalties") {
  const TextLine upper = make_line("u", {{10, 20}, {50, 20}}, 8, 3);
  const TextLine lower = make_line("l", {{10, 34}, {50, 34}}, 8, 3);
  ChannelMaps maps = ChannelMaps::zeros({60, 60});
  Penalties p = adjacency_penalty(upper, lower, maps);
  CHECK(p.upper == 0.0);
  CHECK(p.lower == 0.0);

  maps.block.setOnes();
  p = adjacency_penalty(upper, lower, maps);
  CHECK(p.upper == doctest::Approx(3.0));
  CHECK(p.lower == doctest::Approx(3.0));

  const TextLine far = make_line("f", {{55, 34}, {58, 34}}, 8, 3);
  CHECK_THROWS_WITH_AS(adjacency_penalty(upper, far, maps), "not neighbours", std::invalid_argument);
}

TEST_CASE("a rendered boundary between two blocks raises both penalties") {
  const TextLine upper = make_line("u", {{10, 20}, {70, 20}}, 8, 3);
  const TextLine lower = make_line("l", {{10, 38}, {70, 38}}, 8, 3);
  const ChannelMaps maps = render_blocks({60, 80}, {{upper}, {lower}});
  const Penalties p = adjacency_penalty(upper, lower, maps);
  CHECK(p.upper > 0.3);
  CHECK(p.lower > 0.3);
  CHECK_FALSE(same_block(upper, lower, maps, {}));
}

TEST_CASE("cluster_blocks") {
  SUBCASE("no lines") { CHECK(cluster_blocks({}, ChannelMaps::zeros({10, 10})).empty()); }
  SUBCASE("two stacked lines without boundary") {
    const auto blocks = cluster_blocks(
        {make_line("a", {{10, 20}, {60, 20}}), make_line("b", {{10, 31}, {60, 31}})}, ChannelMaps::zeros({60, 80}));
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0].lines.size() == 2);
    CHECK(blocks[0].lines[0].id == "a");
  }
  SUBCASE("three-line chain with a boundary before the third") {
    const TextLine l1 = make_line("1", {{10, 20}, {70, 20}}, 8, 3);
    const TextLine l2 = make_line("2", {{10, 30}, {70, 30}}, 8, 3);
    const TextLine l3 = make_line("3", {{10, 40}, {70, 40}}, 8, 3);
    const ChannelMaps maps = render_blocks({70, 80}, {{l1, l2}, {l3}});
    CHECK(same_block(l1, l2, maps, {}));
    CHECK(vertical_neighbours(l2, l3));
    CHECK_FALSE(same_block(l2, l3, maps, {}));
    const auto blocks = cluster_blocks({l3, l1, l2}, maps);
    CHECK(partition(blocks) == std::vector<std::set<std::string>>{{"1", "2"}, {"3"}});
  }
}

TEST_CASE("cluster_labels is the closure of same_block") {
  SplitMix64 rng(62);
  for (int t = 0; t < 30; ++t) {
    std::vector<TextLine> lines;
    const int n = rng.uniform_int(1, 8);
    for (int i = 0; i < n; ++i) {
      const double x0 = rng.uniform_int(0, 40);
      const double y = rng.uniform_int(12, 70);
      lines.push_back(make_line("l" + std::to_string(i), {{x0, y}, {x0 + rng.uniform_int(10, 50), y}}, 8, 3));
    }
    ChannelMaps maps = ChannelMaps::zeros({80, 100});
    for (Eigen::Index i = 0; i < maps.block.size(); ++i) maps.block(i) = rng.bernoulli(0.05) ? 1.0f : 0.0f;
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) adj[i][j] = i != j && same_block(lines[i], lines[j], maps, {});
    CHECK(cluster_labels(lines, maps, {}) == oracle::closure_labels(adj));

    // Every line lands in exactly one block.
    const auto blocks = cluster_blocks(lines, maps);
    std::multiset<std::string> seen;
    for (const auto& b : blocks)
      for (const auto& l : b.lines) seen.insert(l.id);
    CHECK(seen.size() == lines.size());
    for (const auto& l : lines) CHECK(seen.count(l.id) == 1);
  }
}

TEST_CASE("merge_block_lines") {
  const TextLine whole = make_line("w", {{10, 30}, {90, 30}}, 10, 3);
  const ChannelMaps maps = render_blocks({60, 100}, {{whole}});

  SUBCASE("single line is unchanged") {
    TextBlock block;
    block.lines = {whole};
    const TextBlock merged = merge_block_lines(block, maps);
    REQUIRE(merged.lines.size() == 1);
    CHECK(merged.lines[0].baseline.points == whole.baseline.points);
  }
  SUBCASE("collinear fragments with a half-height gap become one line") {
    TextBlock block;
    block.lines = {make_line("a", {{10, 30}, {45, 30}}, 10, 3), make_line("b", {{51.5, 30}, {90, 30}}, 10, 3)};
    const TextBlock merged = merge_block_lines(block, maps);
    REQUIRE(merged.lines.size() == 1);
    CHECK(merged.lines[0].baseline.points.front().x() == doctest::Approx(10.0));
    CHECK(merged.lines[0].baseline.points.back().x() == doctest::Approx(90.0));
    // A fixpoint: merging again changes nothing.
    const TextBlock again = merge_block_lines(merged, maps);
    REQUIRE(again.lines.size() == 1);
    CHECK(again.lines[0].baseline.points == merged.lines[0].baseline.points);
  }
  SUBCASE("stacked lines never merge") {
    TextBlock block;
    block.lines = {make_line("a", {{10, 30}, {90, 30}}, 10, 3), make_line("b", {{10, 42}, {90, 42}}, 10, 3)};
    CHECK(merge_block_lines(block, maps).lines.size() == 2);
  }
}

TEST_CASE("block_polygon covers its lines") {
  const std::vector<TextLine> lines{make_line("a", {{10, 30}, {90, 30}}, 10, 3),
                                    make_line("b", {{10, 42}, {60, 42}}, 10, 3)};
  const Polygon p = block_polygon(lines);
  CHECK(is_simple(p.ring));
  for (const auto& l : lines) CHECK(intersection_area(p, l.polygon) >= 0.95 * area(l.polygon));
  CHECK(block_alpha(lines) == doctest::Approx(1.0 / 26.0));
}
