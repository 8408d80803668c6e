#include "pagelayout/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "json.hpp"

namespace pagelayout {

using Json = nlohmann::ordered_json;

std::size_t PageLayout::line_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.lines.size();
  return n;
}

namespace {

Json points_to_json(std::span<const Point> points) {
  Json arr = Json::array();
  for (const auto& p : points) arr.push_back(Json::array({p.x(), p.y()}));
  return arr;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InputError(path + ": " + what);
}

const Json& member(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing field");
  return *it;
}

double number(const Json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(path, "non-finite coordinate");
  return d;
}

std::string string(const Json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

std::vector<Point> points_from_json(const Json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of [x, y] pairs");
  std::vector<Point> pts;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != 2) fail(p, "expected [x, y]");
    pts.emplace_back(number(v[i][0], p + "[0]"), number(v[i][1], p + "[1]"));
  }
  return pts;
}

void check_polygon(const Polygon& polygon, const std::string& path) {
  if (polygon.ring.size() < 3) fail(path, "polygon needs at least 3 points");
  if (!(area(polygon) > 0.0)) fail(path, "polygon has zero area");
}

void clamp_points(std::vector<Point>& pts, ImageSize size) {
  for (auto& p : pts) {
    p.x() = std::clamp(p.x(), 0.0, static_cast<double>(size.width));
    p.y() = std::clamp(p.y(), 0.0, static_cast<double>(size.height));
  }
}

} // namespace

std::string save_layout(const PageLayout& layout) {
  Json doc;
  doc["page_id"] = layout.page_id;
  doc["height"] = layout.size.height;
  doc["width"] = layout.size.width;
  Json blocks = Json::array();
  for (const auto& block : layout.blocks) {
    Json b;
    b["id"] = block.id;
    b["polygon"] = points_to_json(block.polygon.ring);
    Json lines = Json::array();
    for (const auto& line : block.lines) {
      Json l;
      l["id"] = line.id;
      l["baseline"] = points_to_json(line.baseline.points);
      l["ascender"] = line.ascender;
      l["descender"] = line.descender;
      l["polygon"] = points_to_json(line.polygon.ring);
      lines.push_back(std::move(l));
    }
    b["lines"] = std::move(lines);
    blocks.push_back(std::move(b));
  }
  doc["blocks"] = std::move(blocks);
  return doc.dump(2) + "\n";
}

PageLayout load_layout(std::string_view json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text.begin(), json_text.end());
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("layout: malformed JSON: ") + e.what());
  }

  PageLayout layout;
  layout.page_id = string(member(doc, "page_id", "$"), "$.page_id");
  const Json& h = member(doc, "height", "$");
  const Json& w = member(doc, "width", "$");
  if (!h.is_number_integer() || h.get<long long>() <= 0) fail("$.height", "expected a positive integer");
  if (!w.is_number_integer() || w.get<long long>() <= 0) fail("$.width", "expected a positive integer");
  layout.size = {static_cast<int>(h.get<long long>()), static_cast<int>(w.get<long long>())};

  const Json& blocks = member(doc, "blocks", "$");
  if (!blocks.is_array()) fail("$.blocks", "expected an array");
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const std::string bp = "blocks[" + std::to_string(bi) + "]";
    TextBlock block;
    block.id = string(member(blocks[bi], "id", bp), bp + ".id");
    block.polygon.ring = points_from_json(member(blocks[bi], "polygon", bp), bp + ".polygon");
    const Json& lines = member(blocks[bi], "lines", bp);
    if (!lines.is_array()) fail(bp + ".lines", "expected an array");
    for (std::size_t li = 0; li < lines.size(); ++li) {
      const std::string lp = bp + ".lines[" + std::to_string(li) + "]";
      TextLine line;
      line.id = string(member(lines[li], "id", lp), lp + ".id");
      line.baseline.points = points_from_json(member(lines[li], "baseline", lp), lp + ".baseline");
      line.ascender = number(member(lines[li], "ascender", lp), lp + ".ascender");
      line.descender = number(member(lines[li], "descender", lp), lp + ".descender");
      line.polygon.ring = points_from_json(member(lines[li], "polygon", lp), lp + ".polygon");
      block.lines.push_back(std::move(line));
    }
    layout.blocks.push_back(std::move(block));
  }
  clamp_to_page(layout);
  validate_layout(layout);
  return layout;
}

void validate_layout(const PageLayout& layout) {
  if (layout.size.height <= 0 || layout.size.width <= 0) fail("$", "page size must be positive");
  std::set<std::string> ids;
  for (std::size_t bi = 0; bi < layout.blocks.size(); ++bi) {
    const auto& block = layout.blocks[bi];
    const std::string bp = "blocks[" + std::to_string(bi) + "]";
    check_polygon(block.polygon, bp + ".polygon");
    if (block.lines.empty()) fail(bp + ".lines", "block has no lines");
    for (std::size_t li = 0; li < block.lines.size(); ++li) {
      const auto& line = block.lines[li];
      const std::string lp = bp + ".lines[" + std::to_string(li) + "]";
      if (!ids.insert(line.id).second) fail(lp + ".id", "duplicate line id '" + line.id + "'");
      const auto& pts = line.baseline.points;
      if (pts.size() < 2) fail(lp + ".baseline", "baseline needs at least 2 points");
      for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        if (pts[i] == pts[i + 1]) fail(lp + ".baseline", "consecutive points coincide");
      if (!(line.ascender >= 1.0)) fail(lp + ".ascender", "must be >= 1");
      if (!(line.descender >= 0.0)) fail(lp + ".descender", "must be >= 0");
      check_polygon(line.polygon, lp + ".polygon");
      for (const auto& p : pts) {
        if (!contains(line.polygon.ring, p) && distance_to_ring(p, line.polygon.ring) > 0.5)
          fail(lp + ".baseline", "baseline leaves the line polygon");
      }
      const double line_area = area(line.polygon);
      if (intersection_area(block.polygon, line.polygon) < 0.95 * line_area)
        fail(lp + ".polygon", "line polygon not contained in its block polygon");
    }
  }
}

std::vector<std::string> reading_order(const TextBlock& block) {
  TextBlock copy = block;
  sort_reading_order(copy);
  std::vector<std::string> ids;
  for (const auto& line : copy.lines) ids.push_back(line.id);
  return ids;
}

void sort_reading_order(TextBlock& block) {
  struct Key {
    double y;
    double x;
  };
  std::vector<Key> keys;
  for (const auto& line : block.lines) {
    keys.push_back({polyline_midpoint(line.baseline.points).y(), x_extent(line.baseline.points).lo});
  }
  std::vector<std::size_t> idx(block.lines.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a].y != keys[b].y) return keys[a].y < keys[b].y;
    return keys[a].x < keys[b].x;
  });
  std::vector<TextLine> sorted;
  sorted.reserve(idx.size());
  for (const auto i : idx) sorted.push_back(std::move(block.lines[i]));
  block.lines = std::move(sorted);
}

void clamp_to_page(PageLayout& layout) {
  for (auto& block : layout.blocks) {
    clamp_points(block.polygon.ring, layout.size);
    for (auto& line : block.lines) {
      clamp_points(line.baseline.points, layout.size);
      clamp_points(line.polygon.ring, layout.size);
    }
  }
}

std::vector<const TextLine*> all_lines(const PageLayout& layout) {
  std::vector<const TextLine*> out;
  for (const auto& b : layout.blocks)
    for (const auto& l : b.lines) out.push_back(&l);
  return out;
}

PageLayout rotate90(const PageLayout& layout, int turns) {
  PageLayout out;
  out.page_id = layout.page_id;
  out.size = rotated_size(layout.size, turns);
  for (const auto& block : layout.blocks) {
    TextBlock b;
    b.id = block.id;
    b.polygon = rotate90(block.polygon, layout.size, turns);
    for (const auto& line : block.lines) {
      TextLine l = line;
      l.baseline = rotate90(line.baseline, layout.size, turns);
      l.polygon = rotate90(line.polygon, layout.size, turns);
      b.lines.push_back(std::move(l));
    }
    out.blocks.push_back(std::move(b));
  }
  return out;
}

} // namespace pagelayout
