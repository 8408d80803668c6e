#include "pagelayout/eval.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "json.hpp"

namespace pagelayout {

Prf make_prf(double precision, double recall) {
  const double sum = precision + recall;
  return {precision, recall, sum > 0.0 ? 2.0 * precision * recall / sum : 0.0};
}

std::vector<Point> coverage_samples(const Baseline& baseline) {
  const double length = baseline.length();
  const int n = std::max(1, static_cast<int>(std::ceil(length)));
  std::vector<Point> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) out.push_back(point_at_arc_length(baseline.points, (k + 0.5) * length / n));
  return out;
}

namespace {

// Fraction of the samples of `from` lying within tolerance of any line in `to`.
double coverage(std::span<const Baseline> from, std::span<const Baseline> to, double tolerance) {
  std::vector<Box> boxes;
  for (const auto& line : to) {
    Box b = bounding_box(line.points);
    b.min.array() -= tolerance;
    b.max.array() += tolerance;
    boxes.push_back(b);
  }
  std::size_t total = 0;
  std::size_t covered = 0;
  for (const auto& line : from) {
    for (const Point& p : coverage_samples(line)) {
      ++total;
      for (std::size_t j = 0; j < to.size(); ++j) {
        const Box& b = boxes[j];
        if (p.x() < b.min.x() || p.x() > b.max.x() || p.y() < b.min.y() || p.y() > b.max.y()) continue;
        if (distance_to_polyline(p, to[j].points) <= tolerance) {
          ++covered;
          break;
        }
      }
    }
  }
  return total ? static_cast<double>(covered) / total : 1.0;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

Prf match_baselines(std::span<const Baseline> pred, std::span<const Baseline> gt, double tolerance) {
  return make_prf(coverage(pred, gt, tolerance), coverage(gt, pred, tolerance));
}

Prf match_polygons(std::span<const NamedPolygon> pred, std::span<const NamedPolygon> gt, double iou_threshold) {
  struct Pair {
    double iou;
    std::size_t p;
    std::size_t g;
  };
  std::vector<Pair> pairs;
  std::vector<Box> gt_boxes;
  for (const auto& g : gt) gt_boxes.push_back(bounding_box(g.polygon.ring));
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const Box pb = bounding_box(pred[i].polygon.ring);
    for (std::size_t j = 0; j < gt.size(); ++j) {
      if (!pb.intersects(gt_boxes[j])) continue;
      const double iou = polygon_iou(pred[i].polygon, gt[j].polygon);
      if (iou > iou_threshold) pairs.push_back({iou, i, j});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    return std::tie(pred[a.p].id, gt[a.g].id) < std::tie(pred[b.p].id, gt[b.g].id);
  });
  std::vector<bool> pred_used(pred.size()), gt_used(gt.size());
  std::size_t tp = 0;
  for (const auto& pair : pairs) {
    if (pred_used[pair.p] || gt_used[pair.g]) continue;
    pred_used[pair.p] = gt_used[pair.g] = true;
    ++tp;
  }
  const double precision = pred.empty() ? 1.0 : static_cast<double>(tp) / pred.size();
  const double recall = gt.empty() ? 1.0 : static_cast<double>(tp) / gt.size();
  return make_prf(precision, recall);
}

PageScores evaluate(const PageLayout& pred, const PageLayout& gt, const EvalParams& params) {
  if (pred.size.height != gt.size.height || pred.size.width != gt.size.width)
    throw InputError("evaluate: page size mismatch for page '" + gt.page_id + "'");
  std::vector<Baseline> pred_baselines, gt_baselines;
  std::vector<NamedPolygon> pred_lines, gt_lines, pred_blocks, gt_blocks;
  std::vector<double> heights;
  for (const auto& b : pred.blocks) {
    pred_blocks.push_back({b.id, b.polygon});
    for (const auto& l : b.lines) {
      pred_baselines.push_back(l.baseline);
      pred_lines.push_back({l.id, l.polygon});
    }
  }
  for (const auto& b : gt.blocks) {
    gt_blocks.push_back({b.id, b.polygon});
    for (const auto& l : b.lines) {
      gt_baselines.push_back(l.baseline);
      gt_lines.push_back({l.id, l.polygon});
      heights.push_back(l.height());
    }
  }
  PageScores s;
  s.page_id = gt.page_id;
  s.baseline = match_baselines(pred_baselines, gt_baselines, params.tolerance_factor * median(std::move(heights)));
  s.line = match_polygons(pred_lines, gt_lines, params.iou_threshold);
  s.block = match_polygons(pred_blocks, gt_blocks, params.iou_threshold);
  return s;
}

EvalReport make_report(std::vector<PageScores> pages) {
  EvalReport report;
  report.per_page = std::move(pages);
  report.aggregate.page_id = "aggregate";
  const auto n = static_cast<double>(report.per_page.size());
  if (n == 0) return report;
  Prf PageScores::*fields[] = {&PageScores::baseline, &PageScores::line, &PageScores::block};
  for (auto field : fields) {
    Prf sum{0.0, 0.0, 0.0};
    for (const auto& page : report.per_page) {
      sum.precision += (page.*field).precision;
      sum.recall += (page.*field).recall;
      sum.f += (page.*field).f;
    }
    report.aggregate.*field = {sum.precision / n, sum.recall / n, sum.f / n};
  }
  return report;
}

namespace {

nlohmann::ordered_json to_json(const Prf& s) {
  nlohmann::ordered_json j;
  j["precision"] = s.precision;
  j["recall"] = s.recall;
  j["f"] = s.f;
  return j;
}

nlohmann::ordered_json to_json(const PageScores& s) {
  nlohmann::ordered_json j;
  j["page_id"] = s.page_id;
  j["baseline"] = to_json(s.baseline);
  j["line"] = to_json(s.line);
  j["block"] = to_json(s.block);
  return j;
}

} // namespace

std::string report_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["per_page"] = nlohmann::ordered_json::array();
  for (const auto& page : report.per_page) j["per_page"].push_back(to_json(page));
  auto agg = to_json(report.aggregate);
  agg.erase("page_id");
  j["aggregate"] = agg;
  return j.dump(2) + "\n";
}

} // namespace pagelayout
