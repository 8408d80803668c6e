#pragma once

#include <span>
#include <string>
#include <vector>

#include "pagelayout/layout.hpp"

namespace pagelayout {

struct Prf {
  double precision = 1.0;
  double recall = 1.0;
  double f = 1.0;
};

/// F = 2PR / (P + R), 0 when P + R = 0.
Prf make_prf(double precision, double recall);

/// Arc-length sample points of a baseline: n = max(1, ceil(length)) points
/// at the centers of n equal pieces, so each stands for at most one pixel of
/// arc.
std::vector<Point> coverage_samples(const Baseline& baseline);

/// Coverage metric. A predicted sample is covered when it lies within
/// `tolerance` of some ground-truth baseline, and vice versa. An empty
/// prediction has precision 1, an empty ground truth recall 1.
Prf match_baselines(std::span<const Baseline> pred, std::span<const Baseline> gt, double tolerance);

struct NamedPolygon {
  std::string id;
  Polygon polygon;
};

/// Greedy one-to-one matching by descending IoU (ties by pred id, then gt
/// id); pairs with IoU > iou_threshold are true positives.
Prf match_polygons(std::span<const NamedPolygon> pred, std::span<const NamedPolygon> gt, double iou_threshold = 0.7);

struct EvalParams {
  double tolerance_factor = 0.25; // times the median gt text height
  double iou_threshold = 0.7;
};

struct PageScores {
  std::string page_id;
  Prf baseline;
  Prf line;
  Prf block;
};

/// Scores one page. Throws InputError when the declared page sizes differ.
PageScores evaluate(const PageLayout& pred, const PageLayout& gt, const EvalParams& params = {});

struct EvalReport {
  std::vector<PageScores> per_page;
  PageScores aggregate; // arithmetic means of the per-page values
};

EvalReport make_report(std::vector<PageScores> pages);

std::string report_json(const EvalReport& report);

} // namespace pagelayout
