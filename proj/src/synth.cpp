#include "pagelayout/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pagelayout/baseline_extract.hpp"
#include "pagelayout/extract.hpp"
#include "pagelayout/line_blocks.hpp"
#include "pagelayout/rng.hpp"

namespace pagelayout {

void SynthConfig::validate() const {
  auto check = [](auto r, auto min, const char* what) {
    if (!(r.lo <= r.hi) || r.lo < min) throw std::invalid_argument(std::string("synth: bad range ") + what);
  };
  check(columns, 1, "columns");
  check(blocks_per_column, 1, "blocks_per_column");
  check(lines_per_block, 1, "lines_per_block");
  check(ascender_range, 1.0, "ascender_range");
  check(descender_ratio, 0.0, "descender_ratio");
  if (page_size.height < 1 || page_size.width < 1) throw std::invalid_argument("synth: empty page");
  if (!(vertical_line_prob >= 0.0 && vertical_line_prob <= 1.0))
    throw std::invalid_argument("synth: vertical_line_prob outside [0, 1]");
  if (!(baseline_jitter >= 0.0) || !(margin >= 0.0)) throw std::invalid_argument("synth: negative jitter or margin");
}

namespace {

constexpr double kMinLineLength = 60.0;
constexpr double kMaxVerticalLength = 320.0;

// Quantize to a quarter pixel so heights survive the float channels exactly.
double quarter(double v) { return std::round(v * 4.0) / 4.0; }

enum class Direction { horizontal, down, up };

// One block before placement, in local coordinates: u runs along the lines,
// v across them (downwards in the text's own frame).
struct BlockPlan {
  Direction dir = Direction::horizontal;
  double asc = 0.0;
  double des = 0.0;
  std::vector<double> offsets; // baseline v per line
  std::vector<double> lengths; // line length per line
  double extent_u = 0.0;       // longest line

  double height() const { return asc + des; }
  double extent_v() const { return offsets.back() + des; }
  // Size along the column's vertical axis.
  double column_extent() const { return dir == Direction::horizontal ? extent_v() : extent_u; }
};

BlockPlan plan_block(SplitMix64& rng, const SynthConfig& cfg, double column_width, double column_height) {
  BlockPlan b;
  if (rng.bernoulli(cfg.vertical_line_prob)) b.dir = rng.bernoulli(0.5) ? Direction::down : Direction::up;
  b.asc = quarter(rng.uniform(cfg.ascender_range.lo, cfg.ascender_range.hi));
  b.des = quarter(b.asc * rng.uniform(cfg.descender_ratio.lo, cfg.descender_ratio.hi));
  const int n = rng.uniform_int(cfg.lines_per_block.lo, cfg.lines_per_block.hi);
  double v = std::ceil(b.asc);
  for (int i = 0; i < n; ++i) {
    if (i > 0) v += std::round(b.height() * rng.uniform(0.85, 0.95));
    b.offsets.push_back(v);
  }
  const double max_u = b.dir == Direction::horizontal
                           ? column_width
                           : std::min({kMaxVerticalLength, column_height, column_width * 1.5});
  b.extent_u = std::floor(b.dir == Direction::horizontal ? max_u : rng.uniform(0.5, 1.0) * max_u);
  for (int i = 0; i < n; ++i) b.lengths.push_back(std::floor(b.extent_u * (1.0 - rng.uniform(0.0, 0.2))));
  b.extent_u = *std::max_element(b.lengths.begin(), b.lengths.end());
  return b;
}

void drop_last_line(BlockPlan& b) {
  b.offsets.pop_back();
  b.lengths.pop_back();
  b.extent_u = *std::max_element(b.lengths.begin(), b.lengths.end());
}

Baseline local_baseline(SplitMix64& rng, double v, double length, double jitter) {
  Baseline line;
  if (jitter <= 0.0) {
    line.points = {{0.0, v}, {length, v}};
    return line;
  }
  const int segments = std::clamp(static_cast<int>(length / 50.0), 1, 9);
  for (int i = 0; i <= segments; ++i) {
    const double u = length * i / segments;
    const double dv = (i == 0 || i == segments) ? 0.0 : std::round(rng.uniform(-jitter, jitter) * 4.0) / 4.0;
    line.points.emplace_back(u, v + dv);
  }
  return line;
}

} // namespace

PageLayout generate(const SynthConfig& cfg) {
  cfg.validate();
  SplitMix64 rng(cfg.seed);
  const double width = cfg.page_size.width;
  const double height = cfg.page_size.height;
  const double max_height = cfg.ascender_range.hi * (1.0 + cfg.descender_ratio.hi);
  const double column_gap = std::ceil(2.0 * max_height);

  const int ncols = rng.uniform_int(cfg.columns.lo, cfg.columns.hi);
  const double usable_w = width - 2.0 * cfg.margin - (ncols - 1) * column_gap;
  const double column_width = std::floor(usable_w / ncols);
  const double usable_h = height - 2.0 * cfg.margin;
  if (column_width < kMinLineLength || usable_h < max_height)
    throw InputError("synth: infeasible config, page too small for " + std::to_string(ncols) + " columns");

  std::vector<TextBlock> blocks;
  for (int col = 0; col < ncols; ++col) {
    const double x0 = cfg.margin + col * (column_width + column_gap);
    const int nblocks = rng.uniform_int(cfg.blocks_per_column.lo, cfg.blocks_per_column.hi);
    std::vector<BlockPlan> plans;
    // Vertical blocks get an even share of the column height.
    for (int k = 0; k < nblocks; ++k) plans.push_back(plan_block(rng, cfg, column_width, usable_h / nblocks));

    // Gap above each block after the first: at least the larger text height of the two blocks.
    auto min_gap = [&](std::size_t k) { return std::ceil(std::max(plans[k - 1].height(), plans[k].height())); };
    auto total = [&] {
      double t = 0.0;
      for (std::size_t k = 0; k < plans.size(); ++k) t += plans[k].column_extent() + (k ? min_gap(k) : 0.0);
      return t;
    };
    // Footprint across the column; vertical blocks must also fit its width.
    auto across = [](const BlockPlan& p) { return p.dir == Direction::horizontal ? 0.0 : p.extent_v(); };
    for (;;) {
      bool fits = total() <= usable_h;
      for (const auto& p : plans) fits = fits && across(p) <= column_width;
      if (fits) break;
      BlockPlan* worst = nullptr;
      for (auto& p : plans) {
        if (static_cast<int>(p.offsets.size()) <= cfg.lines_per_block.lo) continue;
        if (!worst || std::max(p.extent_v(), across(p)) > std::max(worst->extent_v(), across(*worst))) worst = &p;
      }
      if (!worst) throw InputError("synth: infeasible config, blocks do not fit the page");
      drop_last_line(*worst);
    }

    const double slack = usable_h - total();
    double y = cfg.margin + std::floor(rng.uniform(0.0, slack / (plans.size() + 1)));
    for (std::size_t k = 0; k < plans.size(); ++k) {
      const auto& p = plans[k];
      if (k) y += min_gap(k) + std::floor(rng.uniform(0.0, slack / (plans.size() + 1)));
      TextBlock block;
      for (std::size_t i = 0; i < p.offsets.size(); ++i) {
        const Baseline local = local_baseline(rng, p.offsets[i], p.lengths[i], cfg.baseline_jitter);
        TextLine line;
        line.ascender = p.asc;
        line.descender = p.des;
        for (const auto& q : local.points) {
          const double u = q.x();
          const double v = q.y();
          switch (p.dir) {
          case Direction::horizontal: line.baseline.points.emplace_back(x0 + u, y + v); break;
          case Direction::down: line.baseline.points.emplace_back(x0 + std::round(p.extent_v()) - v, y + u); break;
          case Direction::up: line.baseline.points.emplace_back(x0 + v, y + p.extent_u - u); break;
          }
        }
        line.polygon = offset_polygon(line.baseline, line.ascender, line.descender);
        block.lines.push_back(std::move(line));
      }
      blocks.push_back(std::move(block));
      y += p.column_extent();
    }
  }

  PageLayout layout = finalize_layout(std::move(blocks), cfg.page_size, "synth-" + std::to_string(cfg.seed));
  validate_layout(layout);
  return layout;
}

ChannelMaps corrupt(const ChannelMaps& maps, double noise_sigma, int blur_size, double dropout_prob,
                    std::uint64_t seed) {
  if (blur_size < 1 || blur_size % 2 == 0) throw std::invalid_argument("corrupt: blur size must be positive and odd");
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("corrupt: negative noise sigma");
  if (!(dropout_prob >= 0.0 && dropout_prob <= 1.0)) throw std::invalid_argument("corrupt: dropout outside [0, 1]");
  SplitMix64 rng(seed);
  ChannelMaps out = maps;

  if (dropout_prob > 0.0) {
    // Runs of 2..5 columns (mean 3.5) started at rate q, so that the expected
    // dropped fraction of foreground columns is dropout_prob: with kept
    // stretches of mean (1 - q) / q, 3.5 / (3.5 + (1 - q) / q) = p.
    constexpr double mean_run = 3.5;
    const double q = dropout_prob / (mean_run * (1.0 - dropout_prob) + dropout_prob);
    const Eigen::Index rows = maps.base.rows();
    const Eigen::Index cols = maps.base.cols();
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index r = 0; r < rows;) {
        if (maps.base(r, c) <= 0.0f) {
          ++r;
          continue;
        }
        Eigen::Index end = r;
        while (end < rows && maps.base(end, c) > 0.0f) ++end;
        // Segments already inside an earlier run draw nothing.
        const bool live = (out.base.col(c).segment(r, end - r) > 0.0f).any();
        if (live && rng.bernoulli(q)) {
          const Eigen::Index run = rng.uniform_int(2, 5);
          out.base.block(r, c, end - r, std::min(run, cols - c)).setZero();
        }
        r = end;
      }
    }
  }

  if (blur_size > 1) {
    out.base = smooth(out.base, blur_size);
    out.end = smooth(out.end, blur_size);
    out.asc = smooth(out.asc, blur_size);
    out.des = smooth(out.des, blur_size);
    out.block = smooth(out.block, blur_size);
  }

  if (noise_sigma > 0.0) {
    auto add_noise = [&](PlaneF& p, float hi) {
      for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double v = p.data()[i] + noise_sigma * rng.normal();
        p.data()[i] = static_cast<float>(std::clamp(v, 0.0, static_cast<double>(hi)));
      }
    };
    constexpr float unbounded = std::numeric_limits<float>::max();
    add_noise(out.base, 1.0f);
    add_noise(out.end, 1.0f);
    add_noise(out.asc, unbounded);
    add_noise(out.des, unbounded);
    add_noise(out.block, 1.0f);
  }
  return out;
}

} // namespace pagelayout
