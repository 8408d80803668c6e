#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "pagelayout/adaptive_scale.hpp"
#include "pagelayout/eval.hpp"
#include "pagelayout/extract.hpp"
#include "pagelayout/gt_render.hpp"
#include "pagelayout/losses.hpp"
#include "pagelayout/multi_orient.hpp"
#include "pagelayout/synth.hpp"

namespace fs = std::filesystem;
using namespace pagelayout;
using ojson = nlohmann::ordered_json;

namespace {

Bytes read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string read_text(const fs::path& path) {
  const Bytes b = read_bytes(path);
  return std::string(b.begin(), b.end());
}

void write_bytes(const fs::path& path, const void* data, std::size_t size) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw InputError("write failed for '" + path.string() + "'");
}

void write_bytes(const fs::path& path, const Bytes& bytes) { write_bytes(path, bytes.data(), bytes.size()); }
void write_text(const fs::path& path, const std::string& text) { write_bytes(path, text.data(), text.size()); }

// Writes to `path`, or to stdout when it is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text << std::flush;
  else
    write_text(path, text);
}

ChannelMaps read_detection(const fs::path& path) {
  auto maps = read_maps(read_bytes(path));
  if (!std::holds_alternative<ChannelMaps>(maps))
    throw InputError("'" + path.string() + "' holds orientation maps, expected detection maps");
  return std::get<ChannelMaps>(std::move(maps));
}

OrientationMaps read_orientation(const fs::path& path) {
  auto maps = read_maps(read_bytes(path));
  if (!std::holds_alternative<OrientationMaps>(maps))
    throw InputError("'" + path.string() + "' holds detection maps, expected orientation maps");
  return std::get<OrientationMaps>(std::move(maps));
}

PageLayout read_layout(const fs::path& path) {
  try {
    return load_layout(read_text(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::vector<fs::path> list_files(const fs::path& dir, const std::string& extension) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == extension) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

void print_diagnostics(const std::string& page, const Diagnostics& diag) {
  for (const auto& m : diag.messages) std::cerr << "warning: " << page << ": " << m << "\n";
}

// Runs `work(i)` for i in [0, n) on up to `jobs` threads. Results are
// produced into per-index slots by the callers, so scheduling never shows in
// the output. The first exception (lowest index) is rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& work) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        work(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, jobs));
  if (threads == 1 || n < 2) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(threads, n); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

ojson scale_json(const std::optional<ScaleEstimate>& s, double target) {
  ojson j;
  if (s) {
    j["median_ascender"] = s->median_ascender;
    j["scale_factor"] = s->scale_factor;
    j["target_ascender"] = s->target_ascender;
  } else {
    j["median_ascender"] = nullptr;
    j["scale_factor"] = 1.0;
    j["target_ascender"] = target;
    j["error"] = "no text detected";
  }
  return j;
}

ojson loss_json(const LossBreakdown& l) {
  ojson j;
  j["masked_mse_asc"] = l.masked_mse_asc;
  j["masked_mse_des"] = l.masked_mse_des;
  j["dice_base"] = l.dice_base;
  j["dice_end"] = l.dice_end;
  j["dice_block"] = l.dice_block;
  j["lambda"] = l.lambda;
  j["total"] = l.total;
  return j;
}

struct DetectOptions {
  std::string maps;
  std::string out;
  int jobs = 1;
  bool no_line_merge = false;
  bool report_scale = false;
  double raw_threshold = 0.3;
  double target_ascender = kTargetAscender;
  bool multi_orient = false;
  std::string maps_90;
  std::string maps_270;
  std::string orientation;
  MultiOrientParams params;
};

void add_pipeline_flags(CLI::App* cmd, PipelineParams& p) {
  auto& e = p.extract;
  auto& b = p.blocks;
  cmd->add_option("--smooth-size", e.smooth_size, "Box smoothing size (odd)")->capture_default_str();
  cmd->add_option("--nms-size", e.nms_size, "Vertical NMS window (odd)")->capture_default_str();
  cmd->add_option("--threshold", e.threshold, "Baseline threshold")->capture_default_str();
  cmd->add_option("--cc-width", e.cc_width, "Connectivity window width")->capture_default_str();
  cmd->add_option("--cc-height", e.cc_height, "Connectivity window height")->capture_default_str();
  cmd->add_option("--min-length", e.min_length, "Minimum baseline extent")->capture_default_str();
  cmd->add_option("--max-control-points", e.max_control_points, "Spline control points")->capture_default_str();
  cmd->add_option("--height-percentile", b.height_percentile, "Ascender/descender percentile")->capture_default_str();
  cmd->add_option("--penalty-thickness", b.penalty_area_thickness, "Penalty strip thickness")->capture_default_str();
  cmd->add_option("--penalty-threshold", b.penalty_threshold, "Block split threshold")->capture_default_str();
  cmd->add_option("--merge-y-tolerance", b.merge_y_tolerance, "Line merge |dy| / height")->capture_default_str();
  cmd->add_option("--merge-x-gap", b.merge_x_gap, "Line merge gap / height")->capture_default_str();
}

PageLayout detect_one(const DetectOptions& o, const ChannelMaps& maps, const fs::path& path, Diagnostics& diag) {
  const std::string page_id = path.stem().string();
  if (!o.multi_orient) return extract_layout(maps, o.params.pipeline, page_id, &diag);
  const std::array<ChannelMaps, 3> by_turn{maps, read_detection(o.maps_90), read_detection(o.maps_270)};
  return detect_multi_orientation(by_turn, read_orientation(o.orientation), o.params, page_id, &diag);
}

std::optional<ScaleEstimate> try_scale(const DetectOptions& o, const ChannelMaps& maps) {
  try {
    return estimate_scale(maps, o.raw_threshold, o.target_ascender);
  } catch (const InputError&) {
    return std::nullopt;
  }
}

int run_detect(DetectOptions o) {
  o.params.pipeline.merge_lines = !o.no_line_merge;
  o.params.pipeline.extract.validate();
  o.params.pipeline.blocks.validate();
  if (o.multi_orient && (o.maps_90.empty() || o.maps_270.empty() || o.orientation.empty()))
    throw InputError("--multi-orient needs --maps-90, --maps-270 and --orientation");

  if (!fs::is_directory(o.maps)) {
    const ChannelMaps maps = read_detection(o.maps);
    Diagnostics diag;
    const PageLayout layout = detect_one(o, maps, o.maps, diag);
    print_diagnostics(o.maps, diag);
    if (o.report_scale) {
      if (o.out.empty()) throw InputError("--report-scale prints the estimate on stdout; give --out for the layout");
      std::cout << scale_json(try_scale(o, maps), o.target_ascender).dump(2) << "\n";
    }
    emit(o.out, save_layout(layout));
    return 0;
  }

  if (o.multi_orient) throw InputError("--multi-orient takes single files, not directories");
  if (o.out.empty()) throw InputError("directory input needs --out <directory>");
  const auto files = list_files(o.maps, ".pncm");
  std::vector<std::string> layouts(files.size());
  std::vector<Diagnostics> diags(files.size());
  std::vector<std::optional<ScaleEstimate>> scales(files.size());
  parallel_for(files.size(), o.jobs, [&](std::size_t i) {
    const ChannelMaps maps = read_detection(files[i]);
    layouts[i] = save_layout(detect_one(o, maps, files[i], diags[i]));
    if (o.report_scale) scales[i] = try_scale(o, maps);
  });
  ojson scale_report = ojson::object();
  for (std::size_t i = 0; i < files.size(); ++i) {
    print_diagnostics(files[i].string(), diags[i]);
    write_text(fs::path(o.out) / (files[i].stem().string() + ".json"), layouts[i]);
    scale_report[files[i].stem().string()] = scale_json(scales[i], o.target_ascender);
  }
  if (o.report_scale) std::cout << scale_report.dump(2) << "\n";
  return 0;
}

struct RenderOptions {
  std::string layout;
  std::string out;
  std::string out_90;
  std::string out_270;
  std::string orientation;
  RenderParams params;
};

int run_render(const RenderOptions& o) {
  o.params.validate();
  const PageLayout layout = read_layout(o.layout);
  Diagnostics diag;
  const ChannelMaps maps = render_gt(layout, o.params, &diag);
  write_bytes(o.out, write_maps(maps));
  if (!o.out_90.empty()) write_bytes(o.out_90, write_maps(rotate_maps(maps, 1)));
  if (!o.out_270.empty()) write_bytes(o.out_270, write_maps(rotate_maps(maps, 3)));
  if (!o.orientation.empty()) write_bytes(o.orientation, write_maps(render_orientation_gt(layout, &diag)));
  print_diagnostics(o.layout, diag);
  return 0;
}

struct SynthOptions {
  SynthConfig config;
  std::string out;
  std::string maps;
  std::string orientation;
  double noise = 0.0;
  int blur = 1;
  double dropout = 0.0;
};

int run_synth(const SynthOptions& o) {
  const PageLayout layout = generate(o.config);
  emit(o.out, save_layout(layout));
  if (!o.maps.empty()) {
    ChannelMaps maps = render_gt(layout);
    if (o.noise > 0.0 || o.blur > 1 || o.dropout > 0.0) maps = corrupt(maps, o.noise, o.blur, o.dropout, o.config.seed);
    write_bytes(o.maps, write_maps(maps));
  }
  if (!o.orientation.empty()) write_bytes(o.orientation, write_maps(render_orientation_gt(layout)));
  return 0;
}

int run_loss(const std::string& pred, const std::string& gt, double lambda, const std::string& out) {
  Diagnostics diag;
  const LossBreakdown l = total_loss(read_detection(pred), read_detection(gt), lambda, &diag);
  print_diagnostics(pred, diag);
  emit(out, loss_json(l).dump(2) + "\n");
  return 0;
}

int run_eval(const std::string& pred, const std::string& gt, const std::string& report_path, EvalParams params,
             int jobs) {
  std::vector<std::pair<fs::path, fs::path>> pairs;
  if (fs::is_directory(gt)) {
    if (!fs::is_directory(pred)) throw InputError("--gt is a directory, so --pred must be one too");
    for (const auto& g : list_files(gt, ".json")) {
      const fs::path p = fs::path(pred) / g.filename();
      if (!fs::exists(p)) throw InputError("no prediction for '" + g.filename().string() + "'");
      pairs.emplace_back(p, g);
    }
  } else {
    pairs.emplace_back(pred, gt);
  }
  std::vector<PageScores> pages(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    pages[i] = evaluate(read_layout(pairs[i].first), read_layout(pairs[i].second), params);
  });
  emit(report_path, report_json(make_report(std::move(pages))));
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Page layout analysis from dense channel maps"};
  app.require_subcommand(1);

  RenderOptions render;
  auto* render_cmd = app.add_subcommand("render-gt", "Render ground-truth channel maps for a layout");
  render_cmd->add_option("--layout", render.layout, "Layout JSON")->required()->check(CLI::ExistingFile);
  render_cmd->add_option("--out", render.out, "Detection maps (PNCM)")->required();
  render_cmd->add_option("--out-90", render.out_90, "Maps rotated by one counterclockwise quarter turn");
  render_cmd->add_option("--out-270", render.out_270, "Maps rotated by three counterclockwise quarter turns");
  render_cmd->add_option("--orientation", render.orientation, "Orientation maps (PNCM)");
  render_cmd->add_option("--baseline-thickness", render.params.baseline_thickness)->capture_default_str();
  render_cmd->add_option("--endpoint-radius", render.params.endpoint_radius)->capture_default_str();
  render_cmd->add_option("--boundary-thickness", render.params.block_boundary_thickness)->capture_default_str();

  DetectOptions detect;
  auto* detect_cmd = app.add_subcommand("detect", "Extract a layout from channel maps");
  detect_cmd->add_option("--maps", detect.maps, "PNCM file or directory of them")->required()->check(CLI::ExistingPath);
  detect_cmd->add_option("--out", detect.out, "Layout JSON (file input) or directory (directory input)");
  detect_cmd->add_option("--jobs", detect.jobs, "Parallel page workers")->capture_default_str()->check(CLI::PositiveNumber);
  detect_cmd->add_flag("--no-line-merge", detect.no_line_merge, "Skip in-block line merging");
  detect_cmd->add_flag("--report-scale", detect.report_scale, "Print the processing scale estimate as JSON");
  detect_cmd->add_option("--raw-threshold", detect.raw_threshold, "Baseline mask for the scale estimate")
      ->capture_default_str();
  detect_cmd->add_option("--target-ascender", detect.target_ascender)->capture_default_str();
  detect_cmd->add_flag("--multi-orient", detect.multi_orient, "Combine passes at 0, 90 and 270 degrees");
  detect_cmd->add_option("--maps-90", detect.maps_90, "Maps of the page rotated by one quarter turn")
      ->check(CLI::ExistingFile);
  detect_cmd->add_option("--maps-270", detect.maps_270, "Maps of the page rotated by three quarter turns")
      ->check(CLI::ExistingFile);
  detect_cmd->add_option("--orientation", detect.orientation, "Orientation maps in the original frame")
      ->check(CLI::ExistingFile);
  detect_cmd->add_option("--max-angle", detect.params.max_angle_deviation, "Orientation tolerance, degrees")
      ->capture_default_str();
  detect_cmd->add_option("--duplicate-iou", detect.params.duplicate_iou)->capture_default_str();
  add_pipeline_flags(detect_cmd, detect.params.pipeline);

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a random layout and optionally its maps");
  auto& cfg = synth.config;
  synth_cmd->add_option("--seed", cfg.seed)->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Layout JSON (stdout if omitted)");
  synth_cmd->add_option("--maps", synth.maps, "Rendered detection maps (PNCM)");
  synth_cmd->add_option("--orientation", synth.orientation, "Rendered orientation maps (PNCM)");
  synth_cmd->add_option("--height", cfg.page_size.height)->capture_default_str();
  synth_cmd->add_option("--width", cfg.page_size.width)->capture_default_str();
  synth_cmd->add_option("--columns", cfg.columns.lo, "Fixed column count")->each([&](const std::string&) {
    cfg.columns.hi = cfg.columns.lo;
  });
  synth_cmd->add_option("--blocks-per-column", cfg.blocks_per_column.lo)->each([&](const std::string&) {
    cfg.blocks_per_column.hi = cfg.blocks_per_column.lo;
  });
  synth_cmd->add_option("--lines-per-block", cfg.lines_per_block.lo)->each([&](const std::string&) {
    cfg.lines_per_block.hi = cfg.lines_per_block.lo;
  });
  synth_cmd->add_option("--vertical-prob", cfg.vertical_line_prob)->capture_default_str();
  synth_cmd->add_option("--jitter", cfg.baseline_jitter)->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise, "Gaussian noise sigma on the maps")->capture_default_str();
  synth_cmd->add_option("--blur", synth.blur, "Box blur size on the maps")->capture_default_str();
  synth_cmd->add_option("--dropout", synth.dropout, "Dropped fraction of baseline columns")->capture_default_str();

  std::string loss_pred, loss_gt, loss_out;
  double lambda = 0.01;
  auto* loss_cmd = app.add_subcommand("loss", "Training loss between predicted and target maps");
  loss_cmd->add_option("pred", loss_pred)->required()->check(CLI::ExistingFile);
  loss_cmd->add_option("gt", loss_gt)->required()->check(CLI::ExistingFile);
  loss_cmd->add_option("--lambda", lambda)->capture_default_str();
  loss_cmd->add_option("--out", loss_out);

  std::string eval_pred, eval_gt, eval_report;
  EvalParams eval_params;
  int eval_jobs = 1;
  auto* eval_cmd = app.add_subcommand("eval", "Score predicted layouts against ground truth");
  eval_cmd->add_option("--pred", eval_pred, "Layout JSON or directory")->required()->check(CLI::ExistingPath);
  eval_cmd->add_option("--gt", eval_gt, "Layout JSON or directory")->required()->check(CLI::ExistingPath);
  eval_cmd->add_option("--report", eval_report, "Report JSON (stdout if omitted)");
  eval_cmd->add_option("--iou", eval_params.iou_threshold)->capture_default_str();
  eval_cmd->add_option("--tolerance-factor", eval_params.tolerance_factor)->capture_default_str();
  eval_cmd->add_option("--jobs", eval_jobs)->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  try {
    if (*render_cmd) return run_render(render);
    if (*detect_cmd) return run_detect(detect);
    if (*synth_cmd) return run_synth(synth);
    if (*loss_cmd) return run_loss(loss_pred, loss_gt, lambda, loss_out);
    if (*eval_cmd) return run_eval(eval_pred, eval_gt, eval_report, eval_params, eval_jobs);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
