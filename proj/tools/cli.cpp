#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "json_config.hpp"
#include "voxrep/baseline.hpp"
#include "voxrep/error.hpp"
#include "voxrep/manifest.hpp"
#include "voxrep/metrics.hpp"
#include "voxrep/predictions.hpp"
#include "voxrep/report.hpp"
#include "voxrep/scene_synth.hpp"
#include "voxrep/slice_codec.hpp"
#include "voxrep/vlm_client.hpp"
#include "voxrep/voxg_io.hpp"

namespace voxrep::cli {

namespace fs = std::filesystem;

namespace {

struct CodecFlags {
  std::string upscale_mode = "replication";
  int slice_size = 100;
  int padded_size = 112;
  int tile_columns = 4;
  int tile_rows = 4;

  EncodeOptions options() const {
    EncodeOptions o;
    o.upscale_mode = parse_upscale_mode(upscale_mode);
    o.slice_size = slice_size;
    o.padded_size = padded_size;
    o.tile_columns = tile_columns;
    o.tile_rows = tile_rows;
    return o;
  }

  void add_to(CLI::App* app) {
    app->add_option("--upscale-mode", upscale_mode, "Slice upscaling: replication or bilinear")
        ->check(CLI::IsMember({"replication", "bilinear"}))
        ->capture_default_str();
    app->add_option("--slice-size", slice_size, "Largest slice width/height accepted before padding")->capture_default_str();
    app->add_option("--padded-size", padded_size, "Slice size after centered padding")->capture_default_str();
    app->add_option("--tile-columns", tile_columns, "Tiles per image row")->capture_default_str();
    app->add_option("--tile-rows", tile_rows, "Tile rows per image")->capture_default_str();
  }
};

struct SynthFlags {
  std::size_t scenes = 10;
  std::uint64_t seed = 0;
  std::string out;
  std::string dims = "100x100x16";
  int objects_min = 1;
  int objects_max = 5;
  double scale_min = 10.0;
  double scale_max = 35.0;
  int min_voxels = 20;
  int clearance = 2;
  int max_attempts = 50;
  std::vector<std::string> categories;
  std::string modelnet;
  int jobs = 1;
  CodecFlags codec;
};

struct EncodeFlags {
  std::string input;
  std::string out;
  CodecFlags codec;
};

struct DecodeFlags {
  std::string input;
  std::string out;
  std::string dims = "100x100x16";
  CodecFlags codec;
};

struct ExtractFlags {
  std::string manifest;
  std::string grid;
  std::string out;
  std::string shape_model;
  int connectivity = 26;
  int jobs = 1;
};

struct FitFlags {
  std::string manifest;
  std::string out;
};

struct PredictFlags {
  std::string manifest;
  std::string endpoint;
  std::string model;
  std::string out;
  std::string prompt_file;
  double temperature = 0.0;
  int max_tokens = 2048;
  int jobs = 4;
  int max_attempts = 5;
  int retry_base_ms = 1000;
  int timeout_s = 120;
};

struct EvalFlags {
  std::string pred;
  std::string manifest;
  std::string out;
  std::string json_out;
  std::string step = "0";
};

struct ReportFlags {
  std::vector<std::string> runs;
  std::string out;
  std::string charts;
};

struct InspectFlags {
  std::string input;
  bool all = false;
};

void require_parent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

int do_synth(const SynthFlags& f, std::ostream& out) {
  SceneSpec spec;
  spec.dims = parse_dims(f.dims);
  if (!f.categories.empty()) spec.categories = f.categories;
  spec.objects_min = f.objects_min;
  spec.objects_max = f.objects_max;
  spec.scale_min = f.scale_min;
  spec.scale_max = f.scale_max;
  spec.min_voxels = f.min_voxels;
  spec.clearance = f.clearance;
  spec.max_attempts = f.max_attempts;
  spec.master_seed = f.seed;
  const MeshLibrary library = f.modelnet.empty() ? builtin_mesh_library() : load_modelnet_tree(f.modelnet, spec.categories);
  DatasetOptions options;
  options.encode = f.codec.options();
  options.jobs = f.jobs;
  const auto manifest = synth_dataset(spec, f.scenes, f.out, library, options);
  std::size_t objects = 0;
  for (const auto& e : manifest.entries) objects += e.annotation.objects.size();
  out << "wrote " << manifest.entries.size() << " scenes (" << objects << " objects) to "
      << (fs::path(f.out) / options.manifest_name).string() << '\n';
  return 0;
}

int do_encode(const EncodeFlags& f, std::ostream& out) {
  const VoxelGrid grid = read_voxg(f.input);
  require_parent(f.out);
  write_png(f.out, encode(grid, f.codec.options()));
  out << "encoded " << f.input << " -> " << f.out << '\n';
  return 0;
}

int do_decode(const DecodeFlags& f, std::ostream& out) {
  const GridDims dims = parse_dims(f.dims);
  const VoxelGrid grid = decode(read_png(f.input), dims, f.codec.options());
  require_parent(f.out);
  write_voxg(f.out, grid);
  out << "decoded " << f.input << " -> " << f.out << " (" << occupied_count(grid) << " occupied)\n";
  return 0;
}

int do_extract(const ExtractFlags& f, std::ostream& out) {
  const Connectivity conn = f.connectivity == 6 ? Connectivity::Six : Connectivity::TwentySix;
  std::optional<ShapeStatsModel> model;
  if (!f.shape_model.empty()) model = load_shape_model(f.shape_model);
  const ShapeStatsModel* model_ptr = model ? &*model : nullptr;

  if (!f.grid.empty()) {
    const auto annotation = extract_semantics(read_voxg(f.grid), default_palette(), model_ptr, conn);
    out << objects_to_json(annotation.objects).dump(2) << '\n';
    return 0;
  }
  if (f.manifest.empty() || f.out.empty()) throw CLI::ValidationError("extract needs --grid, or --manifest with --out");
  const DatasetManifest manifest = read_manifest(f.manifest);
  std::vector<PredictionResult> results(manifest.entries.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(manifest.entries.size());
  const auto worker = [&] {
    for (std::size_t i = next++; i < results.size(); i = next++) {
      const auto& entry = manifest.entries[i];
      PredictionResult r;
      r.scene_id = entry.scene_id;
      try {
        ParsedAnnotation parsed;
        parsed.annotation = extract_semantics(read_voxg(manifest.resolve(entry.grid_path)), default_palette(), model_ptr, conn);
        parsed.annotation.scene_id = entry.scene_id;
        r.outcome = std::move(parsed);
      } catch (const Error& e) {
        errors[i] = e.what();
      }
      results[i] = std::move(r);
    }
  };
  std::vector<std::thread> threads;
  for (int t = 1; t < std::max(1, f.jobs); ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) throw Error(ErrorKind::Io, "scene " + manifest.entries[i].scene_id + ": " + errors[i]);
  }
  require_parent(f.out);
  write_predictions(f.out, results);
  out << "extracted " << results.size() << " scenes -> " << f.out << '\n';
  return 0;
}

int do_fit(const FitFlags& f, std::ostream& out) {
  const auto model = fit_shape_stats(read_manifest(f.manifest));
  require_parent(f.out);
  save_shape_model(f.out, model);
  out << "fitted " << model.centroids.size() << " categories -> " << f.out << '\n';
  return 0;
}

int do_predict(const PredictFlags& f, std::ostream& out) {
  const DatasetManifest manifest = read_manifest(f.manifest);
  PredictionRequest request;
  request.endpoint_url = f.endpoint;
  request.model_name = f.model;
  request.temperature = f.temperature;
  request.max_output_tokens = f.max_tokens;
  if (!f.prompt_file.empty()) request.prompt = read_text(f.prompt_file);
  ClientSettings settings;
  settings.api_key = api_key_from_env();
  settings.retry.max_attempts = f.max_attempts;
  settings.retry.base_delay = std::chrono::milliseconds(f.retry_base_ms);
  settings.timeout = std::chrono::seconds(f.timeout_s);
  const auto results = predict_batch(manifest, request, settings, f.jobs);
  require_parent(f.out);
  write_predictions(f.out, results);
  std::size_t parsed = 0;
  for (const auto& r : results) parsed += r.parsed() ? 1 : 0;
  out << "predicted " << results.size() << " scenes (" << parsed << " parsed) -> " << f.out << '\n';
  return 0;
}

int do_eval(const EvalFlags& f, std::ostream& out) {
  const MetricsReport report = compute_metrics(join_predictions(f.pred, f.manifest));
  require_parent(f.out);
  write_text(f.out, report_table({{f.step, report}}));
  if (!f.json_out.empty()) {
    require_parent(f.json_out);
    write_text(f.json_out, to_json(report).dump(2) + "\n");
  }
  out << to_json(report).dump(2) << '\n';
  return 0;
}

int do_report(const ReportFlags& f, std::ostream& out) {
  std::vector<ReportRow> rows;
  for (const auto& run : f.runs) {
    auto part = parse_report_table(read_text(run));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  const std::string csv = report_table(rows);
  if (!f.out.empty()) {
    require_parent(f.out);
    write_text(f.out, csv);
  } else {
    out << csv;
  }
  if (!f.charts.empty()) {
    for (const auto& path : write_charts(rows, f.charts)) out << "chart " << path.string() << '\n';
  }
  return 0;
}

int do_inspect(const InspectFlags& f, std::ostream& out) {
  const VoxelGrid grid = read_voxg(f.input);
  const GridDims& d = grid.dims();
  out << "grid " << format_dims(d) << ", " << occupied_count(grid) << " occupied\n";
  for (int z = 0; z < d.d; ++z) {
    std::size_t n = 0;
    for (int y = 0; y < d.h; ++y)
      for (int x = 0; x < d.w; ++x) n += grid.occupied(x, y, z) ? 1 : 0;
    if (n == 0 && !f.all) continue;
    out << "z=" << z << " (" << n << " occupied)\n";
    for (int y = 0; y < d.h; ++y) {
      std::string row(static_cast<std::size_t>(d.w), '.');
      for (int x = 0; x < d.w; ++x) {
        if (grid.occupied(x, y, z)) row[static_cast<std::size_t>(x)] = '#';
      }
      out << row << '\n';
    }
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"voxrep: voxel scene synthesis, slice-tiling codec, semantic extraction and evaluation"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file; command-line flags take precedence");
  app.require_subcommand(1);
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "Echo the effective configuration to stderr");

  SynthFlags synth;
  auto* s = app.add_subcommand("synth", "Generate a seeded synthetic dataset (grids, images, manifest)");
  s->add_option("--scenes", synth.scenes, "Number of scenes")->capture_default_str();
  s->add_option("--seed", synth.seed, "Master seed")->capture_default_str();
  s->add_option("--out", synth.out, "Output directory")->required();
  s->add_option("--dims", synth.dims, "Grid dimensions WxHxD")->capture_default_str();
  s->add_option("--objects-min", synth.objects_min, "Minimum objects per scene")->capture_default_str();
  s->add_option("--objects-max", synth.objects_max, "Maximum objects per scene")->capture_default_str();
  s->add_option("--scale-min", synth.scale_min, "Smallest object extent in voxels")->capture_default_str();
  s->add_option("--scale-max", synth.scale_max, "Largest object extent in voxels")->capture_default_str();
  s->add_option("--min-voxels", synth.min_voxels, "Minimum voxels per accepted object")->capture_default_str();
  s->add_option("--clearance", synth.clearance, "Empty voxels kept between objects")->capture_default_str();
  s->add_option("--max-attempts", synth.max_attempts, "Placement attempts per object")->capture_default_str();
  s->add_option("--categories", synth.categories, "Categories to sample (default: the 14 built-in ones)");
  s->add_option("--modelnet", synth.modelnet, "ModelNet-style tree <category>/<split>/<file>.off (default: built-in meshes)");
  s->add_option("--jobs", synth.jobs, "Worker threads")->capture_default_str();
  synth.codec.add_to(s);

  EncodeFlags enc;
  auto* e = app.add_subcommand("encode", "Encode a VOXG1 grid into a tiled PNG");
  e->add_option("input", enc.input, "Input .voxg")->required()->check(CLI::ExistingFile);
  e->add_option("--out", enc.out, "Output .png")->required();
  enc.codec.add_to(e);

  DecodeFlags dec;
  auto* d = app.add_subcommand("decode", "Decode a replication-mode tiled PNG back into a VOXG1 grid");
  d->add_option("input", dec.input, "Input .png")->required()->check(CLI::ExistingFile);
  d->add_option("--dims", dec.dims, "Grid dimensions WxHxD")->capture_default_str();
  d->add_option("--out", dec.out, "Output .voxg")->required();
  dec.codec.add_to(d);

  ExtractFlags ext;
  auto* x = app.add_subcommand("extract", "Baseline semantics via connected components");
  x->add_option("--manifest", ext.manifest, "Dataset manifest to process");
  x->add_option("--grid", ext.grid, "Single .voxg to describe on stdout");
  x->add_option("--out", ext.out, "Predictions JSON-lines output (with --manifest)");
  x->add_option("--shape-model", ext.shape_model, "Shape model JSON from fit-shapes");
  x->add_option("--connectivity", ext.connectivity, "Voxel adjacency: 6 or 26")
      ->check(CLI::IsMember({6, 26}))
      ->capture_default_str();
  x->add_option("--jobs", ext.jobs, "Worker threads")->capture_default_str();

  FitFlags fit;
  auto* fsub = app.add_subcommand("fit-shapes", "Fit nearest-centroid shape statistics from a manifest");
  fsub->add_option("--manifest", fit.manifest, "Dataset manifest")->required();
  fsub->add_option("--out", fit.out, "Shape model JSON output")->required();

  PredictFlags pred;
  auto* p = app.add_subcommand("predict", "Query a chat-completions vision endpoint for every manifest scene");
  p->add_option("--manifest", pred.manifest, "Dataset manifest")->required();
  p->add_option("--endpoint", pred.endpoint, "Base URL, e.g. http://localhost:8000/v1")->required();
  p->add_option("--model", pred.model, "Model name")->required();
  p->add_option("--out", pred.out, "Predictions JSON-lines output")->required();
  p->add_option("--prompt-file", pred.prompt_file, "Replace the default instruction text");
  p->add_option("--temperature", pred.temperature, "Sampling temperature")->capture_default_str();
  p->add_option("--max-tokens", pred.max_tokens, "Maximum output tokens")->capture_default_str();
  p->add_option("--jobs", pred.jobs, "Requests in flight")->capture_default_str();
  p->add_option("--max-attempts", pred.max_attempts, "Attempts per request")->capture_default_str();
  p->add_option("--retry-base-ms", pred.retry_base_ms, "First backoff delay in ms")->capture_default_str();
  p->add_option("--timeout", pred.timeout_s, "Per-request timeout in seconds")->capture_default_str();

  EvalFlags ev;
  auto* v = app.add_subcommand("eval", "Score predictions against a manifest");
  v->add_option("--pred", ev.pred, "Predictions JSON-lines")->required();
  v->add_option("--manifest", ev.manifest, "Dataset manifest")->required();
  v->add_option("--out", ev.out, "CSV report output")->required();
  v->add_option("--json", ev.json_out, "Also write the metrics as JSON");
  v->add_option("--step", ev.step, "Label for the steps column")->capture_default_str();

  ReportFlags rep;
  auto* r = app.add_subcommand("report", "Merge metric CSVs into one table and line charts");
  r->add_option("--runs", rep.runs, "CSV files from eval or report")->required()->expected(1, -1);
  r->add_option("--out", rep.out, "Merged CSV output (default: stdout)");
  r->add_option("--charts", rep.charts, "Directory for one SVG per metric");

  InspectFlags ins;
  auto* i = app.add_subcommand("inspect", "Print a grid's slices as ASCII occupancy maps");
  i->add_option("input", ins.input, "Input .voxg")->required()->check(CLI::ExistingFile);
  i->add_flag("--all", ins.all, "Also print empty slices");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) out << sub->help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  }

  if (verbosity > 0) {
    nlohmann::json effective = nlohmann::json::parse(app.config_to_str(true, false));
    if (const char* key = std::getenv("VOXREP_API_KEY"); key && *key) effective["api_key"] = "<redacted>";
    err << "effective config: " << effective.dump() << '\n';
  }

  try {
    if (s->parsed()) return do_synth(synth, out);
    if (e->parsed()) return do_encode(enc, out);
    if (d->parsed()) return do_decode(dec, out);
    if (x->parsed()) return do_extract(ext, out);
    if (fsub->parsed()) return do_fit(fit, out);
    if (p->parsed()) return do_predict(pred, out);
    if (v->parsed()) return do_eval(ev, out);
    if (r->parsed()) return do_report(rep, out);
    if (i->parsed()) return do_inspect(ins, out);
  } catch (const CLI::ParseError& ex) {
    err << "usage error: " << ex.what() << '\n';
    return 2;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  } catch (const fs::filesystem_error& ex) {
    err << "error: io: " << ex.what() << '\n';
    return 1;
  }
  err << "usage error: no subcommand\n";
  return 2;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace voxrep::cli
