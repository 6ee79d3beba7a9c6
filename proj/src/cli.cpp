#include "perispace/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iomanip>
#include <optional>

#include "CLI11.hpp"
#include "perispace/config.hpp"
#include "perispace/error.hpp"
#include "perispace/records.hpp"

namespace perispace::cli {

namespace fs = std::filesystem;

namespace {

// Files written by the current command; removed again if it fails.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const fs::path& p : written_) fs::remove(p, ec);
  }

  std::ofstream open(const std::string& name, bool binary = false) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir_.string() + "': " + ec.message());
    const fs::path p = dir_ / name;
    written_.push_back(p);
    std::ofstream os(p, binary ? std::ios::binary : std::ios::out);
    if (!os) throw std::runtime_error("cannot write '" + p.string() + "'");
    return os;
  }

  void close(std::ofstream& os) {
    os.close();
    if (!os) throw std::runtime_error("write failed in '" + dir_.string() + "'");
  }

  void commit() { committed_ = true; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
  bool committed_ = false;
};

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("PERISPACE_OUT"); env && *env) return env;
  return ".";
}

std::vector<SweepRecord> load_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open records file '" + path + "'");
  try {
    return read_records_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Metric parse_metric(const std::string& name) {
  const auto m = metric_from_name(name);
  if (!m) throw ParseError("--metric: expected f1 or kappa, got '" + name + "'");
  return *m;
}

std::string file_token(std::string s) {
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '+')) c = '_';
  return s;
}

struct Options {
  std::string scene;
  std::string config;
  std::string records;
  std::optional<double> resolution;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::string out;
  std::string metric = "f1";
  std::size_t top = 5;
};

int cmd_voxelize(const Options& o, std::ostream& out) {
  if (!o.resolution) throw ParseError("voxelize: --resolution is required");
  if (!(*o.resolution > 0.0)) throw ParseError("--resolution: must be positive");
  const std::vector<fs::path> paths{o.scene};
  const auto scenes = load_scenes(paths);
  OutputSet files(output_dir(o.out));
  for (const SceneModel& s : scenes) {
    const VoxelGrid grid = voxelize(s, *o.resolution);
    const StateCounts c = count_states(grid, RegionOfInterest{HumanBox{grid.geometry().box()}});
    const std::string name = file_token(s.name) + ".grid";
    std::ofstream os = files.open(name);
    write_dump(os, grid);
    files.close(os);
    out << s.name << ": occupied " << c.occupied << " free " << c.free << " cells " << grid.size() << " -> "
        << (files.dir() / name).string() << '\n';
  }
  files.commit();
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  RunConfig run = load_run_config(o.config);
  if (o.seed) run.seed = o.seed;
  if (o.resolution) {
    if (!(*o.resolution > 0.0)) throw ParseError("--resolution: must be positive");
    run.resolution = o.resolution;
  }
  if (o.workers) run.workers = *o.workers;

  const auto t0 = std::chrono::steady_clock::now();
  const auto scenes = load_scenes(run.scene_paths);
  const SweepConfig cfg = build_sweep_config(run, scenes);
  const std::vector<SweepRecord> records =
      run.mode == RunConfig::Mode::Combo ? combo_sweep(cfg) : sweep(cfg);
  const auto aggregated = aggregate_dynamic(records, run.aggregation);

  OutputSet files(output_dir(o.out));
  std::ofstream csv = files.open("records.csv", true);
  write_records_csv(csv, records);
  files.close(csv);
  std::ofstream summary = files.open("summary.json", true);
  write_summary_json(summary, aggregated,
                     {cfg.seed, cfg.resolution, run.mode == RunConfig::Mode::Combo ? "combo" : "sweep",
                      run.aggregation == DynamicAggregation::Mean ? "mean" : "pooled"});
  files.close(summary);
  files.commit();

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out << records.size() << " records (" << scenes.size() << " scenes, " << cfg.sensors.size() << " sensors) in "
      << std::fixed << std::setprecision(1) << secs << " s -> " << files.dir().string() << '\n';
  return kExitOk;
}

int cmd_heatmap(const Options& o, std::ostream& out) {
  const Metric metric = parse_metric(o.metric);
  const auto records = load_records(o.records);
  const auto aggregated = aggregate_dynamic(records);
  OutputSet files(output_dir(o.out));
  std::size_t written = 0;
  for (const HeatmapGroup& g : heatmap_groups(aggregated, metric)) {
    if (!o.scene.empty() && g.group != o.scene) continue;
    for (const HeatmapSurface& s : g.heatmap.surfaces) {
      const std::string stem = "heatmap_" + file_token(g.combo_id) + "_" + file_token(g.group) + "_" +
                               file_token(g.roi) + "_" + file_token(g.interp) + "_" + std::string(metric_name(metric)) +
                               "_" + file_token(s.surface);
      std::ofstream csv = files.open(stem + ".csv", true);
      write_heatmap_csv(csv, s);
      files.close(csv);
      std::ofstream pgm = files.open(stem + ".pgm", true);
      write_heatmap_pgm(pgm, s);
      files.close(pgm);
      ++written;
    }
  }
  if (written == 0) throw ConfigError("no records matched" + (o.scene.empty() ? "" : " scene '" + o.scene + "'"));
  files.commit();
  out << written << " heatmaps -> " << files.dir().string() << '\n';
  return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out) {
  if (o.top < 1) throw ParseError("--top: must be at least 1");
  const auto records = load_records(o.records);
  auto aggregated = aggregate_dynamic(records);
  if (!o.scene.empty())
    std::erase_if(aggregated, [&](const AggregateRecord& r) { return r.group != o.scene; });
  write_report(out, aggregated, o.top);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"perirobot-space coverage simulation and sensor placement search", "perispace"};
  app.require_subcommand(1);
  Options o;

  auto* vox = app.add_subcommand("voxelize", "voxelize a scene into a ground-truth grid dump");
  vox->add_option("--scene", o.scene, "scene file")->required();
  vox->add_option("--resolution", o.resolution, "voxel edge length in metres")->required();
  vox->add_option("--out", o.out, "output directory (default $PERISPACE_OUT or .)");

  auto* sw = app.add_subcommand("sweep", "run a placement or combination sweep");
  sw->add_option("--config", o.config, "run configuration file")->required();
  sw->add_option("--seed", o.seed, "master seed (overrides the config)");
  sw->add_option("--resolution", o.resolution, "voxel edge length (overrides the config)");
  sw->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  sw->add_option("--out", o.out, "output directory (default $PERISPACE_OUT or .)");

  auto* hm = app.add_subcommand("heatmap", "per-surface heatmaps from records.csv");
  hm->add_option("records", o.records, "records.csv from a sweep")->required();
  hm->add_option("--metric", o.metric, "f1 or kappa");
  hm->add_option("--scene", o.scene, "only this scene (or dynamic scene group)");
  hm->add_option("--out", o.out, "output directory (default $PERISPACE_OUT or .)");

  auto* rep = app.add_subcommand("report", "ranking and combination maxima from records.csv");
  rep->add_option("records", o.records, "records.csv from a sweep")->required();
  rep->add_option("--top", o.top, "rows per group");
  rep->add_option("--scene", o.scene, "only this scene (or dynamic scene group)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(vox)) return cmd_voxelize(o, out);
    if (app.got_subcommand(sw)) return cmd_sweep(o, out);
    if (app.got_subcommand(hm)) return cmd_heatmap(o, out);
    return cmd_report(o, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace perispace::cli
