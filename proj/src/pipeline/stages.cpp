#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <set>
#include <thread>
#include <unordered_map>

#include "avix/core/error.hpp"
#include "avix/pipeline/pipeline.hpp"

#ifndef AVIX_VERSION
#define AVIX_VERSION "0.0.0"
#endif

namespace avix::pipeline {

namespace fs = std::filesystem;

std::string_view version() { return AVIX_VERSION; }

namespace {

constexpr std::pair<Stage, std::string_view> kStageNames[] = {
    {Stage::kSmooth, "smooth"},   {Stage::kDetectIntersections, "detect-intersections"},
    {Stage::kDetectConflicts, "detect-conflicts"}, {Stage::kMetrics, "metrics"},
    {Stage::kStats, "stats"},     {Stage::kReport, "report"},
};

// Runs fn(i) for i in [0, n) on up to `threads` workers. The exception of the
// lowest failing index is rethrown so failures are reproducible.
template <typename F>
void parallel_for(std::size_t n, int threads, F&& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  pool.clear();  // joins
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void require_input(const PipelineConfig& cfg) {
  if (cfg.input.empty()) throw Error(ErrorCode::kConfig, "no input scenarios file given (--input)");
}

void write(const io::Table& t, const PipelineConfig& cfg, const char* name, StageCounts& counts) {
  io::write_table(t, cfg.out_dir / name);
  counts[name] = t.rows.size();
}

io::TextTable read_dependency(const PipelineConfig& cfg, const char* name, Stage producer) {
  const fs::path p = cfg.out_dir / name;
  if (!fs::exists(p)) {
    throw Error(ErrorCode::kDependency, p.string() + " is missing; run the " + std::string(to_string(producer)) +
                                            " stage first");
  }
  return io::read_table(p);
}

// Shared tail of the stages that need smoothed scenarios.
struct Upstream {
  Dataset data;
  IntersectionIndex ixs;
  std::vector<conflict::Conflict> conflicts;
  std::vector<metrics::MetricBundle> bundles;
};

std::vector<io::MapBundle> load_maps(const PipelineConfig& cfg) {
  std::vector<io::MapBundle> maps;
  std::set<std::string> ids;
  for (const auto& path : cfg.maps) {
    maps.push_back(io::read_map(path));
    if (!ids.insert(maps.back().map_id).second) {
      throw Error(ErrorCode::kValidation, path.string() + ": duplicate map_id \"" + maps.back().map_id + "\"");
    }
  }
  return maps;
}

Upstream compute_upstream(const PipelineConfig& cfg, Stage upto) {
  Upstream u;
  if (upto == Stage::kDetectIntersections) {
    // Intersections depend on the maps alone.
    u.data.maps = load_maps(cfg);
    u.ixs = detect_all_intersections(u.data, cfg);
    return u;
  }
  u.data = load_dataset(cfg);
  smooth_dataset(u.data, cfg);
  if (upto == Stage::kSmooth) return u;
  u.ixs = detect_all_intersections(u.data, cfg);
  u.conflicts = detect_all_conflicts(u.data, u.ixs, cfg);
  if (upto == Stage::kDetectConflicts) return u;
  u.bundles = compute_all_metrics(u.data, u.conflicts, cfg);
  return u;
}

void write_smooth(const Upstream& u, const PipelineConfig& cfg, StageCounts& counts) {
  io::write_scenarios(u.data.scenarios, cfg.out_dir / "smoothed.jsonl");
  std::size_t tracks = 0;
  for (const auto& s : u.data.scenarios) tracks += s.tracks.size();
  counts["smoothed.jsonl"] = u.data.scenarios.size();
  counts["tracks"] = tracks;
}

void write_metrics(const Upstream& u, const PipelineConfig& cfg, StageCounts& counts) {
  write(metrics_table(u.bundles), cfg, "metrics.csv", counts);
  write(profiles_table(u.bundles), cfg, "profiles.csv", counts);
  write(ta_series_table(u.bundles), cfg, "ta_series.csv", counts);
}

void write_stats(const Upstream& u, const PipelineConfig& cfg, StageCounts& counts) {
  const auto report = stats::build_comparison_tables(u.bundles, cfg.stats);
  write(comparisons_table(report), cfg, "stats.csv", counts);
  write(summaries_table(report), cfg, "summaries.csv", counts);
  write(ta_tests_table(report), cfg, "ta_tests.csv", counts);
}

StageCounts run_report(const PipelineConfig& cfg) {
  StageCounts counts;
  const auto mt = read_dependency(cfg, "metrics.csv", Stage::kMetrics);
  const auto ta = read_dependency(cfg, "ta_series.csv", Stage::kMetrics);
  const auto pr = read_dependency(cfg, "profiles.csv", Stage::kMetrics);
  const auto bundles = bundles_from_tables(mt, &ta, &pr);
  const PlotData plots = build_plot_data(bundles);
  write(plots.joint_pet_minttc, cfg, "joint_pet_minttc.csv", counts);
  write(plots.mrd_box, cfg, "mrd_box.csv", counts);
  write(plots.ta_hist, cfg, "ta_hist.csv", counts);
  write(plots.profile_ci, cfg, "profile_ci.csv", counts);
  return counts;
}

void prepare_out_dir(const PipelineConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create output directory " + cfg.out_dir.string() + ": " + ec.message());
}

}  // namespace

std::string_view to_string(Stage s) {
  for (const auto& [stage, name] : kStageNames) {
    if (stage == s) return name;
  }
  return "?";
}

std::optional<Stage> parse_stage(std::string_view s) {
  for (const auto& [stage, name] : kStageNames) {
    if (name == s) return stage;
  }
  return std::nullopt;
}

const io::MapBundle& Dataset::map_for(const Scenario& s) const {
  for (const auto& m : maps) {
    if (m.map_id == s.map_ref) return m;
  }
  throw Error(ErrorCode::kDanglingReference,
              "scenario " + s.scenario_id + ": map_ref \"" + s.map_ref + "\" matches no loaded map");
}

Dataset load_dataset(const PipelineConfig& cfg) {
  require_input(cfg);
  Dataset d;
  d.scenarios = io::read_scenarios(cfg.input, cfg.read);
  d.maps = load_maps(cfg);
  io::check_map_refs(d.scenarios, d.maps);
  return d;
}

void smooth_dataset(Dataset& data, const PipelineConfig& cfg) {
  parallel_for(data.scenarios.size(), cfg.threads,
               [&](std::size_t i) { smoothing::smooth_scenario(data.scenarios[i], cfg.filter, cfg.outliers); });
}

IntersectionIndex detect_all_intersections(const Dataset& data, const PipelineConfig& cfg) {
  std::vector<std::vector<intersection::Intersection>> found(data.maps.size());
  parallel_for(data.maps.size(), cfg.threads,
               [&](std::size_t i) { found[i] = intersection::detect_intersections(data.maps[i], cfg.cluster); });
  IntersectionIndex out;
  for (std::size_t i = 0; i < data.maps.size(); ++i) out[data.maps[i].map_id] = std::move(found[i]);
  return out;
}

std::vector<conflict::Conflict> detect_all_conflicts(const Dataset& data, const IntersectionIndex& ixs,
                                                     const PipelineConfig& cfg) {
  std::vector<std::vector<conflict::Conflict>> found(data.scenarios.size());
  parallel_for(data.scenarios.size(), cfg.threads, [&](std::size_t i) {
    const Scenario& s = data.scenarios[i];
    const auto it = ixs.find(s.map_ref);
    if (it == ixs.end() || it->second.empty()) return;
    found[i] = conflict::detect_conflicts(s, std::span<const intersection::Intersection>(it->second),
                                          data.map_for(s), cfg.conflict);
  });
  std::vector<conflict::Conflict> out;
  for (auto& f : found) std::move(f.begin(), f.end(), std::back_inserter(out));
  return out;
}

std::vector<metrics::MetricBundle> compute_all_metrics(const Dataset& data,
                                                       const std::vector<conflict::Conflict>& conflicts,
                                                       const PipelineConfig& cfg) {
  std::unordered_map<std::string, const Scenario*> by_id;
  for (const auto& s : data.scenarios) by_id[s.scenario_id] = &s;
  std::vector<metrics::MetricBundle> out(conflicts.size());
  parallel_for(conflicts.size(), cfg.threads, [&](std::size_t i) {
    const auto it = by_id.find(conflicts[i].scenario_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kDanglingReference, "conflict " + conflicts[i].conflict_id + ": unknown scenario");
    }
    out[i] = metrics::compute_metrics(conflicts[i], *it->second);
  });
  return out;
}

StageCounts run_stage(Stage stage, const PipelineConfig& cfg) {
  cfg.validate();
  prepare_out_dir(cfg);
  StageCounts counts;
  switch (stage) {
    case Stage::kSmooth:
      write_smooth(compute_upstream(cfg, Stage::kSmooth), cfg, counts);
      break;
    case Stage::kDetectIntersections:
      write(intersections_table(compute_upstream(cfg, Stage::kDetectIntersections).ixs), cfg, "intersections.csv",
            counts);
      break;
    case Stage::kDetectConflicts:
      write(conflicts_table(compute_upstream(cfg, Stage::kDetectConflicts).conflicts), cfg, "conflicts.csv", counts);
      break;
    case Stage::kMetrics:
      write_metrics(compute_upstream(cfg, Stage::kMetrics), cfg, counts);
      break;
    case Stage::kStats:
      write_stats(compute_upstream(cfg, Stage::kMetrics), cfg, counts);
      break;
    case Stage::kReport:
      return run_report(cfg);
  }
  return counts;
}

StageCounts run_pipeline(const PipelineConfig& cfg) {
  nlohmann::json manifest = {{"tool", "avix"}, {"version", std::string(version())}, {"config", cfg.to_json()}};
  nlohmann::json stages = nlohmann::json::array();
  StageCounts total;
  Stage current = Stage::kSmooth;

  const auto record = [&](Stage s, const StageCounts& counts) {
    stages.push_back({{"stage", std::string(to_string(s))}, {"counts", counts}});
    for (const auto& [k, v] : counts) total[k] = v;
  };
  const auto write_manifest = [&] {
    manifest["stages"] = stages;
    std::ofstream out(cfg.out_dir / "run_manifest.json", std::ios::binary);
    out << manifest.dump(2) << "\n";
    if (!out) throw Error(ErrorCode::kIo, "cannot write run_manifest.json");
  };

  cfg.validate();
  prepare_out_dir(cfg);
  try {
    Upstream u;
    StageCounts c;
    current = Stage::kSmooth;
    u.data = load_dataset(cfg);
    smooth_dataset(u.data, cfg);
    write_smooth(u, cfg, c);
    record(current, c);

    current = Stage::kDetectIntersections;
    c.clear();
    u.ixs = detect_all_intersections(u.data, cfg);
    write(intersections_table(u.ixs), cfg, "intersections.csv", c);
    record(current, c);

    current = Stage::kDetectConflicts;
    c.clear();
    u.conflicts = detect_all_conflicts(u.data, u.ixs, cfg);
    write(conflicts_table(u.conflicts), cfg, "conflicts.csv", c);
    record(current, c);

    current = Stage::kMetrics;
    c.clear();
    u.bundles = compute_all_metrics(u.data, u.conflicts, cfg);
    write_metrics(u, cfg, c);
    record(current, c);

    current = Stage::kStats;
    c.clear();
    write_stats(u, cfg, c);
    record(current, c);

    current = Stage::kReport;
    record(current, run_report(cfg));
  } catch (const std::exception& e) {
    manifest["status"] = "failed";
    manifest["failed_stage"] = std::string(to_string(current));
    manifest["error"] = e.what();
    try {
      write_manifest();
    } catch (const std::exception&) {
      // the original error is the one worth reporting
    }
    throw;
  }
  manifest["status"] = "ok";
  write_manifest();
  return total;
}

}  // namespace avix::pipeline
