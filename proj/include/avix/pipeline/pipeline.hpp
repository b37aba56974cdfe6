#pragma once

// End-to-end orchestration: smooth -> detect-intersections -> detect-conflicts
// -> metrics -> stats -> report. Each stage can run on its own; stages up to
// stats recompute their inputs from the raw scenario and map files, report
// reads the metrics stage's CSV files from the output directory.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "avix/conflict/conflict.hpp"
#include "avix/intersection/intersection.hpp"
#include "avix/io/scenario_io.hpp"
#include "avix/io/table.hpp"
#include "avix/metrics/metrics.hpp"
#include "avix/smoothing/smoothing.hpp"
#include "avix/stats/stats.hpp"

namespace avix::pipeline {

struct PipelineConfig {
  std::filesystem::path input;  // scenarios.jsonl
  std::vector<std::filesystem::path> maps;
  std::filesystem::path out_dir = "avix_out";
  int threads = 1;
  std::uint64_t seed = 0;
  io::ReadOptions read;
  smoothing::FilterSpec filter;
  smoothing::OutlierSpec outliers;
  intersection::ClusterSpec cluster;
  conflict::ConflictSpec conflict;
  stats::StatsOptions stats;

  void validate() const;  // kConfig for bad paths or thread count, kParameter for specs
  nlohmann::json to_json() const;
};

/// Applies the keys present in `j` on top of `base`. Unknown keys and wrong
/// value types throw kConfig.
PipelineConfig config_from_json(const nlohmann::json& j, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

enum class Stage { kSmooth, kDetectIntersections, kDetectConflicts, kMetrics, kStats, kReport };
std::string_view to_string(Stage s);
std::optional<Stage> parse_stage(std::string_view s);

struct Dataset {
  std::vector<Scenario> scenarios;
  std::vector<io::MapBundle> maps;

  const io::MapBundle& map_for(const Scenario& s) const;  // kDanglingReference
};

using IntersectionIndex = std::map<std::string, std::vector<intersection::Intersection>>;  // by map_id

// In-memory stages. Work is split across `threads` by scenario (or map) and
// merged back in input order, so results do not depend on the thread count.
Dataset load_dataset(const PipelineConfig& cfg);
void smooth_dataset(Dataset& data, const PipelineConfig& cfg);
IntersectionIndex detect_all_intersections(const Dataset& data, const PipelineConfig& cfg);
std::vector<conflict::Conflict> detect_all_conflicts(const Dataset& data, const IntersectionIndex& ixs,
                                                     const PipelineConfig& cfg);
std::vector<metrics::MetricBundle> compute_all_metrics(const Dataset& data,
                                                       const std::vector<conflict::Conflict>& conflicts,
                                                       const PipelineConfig& cfg);

// Artifact tables.
io::Table intersections_table(const IntersectionIndex& ixs);
io::Table conflicts_table(const std::vector<conflict::Conflict>& conflicts);
io::Table metrics_table(const std::vector<metrics::MetricBundle>& bundles);
io::Table profiles_table(const std::vector<metrics::MetricBundle>& bundles);
io::Table ta_series_table(const std::vector<metrics::MetricBundle>& bundles);
io::Table summaries_table(const stats::StatReport& report);
io::Table comparisons_table(const stats::StatReport& report);
io::Table ta_tests_table(const stats::StatReport& report);

/// Rebuilds metric bundles (scalar metrics plus TA and profile samples when
/// given) from the metrics stage's CSV output.
std::vector<metrics::MetricBundle> bundles_from_tables(const io::TextTable& metrics_csv,
                                                       const io::TextTable* ta_csv = nullptr,
                                                       const io::TextTable* profiles_csv = nullptr);

struct PlotData {
  io::Table joint_pet_minttc;
  io::Table mrd_box;
  io::Table ta_hist;
  io::Table profile_ci;
};
inline constexpr double kTaBinWidth = 0.5;
inline constexpr double kProfileBinWidth = 0.1;
PlotData build_plot_data(const std::vector<metrics::MetricBundle>& bundles);

/// Tukey box statistics with linearly interpolated quartiles.
struct BoxStats {
  std::size_t n = 0;
  double q1 = 0.0, median = 0.0, q3 = 0.0;
  double whisker_low = 0.0, whisker_high = 0.0;
  std::size_t n_outliers = 0;
};
BoxStats box_stats(std::vector<double> values);

// Stage runners write their artifacts into cfg.out_dir and return the number
// of records produced per artifact.
using StageCounts = std::map<std::string, std::size_t>;
StageCounts run_stage(Stage stage, const PipelineConfig& cfg);

/// All stages in order plus run_manifest.json. On failure the manifest names
/// the failed stage and the error is rethrown; earlier artifacts remain.
StageCounts run_pipeline(const PipelineConfig& cfg);

std::string_view version();

}  // namespace avix::pipeline
