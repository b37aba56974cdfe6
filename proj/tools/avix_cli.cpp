// avix command line. Talks to the library through the C interface only.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "avix/avix.h"

namespace {

enum Exit { kOk = 0, kConfigError = 2, kDataError = 3, kInternalError = 4 };

int exit_code(avix_status s) {
  switch (s) {
    case AVIX_OK: return kOk;
    case AVIX_ERR_CONFIG: return kConfigError;
    case AVIX_ERR_PARSE:
    case AVIX_ERR_DATA:
    case AVIX_ERR_DEPENDENCY:
    case AVIX_ERR_DOMAIN:
    case AVIX_ERR_IO: return kDataError;
    case AVIX_ERR_INTERNAL:
    case AVIX_ERR_NULL: return kInternalError;
  }
  return kInternalError;
}

struct NumericFlag {
  const char* flag;
  const char* key;
  const char* help;
  std::optional<double> value;
};

struct Options {
  std::string input;
  std::vector<std::string> maps;
  std::string out_dir;
  std::string config;
  std::optional<int> threads;
  bool pooled_t = false;
  std::vector<NumericFlag> numeric{
      {"--cutoff-hz", "filter.cutoff_hz", "Low-pass cutoff frequency (Hz)", {}},
      {"--sample-hz", "filter.sample_hz", "Sampling frequency (Hz)", {}},
      {"--order", "filter.order", "Butterworth filter order", {}},
      {"--max-accel", "outliers.max_accel", "Upper acceleration bound for outliers (m/s^2)", {}},
      {"--min-accel", "outliers.min_accel", "Lower acceleration bound for outliers (m/s^2)", {}},
      {"--link-distance", "cluster.link_distance", "Stop-sign linking distance (m)", {}},
      {"--radius-buffer", "cluster.radius_buffer", "Buffer added to the intersection radius (m)", {}},
      {"--pet-max", "conflict.pet_max", "Largest PET kept as a conflict (s)", {}},
      {"--speed-change-min", "conflict.speed_change_min", "Required speed change in the window (m/s)", {}},
      {"--merge-buffer", "conflict.merge_buffer", "Lateral buffer per side for merging paths (m)", {}},
      {"--clearance", "conflict.clearance", "Distance the leader travels past the conflict point to clear it (m)", {}},
      {"--max-bridge-gap", "io.max_bridge_gap", "Longest invalid gap bridged by interpolation (s)", {}},
  };
};

// Which numeric flags each subcommand accepts.
const std::vector<std::pair<std::string, std::vector<std::string>>> kStageFlags{
    {"smooth", {"--cutoff-hz", "--sample-hz", "--order", "--max-accel", "--min-accel", "--max-bridge-gap"}},
    {"detect-intersections", {"--link-distance", "--radius-buffer"}},
    {"detect-conflicts",
     {"--cutoff-hz", "--sample-hz", "--order", "--max-accel", "--min-accel", "--max-bridge-gap", "--link-distance",
      "--radius-buffer", "--pet-max", "--speed-change-min", "--merge-buffer", "--clearance"}},
    {"metrics",
     {"--cutoff-hz", "--sample-hz", "--order", "--max-accel", "--min-accel", "--max-bridge-gap", "--link-distance",
      "--radius-buffer", "--pet-max", "--speed-change-min", "--merge-buffer", "--clearance"}},
    {"stats",
     {"--cutoff-hz", "--sample-hz", "--order", "--max-accel", "--min-accel", "--max-bridge-gap", "--link-distance",
      "--radius-buffer", "--pet-max", "--speed-change-min", "--merge-buffer", "--clearance"}},
    {"report", {}},
    {"run",
     {"--cutoff-hz", "--sample-hz", "--order", "--max-accel", "--min-accel", "--max-bridge-gap", "--link-distance",
      "--radius-buffer", "--pet-max", "--speed-change-min", "--merge-buffer", "--clearance"}},
};

const char* describe(const std::string& stage) {
  if (stage == "smooth") return "Clamp speed outliers and low-pass filter every track; writes smoothed.jsonl";
  if (stage == "detect-intersections") return "Find all-way-stop intersections in the maps; writes intersections.csv";
  if (stage == "detect-conflicts") return "Detect merging and crossing conflicts; writes conflicts.csv";
  if (stage == "metrics") return "Per-conflict metrics; writes metrics.csv, profiles.csv, ta_series.csv";
  if (stage == "stats") return "Group summaries and two-sample tests; writes stats.csv, summaries.csv, ta_tests.csv";
  if (stage == "report") return "Plot-ready data from the metrics artifacts";
  return "Full pipeline with run_manifest.json";
}

int fail(avix_status s, const char* what) {
  std::fprintf(stderr, "avix: %s: %s\n", what, avix_last_error());
  return exit_code(s);
}

int execute(const std::string& stage, Options& opt) {
  avix_config* cfg = nullptr;
  if (avix_status s = avix_config_create(&cfg); s != AVIX_OK) return fail(s, "config");
  struct Guard {
    avix_config* c;
    ~Guard() { avix_config_destroy(c); }
  } guard{cfg};

  avix_status s = AVIX_OK;
  if (!opt.config.empty() && (s = avix_config_load_file(cfg, opt.config.c_str())) != AVIX_OK) {
    return fail(s, "config");
  }
  if (!opt.input.empty() && (s = avix_config_set_string(cfg, "input", opt.input.c_str())) != AVIX_OK) {
    return fail(s, "--input");
  }
  if (!opt.out_dir.empty() && (s = avix_config_set_string(cfg, "out_dir", opt.out_dir.c_str())) != AVIX_OK) {
    return fail(s, "--out-dir");
  }
  if (!opt.maps.empty()) {
    avix_config_clear_maps(cfg);
    for (const auto& m : opt.maps) {
      if ((s = avix_config_add_map(cfg, m.c_str())) != AVIX_OK) return fail(s, "--map");
    }
  }
  if (opt.threads && (s = avix_config_set_double(cfg, "threads", *opt.threads)) != AVIX_OK) {
    return fail(s, "--threads");
  }
  if (opt.pooled_t && (s = avix_config_set_bool(cfg, "stats.pooled_t", 1)) != AVIX_OK) return fail(s, "--pooled-t");
  for (const auto& f : opt.numeric) {
    if (f.value && (s = avix_config_set_double(cfg, f.key, *f.value)) != AVIX_OK) return fail(s, f.flag);
  }
  if ((s = avix_run_stage(cfg, stage.c_str())) != AVIX_OK) return fail(s, stage.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conflict detection and surrogate safety metrics for unsignalized intersections"};
  app.set_version_flag("--version", std::string(avix_version()));
  app.require_subcommand(1);

  Options opt;
  app.add_option("--input", opt.input, "Scenario file (scenarios.jsonl)");
  app.add_option("--map", opt.maps, "Map file (map.json); repeat for several maps");
  app.add_option("--out-dir", opt.out_dir, "Directory for artifacts");
  app.add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--config", opt.config, "JSON configuration file; flags override it");

  std::string chosen;
  for (const auto& [name, flags] : kStageFlags) {
    CLI::App* sub = app.add_subcommand(name, describe(name));
    sub->fallthrough();
    for (const auto& flag : flags) {
      for (auto& f : opt.numeric) {
        if (flag == f.flag) sub->add_option(f.flag, f.value, f.help);
      }
    }
    if (name == "stats" || name == "run") sub->add_flag("--pooled-t", opt.pooled_t, "Pooled-variance t test");
    sub->callback([&chosen, n = name] { chosen = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }
  return execute(chosen, opt);
}
