#pragma once

// Neutral interchange format.
//
//   scenarios.jsonl  one JSON object per line:
//     {"scenario_id", "source", "duration", "map_ref", "smoothed"?,
//      "tracks": [{"track_id", "agent_class", "source_track_id"?,
//                  "points": [{"t", "x", "y", "v"?, "a"?, "heading"?, "valid"?}]}]}
//     An optional first line {"manifest": {"source", "scenario_count",
//     "schema_version"}} is checked against the records that follow.
//
//   map.json         {"map_id", "stop_signs": [{"sign_id", "x", "y", "lane_id"}],
//                     "lanes": [{"lane_id", "role", "centerline": [[x, y], ...]}]}

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "avix/core/model.hpp"

namespace avix::io {

inline constexpr std::string_view kSchemaVersion = "1.0";

struct MapBundle {
  std::string map_id;
  std::vector<StopSign> stop_signs;
  std::vector<LanePolyline> lanes;

  const LanePolyline* find_lane(std::string_view lane_id) const;
};

struct DatasetManifest {
  DataSource source = DataSource::kSynthetic;
  std::size_t scenario_count = 0;
  std::string schema_version{kSchemaVersion};
};

struct ReadOptions {
  // Invalid runs whose bracketing valid frames are at most this far apart are
  // bridged by linear interpolation; longer runs split the track.
  double max_bridge_gap = 0.5;
};

std::vector<Scenario> read_scenarios(const std::filesystem::path& path, const ReadOptions& options = {});
std::vector<Scenario> parse_scenarios(std::istream& in, std::string_view name, const ReadOptions& options = {});

// Throws kDanglingReference for any scenario whose map_ref has no map.
void check_map_refs(const std::vector<Scenario>& scenarios, const std::vector<MapBundle>& maps);

MapBundle read_map(const std::filesystem::path& path);
MapBundle parse_map(std::string_view text, std::string_view name);

void write_scenarios(const std::vector<Scenario>& scenarios, const std::filesystem::path& path);
void write_map(const MapBundle& map, const std::filesystem::path& path);

}  // namespace avix::io
