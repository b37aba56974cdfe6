#pragma once

// Shared domain types. Units everywhere: meters, seconds, m/s, m/s^2, radians.
// Coordinates are in a locally planar map frame per scenario.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "avix/core/geometry.hpp"

namespace avix {

enum class AgentClass { kAv, kHv, kOther };
enum class DataSource { kWaymo, kLyft, kSynthetic };
enum class LaneRole { kApproach, kExit, kInternal, kUnknown };

// Leader/follower taxonomy. kAvHv: the AV passes the conflict point first;
// kHvAv: the AV is the follower.
enum class InteractionClass { kHvHv, kAvHv, kHvAv };

enum class ConflictKind { kMerging, kCrossing };

inline constexpr double kNominalSampleInterval = 0.1;

struct TrajectoryPoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double v = 0.0;
  double a = 0.0;
  double heading = 0.0;
  bool valid = true;

  Vec2 position() const { return {x, y}; }
};

struct TrajectoryTrack {
  std::string track_id;
  AgentClass agent_class = AgentClass::kHv;
  std::vector<TrajectoryPoint> points;
  // Set when a track was split around a long invalid gap; all pieces of one
  // physical agent share it. Empty otherwise.
  std::string source_track_id;
  // The input carried no acceleration; `a` is rebuilt from the smoothed speed.
  bool accel_missing = false;

  const std::string& agent_id() const {
    return source_track_id.empty() ? track_id : source_track_id;
  }
  bool is_vehicle() const { return agent_class != AgentClass::kOther; }
};

struct Scenario {
  std::string scenario_id;
  DataSource source = DataSource::kSynthetic;
  double duration = 0.0;
  std::vector<TrajectoryTrack> tracks;
  std::string map_ref;
  // True once outlier clamping and low-pass smoothing have been applied.
  bool smoothed = false;

  const TrajectoryTrack* find_track(std::string_view id) const;
};

struct StopSign {
  std::string sign_id;
  double x = 0.0;
  double y = 0.0;
  std::string lane_id;

  Vec2 position() const { return {x, y}; }
};

struct LanePolyline {
  std::string lane_id;
  std::vector<Vec2> centerline;
  LaneRole role = LaneRole::kUnknown;
};

InteractionClass interaction_class(AgentClass leader, AgentClass follower);
InteractionClass interaction_class(const TrajectoryTrack& leader, const TrajectoryTrack& follower);

// Invariant checks; throw avix::Error(kValidation) naming the offending field.
void validate(const TrajectoryTrack& track);
void validate(const Scenario& scenario);
void validate(const StopSign& sign);
void validate(const LanePolyline& lane);

std::string_view to_string(AgentClass c);
std::string_view to_string(DataSource s);
std::string_view to_string(LaneRole r);
std::string_view to_string(InteractionClass c);
std::string_view to_string(ConflictKind k);

std::optional<AgentClass> parse_agent_class(std::string_view s);
std::optional<DataSource> parse_data_source(std::string_view s);
std::optional<LaneRole> parse_lane_role(std::string_view s);
std::optional<InteractionClass> parse_interaction_class(std::string_view s);
std::optional<ConflictKind> parse_conflict_kind(std::string_view s);

}  // namespace avix
