#include "avix/core/model.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "avix/core/error.hpp"

namespace avix {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kDanglingReference: return "dangling reference";
    case ErrorCode::kParameter: return "parameter error";
    case ErrorCode::kDomain: return "domain error";
    case ErrorCode::kUnsupportedPair: return "unsupported pair";
    case ErrorCode::kIo: return "I/O error";
    case ErrorCode::kDegenerateSample: return "degenerate sample";
    case ErrorCode::kMetricUndefined: return "metric undefined";
    case ErrorCode::kDependency: return "dependency error";
    case ErrorCode::kValidation: return "validation error";
    case ErrorCode::kUnassignedLane: return "unassigned lane";
    case ErrorCode::kPrecondition: return "precondition violated";
    case ErrorCode::kConfig: return "config error";
    case ErrorCode::kInternal: return "internal error";
  }
  return "unknown error";
}

const TrajectoryTrack* Scenario::find_track(std::string_view id) const {
  for (const auto& track : tracks) {
    if (track.track_id == id) return &track;
  }
  return nullptr;
}

InteractionClass interaction_class(AgentClass leader, AgentClass follower) {
  if (leader == AgentClass::kOther || follower == AgentClass::kOther) {
    throw Error(ErrorCode::kUnsupportedPair, "interaction class requires two vehicles (AV or HV)");
  }
  if (leader == AgentClass::kAv && follower == AgentClass::kAv) {
    throw Error(ErrorCode::kUnsupportedPair, "AV-AV pairs are not supported");
  }
  if (leader == AgentClass::kAv) return InteractionClass::kAvHv;
  if (follower == AgentClass::kAv) return InteractionClass::kHvAv;
  return InteractionClass::kHvHv;
}

InteractionClass interaction_class(const TrajectoryTrack& leader, const TrajectoryTrack& follower) {
  return interaction_class(leader.agent_class, follower.agent_class);
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kValidation, where + ": field \"" + field + "\" " + what);
}

}  // namespace

void validate(const TrajectoryTrack& track) {
  const std::string where = "track " + track.track_id;
  std::size_t valid_count = 0;
  for (std::size_t i = 0; i < track.points.size(); ++i) {
    const auto& p = track.points[i];
    if (!std::isfinite(p.t)) fail(where, "t", "is not finite");
    if (i > 0 && !(p.t > track.points[i - 1].t)) fail(where, "t", "is not strictly increasing");
    if (!p.valid) continue;
    ++valid_count;
    if (!std::isfinite(p.x)) fail(where, "x", "is not finite");
    if (!std::isfinite(p.y)) fail(where, "y", "is not finite");
    if (!std::isfinite(p.v) || p.v < 0.0) fail(where, "v", "must be finite and non-negative");
    if (!std::isfinite(p.a)) fail(where, "a", "is not finite");
    if (!std::isfinite(p.heading) || std::abs(p.heading) > std::numbers::pi + 1e-9) {
      fail(where, "heading", "must lie in [-pi, pi]");
    }
  }
  if (valid_count < 2) fail(where, "points", "has fewer than 2 valid points");
}

void validate(const Scenario& scenario) {
  const std::string where = "scenario " + scenario.scenario_id;
  if (!(scenario.duration > 0.0) || !std::isfinite(scenario.duration)) {
    fail(where, "duration", "must be positive");
  }
  std::set<std::string> avs;
  std::set<std::string> ids;
  constexpr double kSlack = 1e-6;
  for (const auto& track : scenario.tracks) {
    validate(track);
    if (!ids.insert(track.track_id).second) fail(where, "track_id", "duplicates " + track.track_id);
    if (track.agent_class == AgentClass::kAv) avs.insert(track.agent_id());
    for (const auto& p : track.points) {
      if (p.t < -kSlack || p.t > scenario.duration + kSlack) {
        fail(where, "t", "lies outside [0, duration] in track " + track.track_id);
      }
    }
  }
  if (avs.size() > 1) fail(where, "agent_class", "has more than one AV agent");
}

void validate(const StopSign& sign) {
  if (!std::isfinite(sign.x) || !std::isfinite(sign.y)) {
    fail("stop sign " + sign.sign_id, "x/y", "is not finite");
  }
}

void validate(const LanePolyline& lane) {
  const std::string where = "lane " + lane.lane_id;
  if (lane.centerline.size() < 2) fail(where, "centerline", "needs at least 2 points");
  for (std::size_t i = 0; i < lane.centerline.size(); ++i) {
    const auto& p = lane.centerline[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) fail(where, "centerline", "has non-finite coordinates");
    if (i > 0 && p == lane.centerline[i - 1]) fail(where, "centerline", "has identical consecutive points");
  }
}

std::string_view to_string(AgentClass c) {
  switch (c) {
    case AgentClass::kAv: return "AV";
    case AgentClass::kHv: return "HV";
    case AgentClass::kOther: return "OTHER";
  }
  return "OTHER";
}

std::string_view to_string(DataSource s) {
  switch (s) {
    case DataSource::kWaymo: return "WAYMO";
    case DataSource::kLyft: return "LYFT";
    case DataSource::kSynthetic: return "SYNTHETIC";
  }
  return "SYNTHETIC";
}

std::string_view to_string(LaneRole r) {
  switch (r) {
    case LaneRole::kApproach: return "APPROACH";
    case LaneRole::kExit: return "EXIT";
    case LaneRole::kInternal: return "INTERNAL";
    case LaneRole::kUnknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::string_view to_string(InteractionClass c) {
  switch (c) {
    case InteractionClass::kHvHv: return "HV-HV";
    case InteractionClass::kAvHv: return "AV-HV";
    case InteractionClass::kHvAv: return "HV-AV";
  }
  return "HV-HV";
}

std::string_view to_string(ConflictKind k) {
  return k == ConflictKind::kMerging ? "MERGING" : "CROSSING";
}

std::optional<AgentClass> parse_agent_class(std::string_view s) {
  if (s == "AV") return AgentClass::kAv;
  if (s == "HV") return AgentClass::kHv;
  if (s == "OTHER") return AgentClass::kOther;
  return std::nullopt;
}

std::optional<DataSource> parse_data_source(std::string_view s) {
  if (s == "WAYMO") return DataSource::kWaymo;
  if (s == "LYFT") return DataSource::kLyft;
  if (s == "SYNTHETIC") return DataSource::kSynthetic;
  return std::nullopt;
}

std::optional<LaneRole> parse_lane_role(std::string_view s) {
  if (s == "APPROACH") return LaneRole::kApproach;
  if (s == "EXIT") return LaneRole::kExit;
  if (s == "INTERNAL") return LaneRole::kInternal;
  if (s == "UNKNOWN") return LaneRole::kUnknown;
  return std::nullopt;
}

std::optional<InteractionClass> parse_interaction_class(std::string_view s) {
  if (s == "HV-HV" || s == "HV_HV") return InteractionClass::kHvHv;
  if (s == "AV-HV" || s == "AV_HV") return InteractionClass::kAvHv;
  if (s == "HV-AV" || s == "HV_AV") return InteractionClass::kHvAv;
  return std::nullopt;
}

std::optional<ConflictKind> parse_conflict_kind(std::string_view s) {
  if (s == "MERGING") return ConflictKind::kMerging;
  if (s == "CROSSING") return ConflictKind::kCrossing;
  return std::nullopt;
}

}  // namespace avix
