#pragma once

// Merging/crossing conflict detection between vehicle pairs at an intersection.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "avix/conflict/track_path.hpp"
#include "avix/core/model.hpp"
#include "avix/intersection/intersection.hpp"
#include "avix/io/scenario_io.hpp"

namespace avix::conflict {

struct ConflictSpec {
  double pet_max = 10.0;
  double speed_change_min = 3.0;
  double merge_buffer = 1.0;  // per side; paths touch when their gap <= 2 * merge_buffer
  // Arc length the leader must travel past the conflict point before it has
  // left it. 0 gives pure point timing.
  double clearance = 2.5;
  // Interaction starts once both vehicles are within radius + approach_margin
  // of the intersection center.
  double approach_margin = 15.0;
  double min_displacement = 0.5;
  double lane_match_distance = 2.0;

  void validate() const;  // throws kParameter
};

struct ConflictPoint {
  Vec2 point;
  double arc_a = 0.0;  // where the vehicle on path a reaches the point
  double arc_b = 0.0;
};

/// CROSSING: first intersection of the two polylines in path_a arc order.
/// MERGING: first point along path_a whose distance to path_b is at most
/// 2 * merge_buffer; the returned point is the midpoint of that closest pair.
std::optional<ConflictPoint> find_conflict_point(std::span<const Vec2> path_a, std::span<const Vec2> path_b,
                                                 ConflictKind kind, const ConflictSpec& spec = {});

struct Conflict {
  std::string conflict_id;
  std::string scenario_id;
  DataSource source = DataSource::kSynthetic;
  std::string intersection_id;
  std::string leader_track_id;
  std::string follower_track_id;
  ConflictKind kind = ConflictKind::kCrossing;
  InteractionClass klass = InteractionClass::kHvHv;
  Vec2 conflict_point;
  double t_leader_exit = 0.0;
  double t_follower_arrive = 0.0;

  double t_leader_arrive = 0.0;
  double leader_cp_arc = 0.0;
  double follower_cp_arc = 0.0;
  double window_start = 0.0;  // first mutual approach

  double pet() const { return t_follower_arrive - t_leader_exit; }
};

/// Lane the track enters the intersection disk from and the lane it leaves on.
struct LaneAssignment {
  std::string entry_lane;
  std::string exit_lane;
};

/// Throws kPrecondition if the track does not both enter and leave the disk,
/// kUnassignedLane if no lane centerline lies within lane_match_distance.
LaneAssignment assign_lanes(const TrajectoryTrack& track, const intersection::Intersection& ix,
                            const io::MapBundle& map, const ConflictSpec& spec = {});

/// MERGING when the entry lanes differ and the exit lanes match, CROSSING when
/// both differ, nullopt for a shared entry lane (car following).
std::optional<ConflictKind> classify_kind(const TrajectoryTrack& a, const TrajectoryTrack& b,
                                          const intersection::Intersection& ix, const io::MapBundle& map,
                                          const ConflictSpec& spec = {});

/// Conflicts between vehicle pairs of one scenario at one intersection.
/// `scenario` is expected to be smoothed.
std::vector<Conflict> detect_conflicts(const Scenario& scenario, const intersection::Intersection& ix,
                                       const io::MapBundle& map, const ConflictSpec& spec = {});

/// All intersections of the scenario's map; a pair keeps its first conflict.
std::vector<Conflict> detect_conflicts(const Scenario& scenario, std::span<const intersection::Intersection> ixs,
                                       const io::MapBundle& map, const ConflictSpec& spec = {});

}  // namespace avix::conflict
