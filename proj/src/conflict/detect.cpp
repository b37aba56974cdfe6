#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "avix/conflict/conflict.hpp"
#include "avix/core/error.hpp"
#include "avix/core/log.hpp"

namespace avix::conflict {

using intersection::Intersection;

namespace {

struct DiskCrossing {
  Vec2 before_entry;
  Vec2 after_exit;
};

std::optional<DiskCrossing> traverse(const TrajectoryTrack& track, const Intersection& ix) {
  std::vector<Vec2> pts;
  for (const auto& p : track.points) {
    if (p.valid) pts.push_back(p.position());
  }
  std::optional<std::size_t> entry;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!ix.contains(pts[i - 1]) && ix.contains(pts[i])) {
      entry = i;
      break;
    }
  }
  if (!entry) return std::nullopt;
  for (std::size_t i = *entry + 1; i < pts.size(); ++i) {
    if (!ix.contains(pts[i])) return DiskCrossing{pts[*entry - 1], pts[i]};
  }
  return std::nullopt;
}

std::string nearest_lane(Vec2 p, const std::vector<std::string>& lane_ids, const io::MapBundle& map,
                         double max_distance, const std::string& track_id, const char* what) {
  std::string best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& id : lane_ids) {
    const LanePolyline* lane = map.find_lane(id);
    if (!lane) continue;
    const double d = project_onto_polyline(p, lane->centerline).distance;
    if (d < best_d) {
      best_d = d;
      best = id;
    }
  }
  if (best.empty() || best_d > max_distance) {
    throw Error(ErrorCode::kUnassignedLane, "track " + track_id + ": no " + what + " lane within " +
                                                std::to_string(max_distance) + " m");
  }
  return best;
}

bool is_candidate(const TrajectoryTrack& track, const TrackPath& path, const ConflictSpec& spec) {
  return track.is_vehicle() && path.net_displacement() >= spec.min_displacement;
}

// Max minus min speed over frames inside [t0, t1].
double speed_change(const TrackPath& path, double t0, double t1) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < path.times().size(); ++i) {
    const double t = path.times()[i];
    if (t < t0 - 1e-9 || t > t1 + 1e-9) continue;
    lo = std::min(lo, path.speeds()[i]);
    hi = std::max(hi, path.speeds()[i]);
  }
  return hi >= lo ? hi - lo : 0.0;
}

}  // namespace

LaneAssignment assign_lanes(const TrajectoryTrack& track, const Intersection& ix, const io::MapBundle& map,
                            const ConflictSpec& spec) {
  const auto crossing = traverse(track, ix);
  if (!crossing) {
    throw Error(ErrorCode::kPrecondition, "track " + track.track_id + " does not pass through " + ix.intersection_id);
  }
  return {nearest_lane(crossing->before_entry, ix.approach_lanes, map, spec.lane_match_distance, track.track_id,
                       "approach"),
          nearest_lane(crossing->after_exit, ix.exit_lanes, map, spec.lane_match_distance, track.track_id, "exit")};
}

std::optional<ConflictKind> classify_kind(const TrajectoryTrack& a, const TrajectoryTrack& b, const Intersection& ix,
                                          const io::MapBundle& map, const ConflictSpec& spec) {
  const auto la = assign_lanes(a, ix, map, spec);
  const auto lb = assign_lanes(b, ix, map, spec);
  if (la.entry_lane == lb.entry_lane) return std::nullopt;
  return la.exit_lane == lb.exit_lane ? ConflictKind::kMerging : ConflictKind::kCrossing;
}

std::vector<Conflict> detect_conflicts(const Scenario& scenario, const Intersection& ix, const io::MapBundle& map,
                                       const ConflictSpec& spec) {
  spec.validate();
  struct Candidate {
    const TrajectoryTrack* track;
    TrackPath path;
  };
  std::vector<Candidate> candidates;
  for (const auto& track : scenario.tracks) {
    TrackPath path(track);
    if (!is_candidate(track, path, spec) || !traverse(track, ix)) continue;
    candidates.push_back({&track, std::move(path)});
  }
  // Pair order and path order are fixed by track id so the result does not
  // depend on the input order of tracks.
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& l, const Candidate& r) { return l.track->track_id < r.track->track_id; });

  std::vector<Conflict> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      const Candidate& a = candidates[i];
      const Candidate& b = candidates[j];
      if (a.track->agent_id() == b.track->agent_id()) continue;
      if (a.track->agent_class == AgentClass::kAv && b.track->agent_class == AgentClass::kAv) continue;
      const std::string pair = a.track->track_id + "-" + b.track->track_id;

      std::optional<ConflictKind> kind;
      try {
        kind = classify_kind(*a.track, *b.track, ix, map, spec);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kUnassignedLane) throw;
        log().info("scenario {}: skipping pair {}: {}", scenario.scenario_id, pair, e.what());
        continue;
      }
      if (!kind) continue;

      const auto cp = find_conflict_point(a.path.positions(), b.path.positions(), *kind, spec);
      if (!cp || !ix.contains(cp->point)) continue;

      const auto ta = a.path.time_at_arc(cp->arc_a);
      const auto tb = b.path.time_at_arc(cp->arc_b);
      if (!ta || !tb) continue;  // incomplete interaction

      const bool a_leads = *ta <= *tb;
      const Candidate& leader = a_leads ? a : b;
      const Candidate& follower = a_leads ? b : a;
      const double leader_arc = a_leads ? cp->arc_a : cp->arc_b;
      const double follower_arc = a_leads ? cp->arc_b : cp->arc_a;
      const double t_leader_arrive = a_leads ? *ta : *tb;
      const double t_follower_arrive = a_leads ? *tb : *ta;

      const auto t_leader_exit = leader.path.time_at_arc(leader_arc + spec.clearance);
      if (!t_leader_exit) continue;
      const double pet = t_follower_arrive - *t_leader_exit;
      if (pet < 0.0) {
        log().info("scenario {}: skipping pair {}: follower arrives before the leader clears", scenario.scenario_id,
                   pair);
        continue;
      }
      if (pet >= spec.pet_max) continue;

      // First follower frame at which both vehicles are near the intersection
      // and neither has reached the conflict point.
      const double reach = ix.radius + spec.approach_margin;
      std::optional<double> window_start;
      for (std::size_t k = 0; k < follower.path.times().size(); ++k) {
        const double t = follower.path.times()[k];
        if (t > t_follower_arrive) break;
        if (!leader.path.covers(t)) continue;
        if (follower.path.arcs()[k] >= follower_arc) break;
        if (*leader.path.arc_at(t) >= leader_arc) break;
        if (distance(follower.path.positions()[k], ix.center) > reach) continue;
        if (distance(*leader.path.position_at(t), ix.center) > reach) continue;
        window_start = t;
        break;
      }
      if (!window_start) continue;

      const double dv_leader = speed_change(leader.path, *window_start, t_follower_arrive);
      const double dv_follower = speed_change(follower.path, *window_start, t_follower_arrive);
      if (!(dv_leader > spec.speed_change_min || dv_follower > spec.speed_change_min)) continue;

      Conflict c;
      c.conflict_id = scenario.scenario_id + ":" + pair;
      c.scenario_id = scenario.scenario_id;
      c.source = scenario.source;
      c.intersection_id = ix.intersection_id;
      c.leader_track_id = leader.track->track_id;
      c.follower_track_id = follower.track->track_id;
      c.kind = *kind;
      c.klass = interaction_class(*leader.track, *follower.track);
      c.conflict_point = cp->point;
      c.t_leader_exit = *t_leader_exit;
      c.t_follower_arrive = t_follower_arrive;
      c.t_leader_arrive = t_leader_arrive;
      c.leader_cp_arc = leader_arc;
      c.follower_cp_arc = follower_arc;
      c.window_start = *window_start;
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<Conflict> detect_conflicts(const Scenario& scenario, std::span<const Intersection> ixs,
                                       const io::MapBundle& map, const ConflictSpec& spec) {
  std::vector<Conflict> out;
  std::set<std::string> seen;
  for (const auto& ix : ixs) {
    for (auto& c : detect_conflicts(scenario, ix, map, spec)) {
      if (seen.insert(c.conflict_id).second) out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace avix::conflict
