#include "avix/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "avix/core/error.hpp"
#include "avix/smoothing/smoothing.hpp"

namespace avix::metrics {

using conflict::Conflict;
using conflict::TrackPath;

namespace {

void require_distance(double d, const char* name) {
  if (!(d >= 0.0)) throw Error(ErrorCode::kDomain, std::string(name) + " must be a non-negative distance");
}

}  // namespace

std::optional<double> ttc_crossing(double d_f, double v_f) {
  require_distance(d_f, "d_f");
  if (v_f <= kStandstillSpeed) return std::nullopt;
  return d_f / v_f;
}

std::optional<double> ttc_merging(double d_f, double v_f, double v_l) {
  require_distance(d_f, "d_f");
  if (v_f <= v_l) return std::nullopt;
  return d_f / (v_f - v_l);
}

std::optional<double> time_advantage(double d_f, double v_f, double d_l, double v_l) {
  if (v_f <= kStandstillSpeed || v_l <= kStandstillSpeed) return std::nullopt;
  return d_f / v_f - d_l / v_l;
}

double required_deceleration(double d, double v) {
  if (!(d > 0.0)) throw Error(ErrorCode::kDomain, "required deceleration needs a positive distance");
  return v * v / (2.0 * d);
}

std::optional<double> min_ttc(std::span<const ApproachSample> window, ConflictKind kind) {
  std::optional<double> best;
  for (const auto& s : window) {
    const auto ttc = kind == ConflictKind::kCrossing ? ttc_crossing(s.d_f, s.v_f) : ttc_merging(s.d_f, s.v_f, s.v_l);
    if (ttc && (!best || *ttc < *best)) best = ttc;
  }
  return best;
}

double mrd(std::span<const ApproachSample> window) {
  if (window.empty()) throw Error(ErrorCode::kMetricUndefined, "MRD window is empty");
  double best = 0.0;
  for (const auto& s : window) {
    if (s.d_f < kMrdMinDistance) continue;
    best = std::max(best, required_deceleration(s.d_f, s.v_f));
  }
  return best;
}

std::vector<TaSample> ta_series(std::span<const ApproachSample> window) {
  std::vector<TaSample> out;
  out.reserve(window.size());
  for (const auto& s : window) out.push_back({s.t, time_advantage(s.d_f, s.v_f, s.d_l, s.v_l)});
  return out;
}

std::vector<ApproachSample> approach_samples(const Conflict& c, const TrackPath& leader, const TrackPath& follower,
                                             double t_end) {
  std::vector<ApproachSample> out;
  const auto times = follower.times();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < c.window_start - 1e-9) continue;
    if (t > t_end + 1e-9) break;
    const auto arc_l = leader.arc_at(t);
    const auto v_l = leader.speed_at(t);
    if (!arc_l || !v_l) continue;
    ApproachSample s;
    s.t = t;
    s.d_f = std::max(0.0, c.follower_cp_arc - follower.arcs()[i]);
    s.v_f = follower.speeds()[i];
    s.d_l = c.leader_cp_arc - *arc_l;
    s.v_l = *v_l;
    out.push_back(s);
  }
  return out;
}

double ProfileSegment::avg_speed() const {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : samples) sum += s.v;
  return sum / static_cast<double>(samples.size());
}

double ProfileSegment::avg_accel() const {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : samples) sum += s.a;
  return sum / static_cast<double>(samples.size());
}

std::optional<ProfileSegment> standstill_profile(const Conflict& c, const TrajectoryTrack& follower) {
  std::vector<double> t;
  std::vector<double> v;
  for (const auto& p : follower.points) {
    if (!p.valid) continue;
    t.push_back(p.t);
    v.push_back(p.v);
  }
  if (t.size() < 2) return std::nullopt;
  const auto a = smoothing::central_difference(v, t);

  const double t0 = c.window_start - 1e-9;
  const double t1 = c.t_follower_arrive + 1e-9;
  std::optional<std::size_t> onset;  // last still frame of the chosen episode
  std::size_t i = 0;
  while (i < t.size()) {
    if (t[i] < t0 || v[i] >= kStandstillSpeed) {
      ++i;
      continue;
    }
    if (t[i] > t1) break;
    std::size_t j = i;
    while (j + 1 < t.size() && t[j + 1] <= t1 && v[j + 1] < kStandstillSpeed) ++j;
    const bool moves_after = j + 1 < t.size() && t[j + 1] <= t1;
    if (t[j] - t[i] >= kMinStandstill - 1e-9 && moves_after) onset = j;
    i = j + 1;
  }
  if (!onset) return std::nullopt;

  ProfileSegment seg;
  seg.conflict_id = c.conflict_id;
  const double start = t[*onset];
  for (std::size_t k = *onset; k < t.size(); ++k) {
    const double rel = t[k] - start;
    if (rel > kProfileCap + 1e-9 || t[k] > t1) break;
    seg.samples.push_back({rel, v[k], a[k]});
  }
  return seg;
}

MetricBundle compute_metrics(const Conflict& c, const Scenario& scenario) {
  const TrajectoryTrack* leader_track = scenario.find_track(c.leader_track_id);
  const TrajectoryTrack* follower_track = scenario.find_track(c.follower_track_id);
  if (!leader_track || !follower_track) {
    throw Error(ErrorCode::kPrecondition, "conflict " + c.conflict_id + ": tracks missing from scenario " +
                                              scenario.scenario_id);
  }
  const TrackPath leader(*leader_track);
  const TrackPath follower(*follower_track);

  MetricBundle m;
  m.conflict_id = c.conflict_id;
  m.scenario_id = c.scenario_id;
  m.source = c.source;
  m.kind = c.kind;
  m.klass = c.klass;
  m.pet = pet(c.t_follower_arrive, c.t_leader_exit);

  const auto collision_course = approach_samples(c, leader, follower, c.t_leader_exit);
  m.min_ttc = min_ttc(collision_course, c.kind);
  m.mrd = mrd(collision_course);
  m.ta_series = ta_series(approach_samples(c, leader, follower, c.t_leader_arrive));
  m.follower_speed_at_cp = follower.speed_at(c.t_follower_arrive).value_or(0.0);

  m.profile = standstill_profile(c, *follower_track);
  if (m.profile && !m.profile->samples.empty()) {
    m.avg_speed = m.profile->avg_speed();
    m.avg_accel = m.profile->avg_accel();
  }
  return m;
}

}  // namespace avix::metrics
