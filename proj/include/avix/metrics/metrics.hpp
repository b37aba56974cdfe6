#pragma once

// Surrogate safety and behaviour metrics for a detected conflict.
//
// Windows (all on the follower's frames, starting at Conflict::window_start):
//   minTTC, MRD   until the leader has cleared the conflict point (t_leader_exit)
//   TA            until the leader reaches the conflict point (t_leader_arrive)
//   profile       standstill episode before the follower's arrival

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "avix/conflict/conflict.hpp"
#include "avix/conflict/track_path.hpp"
#include "avix/core/model.hpp"

namespace avix::metrics {

inline constexpr double kStandstillSpeed = 0.1;  // m/s
inline constexpr double kMrdMinDistance = 0.5;   // frames closer than this are skipped
inline constexpr double kMinStandstill = 0.5;    // s
inline constexpr double kProfileCap = 8.0;       // s

// Per-frame formulas. Negative distances throw kDomain.
std::optional<double> ttc_crossing(double d_f, double v_f);
std::optional<double> ttc_merging(double d_f, double v_f, double v_l);
std::optional<double> time_advantage(double d_f, double v_f, double d_l, double v_l);
double required_deceleration(double d, double v);

/// Remaining arc lengths to the conflict point and speeds of both vehicles at
/// one follower frame.
struct ApproachSample {
  double t = 0.0;
  double d_f = 0.0;
  double v_f = 0.0;
  double d_l = 0.0;
  double v_l = 0.0;
};

struct TaSample {
  double t = 0.0;
  std::optional<double> ta;  // undefined when either speed is at standstill
};

// Window reductions.
std::optional<double> min_ttc(std::span<const ApproachSample> window, ConflictKind kind);
double mrd(std::span<const ApproachSample> window);  // kMetricUndefined on an empty window
std::vector<TaSample> ta_series(std::span<const ApproachSample> window);
inline double pet(double t_follower_arrive, double t_leader_exit) { return t_follower_arrive - t_leader_exit; }

/// Samples at the follower's frames in [conflict.window_start, t_end].
std::vector<ApproachSample> approach_samples(const conflict::Conflict& c, const conflict::TrackPath& leader,
                                             const conflict::TrackPath& follower, double t_end);

struct ProfileSample {
  double t_rel = 0.0;
  double v = 0.0;
  double a = 0.0;
};

struct ProfileSegment {
  std::string conflict_id;
  std::string role = "follower";
  std::vector<ProfileSample> samples;

  double avg_speed() const;
  double avg_accel() const;
};

/// Start from standstill: the last run of frames with v < kStandstillSpeed
/// lasting at least kMinStandstill inside [window_start, t_follower_arrive]
/// and followed by motion. t_rel = 0 at the last still frame; the segment
/// ends at kProfileCap or at the conflict point.
std::optional<ProfileSegment> standstill_profile(const conflict::Conflict& c, const TrajectoryTrack& follower);

struct MetricBundle {
  std::string conflict_id;
  std::string scenario_id;
  DataSource source = DataSource::kSynthetic;
  ConflictKind kind = ConflictKind::kCrossing;
  InteractionClass klass = InteractionClass::kHvHv;
  double pet = 0.0;
  std::optional<double> min_ttc;
  double mrd = 0.0;
  std::vector<TaSample> ta_series;
  double follower_speed_at_cp = 0.0;
  std::optional<double> avg_speed;  // from the standstill profile
  std::optional<double> avg_accel;
  std::optional<ProfileSegment> profile;
};

/// Throws kPrecondition when the conflict's tracks are not in the scenario.
MetricBundle compute_metrics(const conflict::Conflict& c, const Scenario& scenario);

}  // namespace avix::metrics
