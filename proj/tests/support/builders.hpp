#pragma once

// Scenario construction and transforms shared by the unit and acceptance tests.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "avix/core/model.hpp"
#include "avix/io/scenario_io.hpp"

namespace avix::testing {

inline std::filesystem::path fixture_dir() { return AVIX_FIXTURE_DIR; }
inline std::filesystem::path oracle_dir() { return AVIX_ORACLE_DIR; }

inline nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return nlohmann::json::parse(in);
}

struct State {
  double x = 0.0;
  double y = 0.0;
  double v = 0.0;
};

// Frames at k / 10 s for k = 0 .. round(duration * 10).
inline TrajectoryTrack sample_track(std::string id, AgentClass cls, double duration,
                                    const std::function<State(double)>& at) {
  TrajectoryTrack tr;
  tr.track_id = std::move(id);
  tr.agent_class = cls;
  const int frames = static_cast<int>(std::lround(duration * 10.0));
  for (int k = 0; k <= frames; ++k) {
    const double t = k / 10.0;
    const State s = at(t);
    TrajectoryPoint p;
    p.t = t;
    p.x = s.x;
    p.y = s.y;
    p.v = s.v;
    tr.points.push_back(p);
  }
  return tr;
}

inline Scenario make_scenario(std::string id, std::vector<TrajectoryTrack> tracks, double duration,
                              std::string map_ref = "town_4way") {
  Scenario s;
  s.scenario_id = std::move(id);
  s.source = DataSource::kSynthetic;
  s.duration = duration;
  s.map_ref = std::move(map_ref);
  s.tracks = std::move(tracks);
  s.smoothed = true;
  return s;
}

inline io::MapBundle four_way_map() { return io::read_map(fixture_dir() / "map_4way.json"); }

// Rigid planar motion p -> R(theta) p + (dx, dy).
struct RigidMotion {
  double theta = 0.0;
  double dx = 0.0;
  double dy = 0.0;

  Vec2 operator()(Vec2 p) const {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c * p.x - s * p.y + dx, s * p.x + c * p.y + dy};
  }
};

inline Scenario moved(Scenario s, const RigidMotion& m) {
  for (auto& tr : s.tracks) {
    for (auto& p : tr.points) {
      const Vec2 q = m({p.x, p.y});
      p.x = q.x;
      p.y = q.y;
    }
  }
  return s;
}

inline io::MapBundle moved(io::MapBundle map, const RigidMotion& m) {
  for (auto& sign : map.stop_signs) {
    const Vec2 q = m(sign.position());
    sign.x = q.x;
    sign.y = q.y;
  }
  for (auto& lane : map.lanes) {
    for (auto& p : lane.centerline) p = m(p);
  }
  return map;
}

// Shifts the clock of every track (or of one track) by dt and stretches the
// scenario so all frames stay inside it.
inline Scenario time_shifted(Scenario s, double dt, const std::string& only_track = {}) {
  for (auto& tr : s.tracks) {
    if (!only_track.empty() && tr.track_id != only_track) continue;
    for (auto& p : tr.points) p.t += dt;
  }
  s.duration += dt;
  return s;
}

// Constant-speed crossing at the 4-way fixture: leader eastbound on y = -1.75
// at v_l reaching x = 1.75 at t_l, follower northbound on x = 1.75 at v_f
// reaching y = -1.75 at t_f.
struct ConstantCrossing {
  double v_l = 10.0;
  double t_l = 6.0;
  double v_f = 5.0;
  double t_f = 8.5;
  double duration = 16.0;

  Scenario scenario() const {
    auto leader = sample_track("lead", AgentClass::kHv, duration, [this](double t) {
      return State{1.75 + v_l * (t - t_l), -1.75, v_l};
    });
    auto follower = sample_track("follow", AgentClass::kAv, duration, [this](double t) {
      return State{1.75, -1.75 + v_f * (t - t_f), v_f};
    });
    return make_scenario("const_cross", {leader, follower}, duration);
  }
};

// Follower brakes from v0 at rate a1 to a stop, waits, then accelerates at a2
// and reaches the conflict point on a frame. The leader holds v_l.
struct StopAndGoCrossing {
  double v0 = 6.0;
  double a1 = 2.0;
  double dwell = 2.0;
  double a2 = 2.0;
  double go_time = 4.0;  // from moving off to the conflict point
  double v_l = 8.0;
  double t_leader_exit = 7.0;
  double clearance = 2.5;
  double duration = 14.0;

  double t_stop() const { return v0 / a1; }
  double t_go() const { return t_stop() + dwell; }
  double t_arrive() const { return t_go() + go_time; }
  double brake_distance() const { return v0 * v0 / (2.0 * a1); }
  double cp_arc() const { return brake_distance() + 0.5 * a2 * go_time * go_time; }
  double t_leader_arrive() const { return t_leader_exit - clearance / v_l; }

  // Follower arc length and speed at t.
  State follower(double t) const {
    if (t <= t_stop()) return {0.0, v0 * t - 0.5 * a1 * t * t, v0 - a1 * t};
    if (t <= t_go()) return {0.0, brake_distance(), 0.0};
    const double u = t - t_go();
    return {0.0, brake_distance() + 0.5 * a2 * u * u, a2 * u};
  }
  double leader_x(double t) const { return 1.75 + clearance + v_l * (t - t_leader_exit); }

  Scenario scenario() const {
    auto leader = sample_track("lead", AgentClass::kHv, duration, [this](double t) {
      return State{leader_x(t), -1.75, v_l};
    });
    auto follower = sample_track("follow", AgentClass::kAv, duration, [this](double t) {
      const State s = this->follower(t);
      return State{1.75, -1.75 - cp_arc() + s.y, s.v};
    });
    return make_scenario("stop_go_cross", {leader, follower}, duration);
  }
};

}  // namespace avix::testing
