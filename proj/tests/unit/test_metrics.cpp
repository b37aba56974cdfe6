#include <cmath>

#include "avix/conflict/conflict.hpp"
#include "avix/core/error.hpp"
#include "avix/metrics/metrics.hpp"
#include "avix/smoothing/smoothing.hpp"
#include "doctest.h"
#include "support/builders.hpp"

using namespace avix;
using namespace avix::metrics;
using avix::testing::State;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected avix::Error");
  return ErrorCode::kInternal;
}

conflict::Conflict stop_and_go_conflict(const testing::StopAndGoCrossing& sg) {
  static const auto map = testing::four_way_map();
  static const auto ixs = intersection::detect_intersections(map);
  auto found = conflict::detect_conflicts(sg.scenario(), ixs.at(0), map);
  REQUIRE(found.size() == 1);
  return found[0];
}

}  // namespace

TEST_CASE("per-frame formulas") {
  CHECK(ttc_crossing(20, 5).value() == doctest::Approx(4.0));
  CHECK_FALSE(ttc_crossing(20, 0));
  CHECK(ttc_crossing(0, 5).value() == 0.0);
  CHECK(code_of([] { ttc_crossing(-1, 5); }) == ErrorCode::kDomain);

  CHECK(ttc_merging(15, 8, 5).value() == doctest::Approx(5.0));
  CHECK_FALSE(ttc_merging(15, 5, 5));
  CHECK_FALSE(ttc_merging(15, 4, 5));
  CHECK(code_of([] { ttc_merging(-1, 8, 5); }) == ErrorCode::kDomain);

  CHECK(required_deceleration(25, 10) == doctest::Approx(2.0));
  CHECK(time_advantage(30, 10, 10, 10).value() == doctest::Approx(2.0));
  CHECK(time_advantage(12, 6, 12, 6).value() == 0.0);
  CHECK_FALSE(time_advantage(30, 0, 10, 10));
  CHECK(pet(12.0, 8.0) == doctest::Approx(4.0));
  CHECK(pet(8.0, 8.0) == 0.0);
}

TEST_CASE("window reductions") {
  const std::vector<ApproachSample> w{{0.0, 40, 10, 30, 10}, {0.1, 30, 10, 20, 10}, {0.2, 0.3, 2, 1, 10}};
  CHECK(min_ttc(w, ConflictKind::kCrossing).value() == doctest::Approx(0.15));
  // The last frame is inside the singularity guard.
  CHECK(mrd(w) == doctest::Approx(100.0 / 60.0));
  const auto ta = ta_series(w);
  REQUIRE(ta.size() == 3);
  CHECK(ta[0].ta.value() == doctest::Approx(1.0));

  SUBCASE("stationary follower") {
    const std::vector<ApproachSample> still{{0.0, 10, 0, 5, 5}, {0.1, 10, 0, 4.5, 5}};
    CHECK(mrd(still) == 0.0);
    CHECK_FALSE(min_ttc(still, ConflictKind::kCrossing));
    CHECK_FALSE(ta_series(still)[0].ta);
  }
  SUBCASE("empty window") { CHECK(code_of([] { mrd({}); }) == ErrorCode::kMetricUndefined); }
  SUBCASE("decelerating follower has its minimum at the first frame") {
    std::vector<ApproachSample> dec;
    for (int k = 0; k < 20; ++k) {
      const double t = k / 10.0;
      dec.push_back({t, 40.0 - (8.0 * t - t * t), 8.0 - 2.0 * t, 50, 10});
    }
    double brute = 1e9;
    for (const auto& s : dec) brute = std::min(brute, s.d_f / s.v_f);
    CHECK(min_ttc(dec, ConflictKind::kCrossing).value() == doctest::Approx(brute));
    CHECK(brute == doctest::Approx(40.0 / 8.0));
  }
}

TEST_CASE("stop-and-go metrics") {
  const testing::StopAndGoCrossing sg;
  const auto c = stop_and_go_conflict(sg);
  const auto m = compute_metrics(c, sg.scenario());
  CHECK(m.pet == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(m.klass == InteractionClass::kHvAv);
  CHECK(m.follower_speed_at_cp == doctest::Approx(8.0).epsilon(1e-9));
  REQUIRE(m.profile);
  CHECK(m.avg_speed.value() == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(m.profile->samples.front().t_rel == 0.0);
  CHECK(m.profile->samples.front().v < kStandstillSpeed);
  CHECK_FALSE(m.ta_series.empty());
}

TEST_CASE("follower speed is interpolated between frames") {
  // Linear deceleration 8 -> 4 m/s; the conflict point sits between frames.
  const double a = 1.0;
  const double s_cp = 8.0 * 2.05 - 0.5 * a * 2.05 * 2.05;
  auto follower = testing::sample_track("f", AgentClass::kHv, 4.0, [=](double t) {
    return State{0.0, 8.0 * t - 0.5 * a * t * t - s_cp, 8.0 - a * t};
  });
  auto leader = testing::sample_track("l", AgentClass::kAv, 4.0, [](double t) {
    return State{-20.0 + 10.0 * t, 0.0, 10.0};
  });
  const auto s = testing::make_scenario("interp", {leader, follower}, 4.0);
  conflict::Conflict c;
  c.conflict_id = "c";
  c.scenario_id = "interp";
  c.leader_track_id = "l";
  c.follower_track_id = "f";
  c.klass = InteractionClass::kAvHv;
  c.t_leader_arrive = 2.0;
  c.t_leader_exit = 2.0;
  c.t_follower_arrive = 2.05;
  c.leader_cp_arc = 20.0;
  c.follower_cp_arc = s_cp;
  const auto m = compute_metrics(c, s);
  CHECK(m.follower_speed_at_cp == doctest::Approx(8.0 - a * 2.05).epsilon(1e-9));
  CHECK_FALSE(m.profile);
  CHECK_FALSE(m.avg_speed);

  c.follower_track_id = "missing";
  CHECK(code_of([&] { compute_metrics(c, s); }) == ErrorCode::kPrecondition);
}

TEST_CASE("standstill profile recovers a unit ramp") {
  // Stopped for 2 s, then v = min(t, 6).
  auto follower = testing::sample_track("f", AgentClass::kHv, 12.0, [](double t) {
    const double u = std::max(0.0, t - 2.0);
    const double v = std::min(u, 6.0);
    const double s = u <= 6.0 ? 0.5 * u * u : 18.0 + 6.0 * (u - 6.0);
    return State{0.0, s - 40.0, v};
  });
  std::vector<double> v, t;
  for (const auto& p : follower.points) {
    v.push_back(p.v);
    t.push_back(p.t);
  }
  const auto acc = smoothing::central_difference(v, t);
  for (std::size_t i = 0; i < acc.size(); ++i) follower.points[i].a = acc[i];

  conflict::Conflict c;
  c.conflict_id = "c";
  c.window_start = 0.0;
  c.t_follower_arrive = 11.0;
  const auto prof = standstill_profile(c, follower);
  REQUIRE(prof);
  CHECK(prof->samples.front().t_rel == 0.0);
  CHECK(prof->samples.back().t_rel == doctest::Approx(kProfileCap));
  for (const auto& s : prof->samples) {
    if (s.t_rel > 0.15 && s.t_rel < 5.85) CHECK(s.a == doctest::Approx(1.0).epsilon(0.05));
  }

  auto moving = testing::sample_track("m", AgentClass::kHv, 12.0, [](double t) { return State{0, t, 1.0}; });
  CHECK_FALSE(standstill_profile(c, moving));
}
