#include <cmath>
#include <numbers>

#include "avix/core/error.hpp"
#include "avix/core/geometry.hpp"
#include "avix/core/model.hpp"
#include "doctest.h"

using namespace avix;

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

TrajectoryTrack two_point_track() {
  TrajectoryTrack tr;
  tr.track_id = "a";
  tr.points = {{0.0, 0.0, 0.0, 1.0}, {0.1, 0.1, 0.0, 1.0}};
  return tr;
}

}  // namespace

TEST_CASE("interaction class follows leader then follower") {
  CHECK(interaction_class(AgentClass::kAv, AgentClass::kHv) == InteractionClass::kAvHv);
  CHECK(interaction_class(AgentClass::kHv, AgentClass::kHv) == InteractionClass::kHvHv);
  CHECK(interaction_class(AgentClass::kHv, AgentClass::kAv) == InteractionClass::kHvAv);
}

TEST_CASE("AV-AV and non-vehicle pairs are unsupported") {
  CHECK(code_of([] { interaction_class(AgentClass::kAv, AgentClass::kAv); }) == ErrorCode::kUnsupportedPair);
  CHECK(code_of([] { interaction_class(AgentClass::kOther, AgentClass::kHv); }) == ErrorCode::kUnsupportedPair);
}

TEST_CASE("enum names round trip") {
  for (auto c : {InteractionClass::kHvHv, InteractionClass::kAvHv, InteractionClass::kHvAv}) {
    CHECK(parse_interaction_class(to_string(c)) == c);
  }
  for (auto c : {AgentClass::kAv, AgentClass::kHv, AgentClass::kOther}) CHECK(parse_agent_class(to_string(c)) == c);
  for (auto s : {DataSource::kWaymo, DataSource::kLyft, DataSource::kSynthetic}) {
    CHECK(parse_data_source(to_string(s)) == s);
  }
  for (auto k : {ConflictKind::kMerging, ConflictKind::kCrossing}) CHECK(parse_conflict_kind(to_string(k)) == k);
  CHECK(to_string(InteractionClass::kHvAv) == "HV-AV");
  CHECK_FALSE(parse_agent_class("bus").has_value());
}

TEST_CASE("track validation names the offending field") {
  auto tr = two_point_track();
  CHECK_NOTHROW(validate(tr));

  SUBCASE("negative speed") {
    tr.points[1].v = -1.0;
    try {
      validate(tr);
      FAIL("no throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kValidation);
      CHECK(std::string(e.what()).find("\"v\"") != std::string::npos);
    }
  }
  SUBCASE("time not increasing") {
    tr.points[1].t = 0.0;
    CHECK(code_of([&] { validate(tr); }) == ErrorCode::kValidation);
  }
  SUBCASE("non-finite position") {
    tr.points[0].x = std::nan("");
    CHECK(code_of([&] { validate(tr); }) == ErrorCode::kValidation);
  }
}

TEST_CASE("lane needs two centerline points") {
  LanePolyline lane{"L", {{0, 0}}, LaneRole::kApproach};
  CHECK(code_of([&] { validate(lane); }) == ErrorCode::kValidation);
  lane.centerline.push_back({1, 0});
  CHECK_NOTHROW(validate(lane));
}

TEST_CASE("scenario lookup by track id") {
  Scenario s;
  s.scenario_id = "s";
  s.duration = 1.0;
  s.tracks = {two_point_track()};
  CHECK(s.find_track("a") != nullptr);
  CHECK(s.find_track("b") == nullptr);
}

TEST_CASE("geometry helpers") {
  SUBCASE("segment intersection") {
    const auto hit = intersect_segments({-1, 0}, {1, 0}, {0, -1}, {0, 1});
    REQUIRE(hit);
    CHECK(hit->u == doctest::Approx(0.5));
    CHECK(hit->w == doctest::Approx(0.5));
    CHECK_FALSE(intersect_segments({0, 0}, {1, 0}, {0, 1}, {1, 1}));
    CHECK_FALSE(intersect_segments({0, 0}, {0, 0}, {0, 0}, {1, 0}));
  }
  SUBCASE("collinear overlap reports the point nearest p0") {
    const auto hit = intersect_segments({0, 0}, {4, 0}, {3, 0}, {1, 0});
    REQUIRE(hit);
    CHECK(hit->u == doctest::Approx(0.25));
  }
  SUBCASE("polyline projection arc") {
    const std::vector<Vec2> line{{0, 0}, {10, 0}, {10, 10}};
    const auto p = project_onto_polyline({12, 4}, line);
    CHECK(p.arc == doctest::Approx(14.0));
    CHECK(p.distance == doctest::Approx(2.0));
    CHECK(cumulative_arc_length(line).back() == doctest::Approx(20.0));
  }
  SUBCASE("angle wrap") {
    CHECK(std::abs(wrap_angle(3 * std::numbers::pi)) == doctest::Approx(std::numbers::pi));
    CHECK(wrap_angle(2 * std::numbers::pi + 0.25) == doctest::Approx(0.25));
    CHECK(wrap_angle(-0.5) == doctest::Approx(-0.5));
  }
  SUBCASE("hull and distance") {
    const auto hull = convex_hull({{0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}});
    CHECK(hull.size() == 4);
    CHECK(distance_to_hull({1, 1}, hull) == 0.0);
    CHECK(distance_to_hull({5, 1}, hull) == doctest::Approx(3.0));
  }
}
