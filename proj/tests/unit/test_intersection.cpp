#include <cmath>

#include "avix/core/error.hpp"
#include "avix/intersection/intersection.hpp"
#include "doctest.h"
#include "support/builders.hpp"

using namespace avix;
using namespace avix::intersection;

namespace {

StopSign sign(std::string id, double x, double y, std::string lane = {}) { return {std::move(id), x, y, std::move(lane)}; }

LanePolyline lane(std::string id, LaneRole role, std::vector<Vec2> pts) { return {std::move(id), std::move(pts), role}; }

// Plus-shaped junction centred at the origin with approach lanes from the
// given sides ("S", "N", "W", "E").
std::vector<LanePolyline> plus_lanes(const std::string& sides) {
  std::vector<LanePolyline> out;
  for (char c : sides) {
    switch (c) {
      case 'S':
        out.push_back(lane("S_in", LaneRole::kApproach, {{1.75, -80}, {1.75, -8}}));
        out.push_back(lane("S_out", LaneRole::kExit, {{-1.75, -8}, {-1.75, -80}}));
        break;
      case 'N':
        out.push_back(lane("N_in", LaneRole::kApproach, {{-1.75, 80}, {-1.75, 8}}));
        out.push_back(lane("N_out", LaneRole::kExit, {{1.75, 8}, {1.75, 80}}));
        break;
      case 'W':
        out.push_back(lane("W_in", LaneRole::kApproach, {{-80, -1.75}, {-8, -1.75}}));
        out.push_back(lane("W_out", LaneRole::kExit, {{-8, 1.75}, {-80, 1.75}}));
        break;
      case 'E':
        out.push_back(lane("E_in", LaneRole::kApproach, {{80, 1.75}, {8, 1.75}}));
        out.push_back(lane("E_out", LaneRole::kExit, {{8, -1.75}, {80, -1.75}}));
        break;
    }
  }
  return out;
}

SignCluster plus_signs(const std::string& sides) {
  SignCluster out;
  for (char c : sides) {
    switch (c) {
      case 'S': out.push_back(sign("sS", 4, -9, "S_in")); break;
      case 'N': out.push_back(sign("sN", -4, 9, "N_in")); break;
      case 'W': out.push_back(sign("sW", -9, -4, "W_in")); break;
      case 'E': out.push_back(sign("sE", 9, 4, "E_in")); break;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("clustering") {
  SUBCASE("empty input") { CHECK(cluster_stop_signs({}).empty()); }
  SUBCASE("three signs 10 m apart form one cluster") {
    const std::vector<StopSign> s{sign("a", 0, 0), sign("b", 10, 0), sign("c", 5, 10 * std::sqrt(3.0) / 2)};
    const auto c = cluster_stop_signs(s);
    REQUIRE(c.size() == 1);
    CHECK(c[0].size() == 3);
  }
  SUBCASE("two triplets 200 m apart") {
    std::vector<StopSign> s;
    for (double ox : {0.0, 200.0}) {
      for (int k = 0; k < 3; ++k) s.push_back(sign("s" + std::to_string(s.size()), ox + 5 * k, 0));
    }
    CHECK(cluster_stop_signs(s).size() == 2);
  }
  SUBCASE("single linkage chains") {
    const std::vector<StopSign> s{sign("A", 0, 0), sign("B", 40, 0), sign("C", 80, 0)};
    const auto comps = connected_components(s, 45.0);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0] == std::vector<std::size_t>{0, 1, 2});
  }
  SUBCASE("components partition the input in canonical order") {
    const std::vector<StopSign> s{sign("a", 0, 0), sign("b", 500, 0), sign("c", 10, 0), sign("d", 505, 0),
                                  sign("e", 1000, 0)};
    const auto comps = connected_components(s, 45.0);
    REQUIRE(comps.size() == 3);
    CHECK(comps[0] == std::vector<std::size_t>{0, 2});
    CHECK(comps[1] == std::vector<std::size_t>{1, 3});
    CHECK(comps[2] == std::vector<std::size_t>{4});
    CHECK(cluster_stop_signs(s).empty());
  }
  SUBCASE("bad spec") {
    ClusterSpec spec;
    spec.link_distance = -1;
    CHECK_THROWS_AS(spec.validate(), Error);
  }
}

TEST_CASE("all-way validation") {
  SUBCASE("four legs with four signs") { CHECK(validate_all_way(plus_signs("SNWE"), plus_lanes("SNWE"))); }
  SUBCASE("four legs with three signs is prioritized") {
    CHECK_FALSE(validate_all_way(plus_signs("SNW"), plus_lanes("SNWE")));
  }
  SUBCASE("T junction with three signs") { CHECK(validate_all_way(plus_signs("SWE"), plus_lanes("SWE"))); }
  SUBCASE("no lane data") {
    try {
      validate_all_way(plus_signs("SNWE"), {});
      FAIL("no throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kValidation);
    }
  }
  SUBCASE("legs") { CHECK(approach_legs(plus_signs("SNWE"), plus_lanes("SNWE")).size() == 4); }
}

TEST_CASE("intersection geometry") {
  const ClusterSpec spec;
  SUBCASE("20 m square") {
    const SignCluster sq{sign("a", 0, 0), sign("b", 20, 0), sign("c", 20, 20), sign("d", 0, 20)};
    const auto ix = build_intersection(sq, {}, spec, "I");
    CHECK(ix.center.x == doctest::Approx(10.0));
    CHECK(ix.center.y == doctest::Approx(10.0));
    CHECK(ix.radius == doctest::Approx(10 * std::sqrt(2.0) + 5));
  }
  SUBCASE("coincident signs give the buffer radius") {
    const SignCluster same{sign("a", 3, 3), sign("b", 3, 3), sign("c", 3, 3)};
    CHECK(build_intersection(same, {}, spec, "I").radius == doctest::Approx(5.0));
  }
  SUBCASE("a displaced sign grows the radius") {
    SignCluster s = plus_signs("SNWE");
    const double r0 = build_intersection(s, {}, spec, "I").radius;
    s[0].y = -30;
    CHECK(build_intersection(s, {}, spec, "I").radius > r0);
  }
  SUBCASE("lanes are attached by role") {
    const auto ix = build_intersection(plus_signs("SNWE"), plus_lanes("SNWE"), spec, "I");
    CHECK(ix.approach_lanes.size() == 4);
    CHECK(ix.exit_lanes.size() == 4);
    CHECK(ix.n_legs == 4);
    CHECK(ix.contains({0, 0}));
    CHECK_FALSE(ix.contains({100, 0}));
  }
}

TEST_CASE("fixture maps") {
  const auto four = detect_intersections(testing::four_way_map());
  REQUIRE(four.size() == 1);
  CHECK(four[0].intersection_id == "town_4way/I1");
  CHECK(four[0].center.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(four[0].radius == doctest::Approx(std::hypot(4.0, 9.0) + 5.0));

  const auto t = detect_intersections(io::read_map(testing::fixture_dir() / "map_t.json"));
  REQUIRE(t.size() == 1);
  CHECK(t[0].n_legs == 3);

  io::MapBundle empty;
  empty.map_id = "e";
  CHECK(detect_intersections(empty).empty());
}
