#include "avix/intersection/intersection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

#include "avix/core/error.hpp"
#include "avix/core/log.hpp"

namespace avix::intersection {

void ClusterSpec::validate() const {
  if (!(link_distance > 0.0)) throw Error(ErrorCode::kParameter, "link_distance must be positive");
  if (min_signs < 3) throw Error(ErrorCode::kParameter, "min_signs must be >= 3");
  if (!(radius_buffer >= 0.0)) throw Error(ErrorCode::kParameter, "radius_buffer must be non-negative");
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;  // smallest index is the root
  }

 private:
  std::vector<std::size_t> parent_;
};

constexpr double kBinWidth = std::numbers::pi / 6.0;

int bearing_bin(double heading) {
  double a = std::fmod(heading, 2.0 * std::numbers::pi);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  return static_cast<int>(std::floor(a / kBinWidth)) % 12;
}

Vec2 end_direction(const LanePolyline& lane) {
  const auto& c = lane.centerline;
  return c[c.size() - 1] - c[c.size() - 2];
}

Vec2 start_direction(const LanePolyline& lane) { return lane.centerline[1] - lane.centerline[0]; }

Vec2 centroid(const SignCluster& cluster) {
  Vec2 sum;
  for (const auto& s : cluster) sum = sum + s.position();
  return (1.0 / static_cast<double>(cluster.size())) * sum;
}

bool is_inward(const LanePolyline& lane, Vec2 center) {
  return dot(end_direction(lane), center - lane.centerline.back()) > 0.0;
}

bool is_outward(const LanePolyline& lane, Vec2 center) {
  return dot(start_direction(lane), lane.centerline.front() - center) > 0.0;
}

}  // namespace

std::vector<std::vector<std::size_t>> connected_components(std::span<const StopSign> signs, double link_distance) {
  DisjointSets sets(signs.size());
  for (std::size_t i = 0; i < signs.size(); ++i) {
    for (std::size_t j = i + 1; j < signs.size(); ++j) {
      if (distance(signs[i].position(), signs[j].position()) <= link_distance) sets.unite(i, j);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> by_root;
  for (std::size_t i = 0; i < signs.size(); ++i) by_root[sets.find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  out.reserve(by_root.size());
  for (auto& [root, members] : by_root) out.push_back(std::move(members));
  return out;
}

std::vector<SignCluster> cluster_stop_signs(std::span<const StopSign> signs, const ClusterSpec& spec) {
  spec.validate();
  std::vector<SignCluster> clusters;
  for (const auto& component : connected_components(signs, spec.link_distance)) {
    if (component.size() < spec.min_signs) continue;
    SignCluster cluster;
    for (std::size_t i : component) cluster.push_back(signs[i]);
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

std::vector<Leg> approach_legs(const SignCluster& cluster, std::span<const LanePolyline> lanes,
                               const ClusterSpec& spec) {
  if (cluster.empty()) throw Error(ErrorCode::kPrecondition, "approach_legs: empty cluster");
  if (lanes.empty()) {
    throw Error(ErrorCode::kValidation, "cannot certify an all-way stop without lane data");
  }
  std::vector<Vec2> sign_points;
  std::set<std::string> controlled;
  for (const auto& s : cluster) {
    sign_points.push_back(s.position());
    controlled.insert(s.lane_id);
  }
  const auto hull = convex_hull(sign_points);
  const Vec2 center = centroid(cluster);
  double farthest = 0.0;
  for (const auto& p : sign_points) farthest = std::max(farthest, distance(p, center));
  // A leg without a sign can end well away from the hull of the signs that do
  // exist, so the intersection disk counts as well.
  const auto near_cluster = [&](Vec2 end) {
    return distance_to_hull(end, hull) <= spec.radius_buffer || distance(end, center) <= farthest + spec.radius_buffer;
  };

  std::map<int, Leg> legs;
  for (const auto& lane : lanes) {
    if (lane.centerline.size() < 2) continue;
    const bool signed_lane = controlled.count(lane.lane_id) > 0;
    if (!signed_lane) {
      if (lane.role == LaneRole::kExit || lane.role == LaneRole::kInternal) continue;
      if (!near_cluster(lane.centerline.back())) continue;
      if (!is_inward(lane, center)) continue;
    }
    const Vec2 dir = end_direction(lane);
    const int bin = bearing_bin(std::atan2(dir.y, dir.x));
    Leg& leg = legs[bin];
    leg.bearing_bin = bin;
    leg.lane_ids.push_back(lane.lane_id);
    leg.controlled |= signed_lane;
  }
  std::vector<Leg> out;
  for (auto& [bin, leg] : legs) out.push_back(std::move(leg));
  return out;
}

bool validate_all_way(const SignCluster& cluster, std::span<const LanePolyline> lanes, const ClusterSpec& spec) {
  const auto legs = approach_legs(cluster, lanes, spec);
  if (legs.empty()) return false;
  return std::all_of(legs.begin(), legs.end(), [](const Leg& l) { return l.controlled; });
}

Intersection build_intersection(const SignCluster& cluster, std::span<const LanePolyline> lanes,
                                const ClusterSpec& spec, std::string intersection_id) {
  if (cluster.empty()) throw Error(ErrorCode::kPrecondition, "build_intersection: empty cluster");
  Intersection ix;
  ix.intersection_id = std::move(intersection_id);
  ix.center = centroid(cluster);
  double farthest = 0.0;
  for (const auto& s : cluster) {
    farthest = std::max(farthest, distance(s.position(), ix.center));
    ix.sign_ids.push_back(s.sign_id);
  }
  ix.radius = farthest + spec.radius_buffer;

  std::set<int> bins;
  for (const auto& lane : lanes) {
    if (lane.centerline.size() < 2) continue;
    if (lane.role != LaneRole::kExit && lane.role != LaneRole::kInternal && ix.contains(lane.centerline.back()) &&
        is_inward(lane, ix.center)) {
      ix.approach_lanes.push_back(lane.lane_id);
      const Vec2 dir = end_direction(lane);
      bins.insert(bearing_bin(std::atan2(dir.y, dir.x)));
    }
    if (lane.role != LaneRole::kApproach && lane.role != LaneRole::kInternal && ix.contains(lane.centerline.front()) &&
        is_outward(lane, ix.center)) {
      ix.exit_lanes.push_back(lane.lane_id);
    }
  }
  ix.n_legs = bins.size();
  return ix;
}

std::vector<Intersection> detect_intersections(const io::MapBundle& map, const ClusterSpec& spec) {
  std::vector<Intersection> out;
  const auto clusters = cluster_stop_signs(map.stop_signs, spec);
  std::size_t k = 0;
  for (const auto& cluster : clusters) {
    ++k;
    if (!validate_all_way(cluster, map.lanes, spec)) {
      log().info("map {}: sign cluster {} is not an all-way stop", map.map_id, k);
      continue;
    }
    out.push_back(build_intersection(cluster, map.lanes, spec, map.map_id + "/I" + std::to_string(k)));
  }
  return out;
}

}  // namespace avix::intersection
