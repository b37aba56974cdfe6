#pragma once

// All-way-stop intersection detection from map stop signs.

#include <span>
#include <string>
#include <vector>

#include "avix/core/model.hpp"
#include "avix/io/scenario_io.hpp"

namespace avix::intersection {

struct ClusterSpec {
  double link_distance = 45.0;
  std::size_t min_signs = 3;
  double radius_buffer = 5.0;

  void validate() const;  // throws kParameter
};

struct Intersection {
  std::string intersection_id;
  Vec2 center;
  double radius = 0.0;
  std::vector<std::string> sign_ids;
  std::vector<std::string> approach_lanes;
  std::vector<std::string> exit_lanes;
  std::size_t n_legs = 0;

  bool contains(Vec2 p) const { return distance(p, center) <= radius; }
};

using SignCluster = std::vector<StopSign>;

/// Single-linkage connected components of the relation dist <= link_distance.
/// Every input index appears in exactly one component; components are ordered
/// by their smallest index and members ascend.
std::vector<std::vector<std::size_t>> connected_components(std::span<const StopSign> signs, double link_distance);

/// Connected components with fewer than min_signs members dropped.
std::vector<SignCluster> cluster_stop_signs(std::span<const StopSign> signs, const ClusterSpec& spec = {});

/// An approach leg: approach lanes whose travel heading at the boundary falls
/// into the same 30 degree bin.
struct Leg {
  int bearing_bin = 0;
  std::vector<std::string> lane_ids;
  bool controlled = false;
};

/// Approach legs entering the cluster's convex hull expanded by radius_buffer.
/// Lanes controlled by a member sign always count. Throws kValidation when no
/// lane data is supplied.
std::vector<Leg> approach_legs(const SignCluster& cluster, std::span<const LanePolyline> lanes,
                               const ClusterSpec& spec = {});

/// True when every approach leg has a stop sign from the cluster.
bool validate_all_way(const SignCluster& cluster, std::span<const LanePolyline> lanes, const ClusterSpec& spec = {});

/// Centroid of the signs, radius = farthest sign + radius_buffer, and the lanes
/// that end (approach) or start (exit) inside that disk.
Intersection build_intersection(const SignCluster& cluster, std::span<const LanePolyline> lanes,
                                const ClusterSpec& spec, std::string intersection_id);

/// Cluster, validate and build every all-way-stop intersection of a map.
/// Ids are "<map_id>/I<k>" in cluster order.
std::vector<Intersection> detect_intersections(const io::MapBundle& map, const ClusterSpec& spec = {});

}  // namespace avix::intersection
