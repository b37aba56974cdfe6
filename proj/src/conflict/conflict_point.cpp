#include <algorithm>
#include <cmath>
#include <limits>

#include "avix/conflict/conflict.hpp"
#include "avix/core/error.hpp"

namespace avix::conflict {

void ConflictSpec::validate() const {
  if (!(pet_max > 0.0)) throw Error(ErrorCode::kParameter, "pet_max must be positive");
  if (!(speed_change_min > 0.0)) throw Error(ErrorCode::kParameter, "speed_change_min must be positive");
  if (!(merge_buffer > 0.0)) throw Error(ErrorCode::kParameter, "merge_buffer must be positive");
  if (!(clearance >= 0.0)) throw Error(ErrorCode::kParameter, "clearance must be non-negative");
  if (!(approach_margin >= 0.0)) throw Error(ErrorCode::kParameter, "approach_margin must be non-negative");
  if (!(lane_match_distance > 0.0)) throw Error(ErrorCode::kParameter, "lane_match_distance must be positive");
}

namespace {

constexpr double kNoHit = std::numeric_limits<double>::infinity();

// Smallest root in [0, 1] of |p + u d - c|^2 = r^2.
double circle_entry(Vec2 p, Vec2 d, Vec2 c, double r) {
  const Vec2 f = p - c;
  const double A = dot(d, d);
  const double B = 2.0 * dot(f, d);
  const double C = dot(f, f) - r * r;
  const double disc = B * B - 4.0 * A * C;
  if (A == 0.0 || disc < 0.0) return kNoHit;
  const double sq = std::sqrt(disc);
  for (double u : {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)}) {
    if (u >= 0.0 && u <= 1.0) return u;
  }
  return kNoHit;
}

// First parameter u in [0, 1] at which p + u d comes within r of segment [q0, q1]
// (entry into the capsule around the segment).
double capsule_entry(Vec2 p, Vec2 d, Vec2 q0, Vec2 q1, double r) {
  if (project_onto_segment(p, q0, q1).distance <= r) return 0.0;
  double best = std::min(circle_entry(p, d, q0, r), circle_entry(p, d, q1, r));
  const Vec2 e = q1 - q0;
  const double len = norm(e);
  if (len > 0.0) {
    const Vec2 along = (1.0 / len) * e;
    const Vec2 normal{-along.y, along.x};
    const double h0 = dot(p - q0, normal);
    const double dh = dot(d, normal);
    if (dh != 0.0) {
      for (double side : {r, -r}) {
        const double u = (side - h0) / dh;
        if (u < 0.0 || u > 1.0 || u >= best) continue;
        const double proj = dot(p + u * d - q0, along);
        if (proj >= 0.0 && proj <= len) best = u;
      }
    }
  }
  return best;
}

std::optional<ConflictPoint> first_crossing(std::span<const Vec2> a, std::span<const Vec2> b) {
  const auto arc_a = cumulative_arc_length(a);
  const auto arc_b = cumulative_arc_length(b);
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    double best_u = kNoHit;
    std::size_t best_j = 0;
    double best_w = 0.0;
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      const auto hit = intersect_segments(a[i], a[i + 1], b[j], b[j + 1]);
      if (hit && hit->u < best_u) {
        best_u = hit->u;
        best_w = hit->w;
        best_j = j;
      }
    }
    if (best_u == kNoHit) continue;
    ConflictPoint cp;
    cp.point = a[i] + best_u * (a[i + 1] - a[i]);
    cp.arc_a = arc_a[i] + best_u * (arc_a[i + 1] - arc_a[i]);
    cp.arc_b = arc_b[best_j] + best_w * (arc_b[best_j + 1] - arc_b[best_j]);
    return cp;
  }
  return std::nullopt;
}

std::optional<ConflictPoint> first_contact(std::span<const Vec2> a, std::span<const Vec2> b, double gap) {
  const auto arc_a = cumulative_arc_length(a);
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    const Vec2 d = a[i + 1] - a[i];
    double best_u = kNoHit;
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      best_u = std::min(best_u, capsule_entry(a[i], d, b[j], b[j + 1], gap));
      if (best_u == 0.0) break;
    }
    if (best_u == kNoHit) continue;
    const Vec2 on_a = a[i] + best_u * d;
    const auto on_b = project_onto_polyline(on_a, b);
    ConflictPoint cp;
    cp.point = 0.5 * (on_a + on_b.point);
    cp.arc_a = arc_a[i] + best_u * (arc_a[i + 1] - arc_a[i]);
    cp.arc_b = on_b.arc;
    return cp;
  }
  return std::nullopt;
}

}  // namespace

std::optional<ConflictPoint> find_conflict_point(std::span<const Vec2> path_a, std::span<const Vec2> path_b,
                                                 ConflictKind kind, const ConflictSpec& spec) {
  if (path_a.size() < 2 || path_b.size() < 2) {
    throw Error(ErrorCode::kPrecondition, "find_conflict_point needs polylines with at least 2 points");
  }
  if (kind == ConflictKind::kCrossing) return first_crossing(path_a, path_b);
  return first_contact(path_a, path_b, 2.0 * spec.merge_buffer);
}

}  // namespace avix::conflict
