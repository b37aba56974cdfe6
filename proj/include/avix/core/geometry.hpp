#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace avix {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
  friend Vec2 operator*(Vec2 a, double k) { return {k * a.x, k * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Closest point on segment [a, b] to p, with its parameter u in [0, 1].
struct SegmentProjection {
  Vec2 point;
  double u = 0.0;
  double distance = 0.0;
};
SegmentProjection project_onto_segment(Vec2 p, Vec2 a, Vec2 b);

/// Cumulative chord length; element i is the arc length at vertex i.
std::vector<double> cumulative_arc_length(std::span<const Vec2> polyline);

/// Closest point on a polyline. `arc` is the arc-length position of `point`
/// measured along the polyline from its first vertex.
struct PolylineProjection {
  Vec2 point;
  double arc = 0.0;
  double distance = 0.0;
  std::size_t segment = 0;
};
PolylineProjection project_onto_polyline(Vec2 p, std::span<const Vec2> polyline);

/// Intersection of segments [p0, p1] and [q0, q1]. Returns the parameters along
/// each segment of the intersection point closest to p0 (collinear overlaps
/// included). Zero-length segments never intersect.
struct SegmentHit {
  double u = 0.0;  // along p
  double w = 0.0;  // along q
};
std::optional<SegmentHit> intersect_segments(Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1);

/// Wraps an angle into [-pi, pi].
double wrap_angle(double radians);

/// Convex hull (counter-clockwise, no repeated first vertex). Degenerate input
/// yields fewer than three vertices.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

/// Distance from p to the region enclosed by a convex hull; zero inside.
double distance_to_hull(Vec2 p, std::span<const Vec2> hull);

}  // namespace avix
