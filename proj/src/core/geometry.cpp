#include "avix/core/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace avix {

SegmentProjection project_onto_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double u = 0.0;
  if (len2 > 0.0) {
    u = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  }
  const Vec2 q = a + u * ab;
  return {q, u, distance(p, q)};
}

std::vector<double> cumulative_arc_length(std::span<const Vec2> polyline) {
  std::vector<double> arc(polyline.size(), 0.0);
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    arc[i] = arc[i - 1] + distance(polyline[i - 1], polyline[i]);
  }
  return arc;
}

PolylineProjection project_onto_polyline(Vec2 p, std::span<const Vec2> polyline) {
  PolylineProjection best;
  best.distance = std::numeric_limits<double>::infinity();
  if (polyline.empty()) return best;
  if (polyline.size() == 1) {
    return {polyline[0], 0.0, distance(p, polyline[0]), 0};
  }
  double arc = 0.0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    const double len = distance(polyline[i], polyline[i + 1]);
    const auto proj = project_onto_segment(p, polyline[i], polyline[i + 1]);
    if (proj.distance < best.distance) {
      best = {proj.point, arc + proj.u * len, proj.distance, i};
    }
    arc += len;
  }
  return best;
}

std::optional<SegmentHit> intersect_segments(Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1) {
  const Vec2 r = p1 - p0;
  const Vec2 s = q1 - q0;
  const double rr = dot(r, r);
  const double ss = dot(s, s);
  if (rr == 0.0 || ss == 0.0) return std::nullopt;

  const double denom = cross(r, s);
  const Vec2 qp = q0 - p0;
  const double scale = std::sqrt(rr * ss);
  if (std::abs(denom) > 1e-12 * scale) {
    const double u = cross(qp, s) / denom;
    const double w = cross(qp, r) / denom;
    constexpr double kEps = 1e-12;
    if (u < -kEps || u > 1.0 + kEps || w < -kEps || w > 1.0 + kEps) return std::nullopt;
    return SegmentHit{std::clamp(u, 0.0, 1.0), std::clamp(w, 0.0, 1.0)};
  }

  // Parallel: only collinear overlaps count.
  if (std::abs(cross(qp, r)) > 1e-12 * std::sqrt(rr) * std::max(1.0, norm(qp))) {
    return std::nullopt;
  }
  const double t0 = dot(q0 - p0, r) / rr;
  const double t1 = dot(q1 - p0, r) / rr;
  const double lo = std::max(0.0, std::min(t0, t1));
  const double hi = std::min(1.0, std::max(t0, t1));
  if (lo > hi) return std::nullopt;
  const Vec2 hit = p0 + lo * r;
  const double w = std::clamp(dot(hit - q0, s) / ss, 0.0, 1.0);
  return SegmentHit{lo, w};
}

double wrap_angle(double radians) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double a = std::fmod(radians + std::numbers::pi, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a - std::numbers::pi;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end(), [](Vec2 a, Vec2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;

  std::vector<Vec2> hull(2 * points.size());
  std::size_t k = 0;
  for (const Vec2& p : points) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec2& p = points[i];
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

double distance_to_hull(Vec2 p, std::span<const Vec2> hull) {
  if (hull.empty()) return std::numeric_limits<double>::infinity();
  if (hull.size() == 1) return distance(p, hull[0]);
  if (hull.size() == 2) return project_onto_segment(p, hull[0], hull[1]).distance;

  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec2 a = hull[i];
    const Vec2 b = hull[(i + 1) % hull.size()];
    if (cross(b - a, p - a) < 0.0) inside = false;
    best = std::min(best, project_onto_segment(p, a, b).distance);
  }
  return inside ? 0.0 : best;
}

}  // namespace avix
