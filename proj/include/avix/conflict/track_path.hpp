#pragma once

#include <optional>
#include <span>
#include <vector>

#include "avix/core/model.hpp"

namespace avix::conflict {

/// Arc-length view of a track: cumulative chord length of its positions with
/// linear interpolation between frames.
class TrackPath {
 public:
  explicit TrackPath(const TrajectoryTrack& track);

  std::span<const Vec2> positions() const { return positions_; }
  std::span<const double> times() const { return times_; }
  std::span<const double> arcs() const { return arcs_; }
  std::span<const double> speeds() const { return speeds_; }

  double start_time() const { return times_.front(); }
  double end_time() const { return times_.back(); }
  bool covers(double t) const { return t >= times_.front() - 1e-9 && t <= times_.back() + 1e-9; }

  /// First instant the track reaches arc length s; nullopt if it never does.
  std::optional<double> time_at_arc(double s) const;

  // Linear interpolation at time t; nullopt outside the track's time span.
  std::optional<double> arc_at(double t) const;
  std::optional<double> speed_at(double t) const;
  std::optional<Vec2> position_at(double t) const;

  /// |last - first| position.
  double net_displacement() const;

 private:
  std::optional<std::pair<std::size_t, double>> locate(double t) const;

  std::vector<Vec2> positions_;
  std::vector<double> times_;
  std::vector<double> arcs_;
  std::vector<double> speeds_;
};

}  // namespace avix::conflict
