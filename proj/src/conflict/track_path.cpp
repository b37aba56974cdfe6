#include "avix/conflict/track_path.hpp"

#include <algorithm>

#include "avix/core/error.hpp"

namespace avix::conflict {

TrackPath::TrackPath(const TrajectoryTrack& track) {
  for (const auto& p : track.points) {
    if (!p.valid) continue;
    positions_.push_back(p.position());
    times_.push_back(p.t);
    speeds_.push_back(p.v);
  }
  if (positions_.size() < 2) {
    throw Error(ErrorCode::kPrecondition, "track " + track.track_id + " has fewer than 2 valid points");
  }
  arcs_ = cumulative_arc_length(positions_);
}

std::optional<double> TrackPath::time_at_arc(double s) const {
  if (s <= arcs_.front()) return times_.front();
  if (s > arcs_.back()) return std::nullopt;
  // First segment whose end reaches s; arcs_ is non-decreasing.
  const auto it = std::lower_bound(arcs_.begin(), arcs_.end(), s);
  const auto i = static_cast<std::size_t>(it - arcs_.begin());
  const double s0 = arcs_[i - 1];
  const double s1 = arcs_[i];
  const double w = (s - s0) / (s1 - s0);  // s1 > s0 because s0 < s <= s1
  return times_[i - 1] + w * (times_[i] - times_[i - 1]);
}

std::optional<std::pair<std::size_t, double>> TrackPath::locate(double t) const {
  if (!covers(t)) return std::nullopt;
  if (t <= times_.front()) return std::pair<std::size_t, double>{0, 0.0};
  if (t >= times_.back()) return std::pair<std::size_t, double>{times_.size() - 2, 1.0};
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto i = static_cast<std::size_t>(it - times_.begin()) - 1;
  const double w = (t - times_[i]) / (times_[i + 1] - times_[i]);
  return std::pair<std::size_t, double>{i, w};
}

std::optional<double> TrackPath::arc_at(double t) const {
  const auto loc = locate(t);
  if (!loc) return std::nullopt;
  const auto [i, w] = *loc;
  return arcs_[i] + w * (arcs_[i + 1] - arcs_[i]);
}

std::optional<double> TrackPath::speed_at(double t) const {
  const auto loc = locate(t);
  if (!loc) return std::nullopt;
  const auto [i, w] = *loc;
  return speeds_[i] + w * (speeds_[i + 1] - speeds_[i]);
}

std::optional<Vec2> TrackPath::position_at(double t) const {
  const auto loc = locate(t);
  if (!loc) return std::nullopt;
  const auto [i, w] = *loc;
  return positions_[i] + w * (positions_[i + 1] - positions_[i]);
}

double TrackPath::net_displacement() const { return distance(positions_.front(), positions_.back()); }

}  // namespace avix::conflict
