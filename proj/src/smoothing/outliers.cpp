#include <algorithm>
#include <cmath>

#include "avix/core/error.hpp"
#include "avix/core/log.hpp"
#include "avix/smoothing/smoothing.hpp"

namespace avix::smoothing {

void OutlierSpec::validate() const {
  if (!(min_accel < 0.0 && max_accel > 0.0)) {
    throw Error(ErrorCode::kParameter, "outlier bounds must satisfy min_accel < 0 < max_accel");
  }
  if (neighbor_window < 1) throw Error(ErrorCode::kParameter, "neighbor_window must be >= 1");
}

ClampResult clamp_outliers(std::span<const double> v, double dt, const OutlierSpec& spec) {
  spec.validate();
  if (!(dt > 0.0)) throw Error(ErrorCode::kParameter, "dt must be positive");

  const std::size_t n = v.size();
  std::vector<bool> outlier(n, false);
  for (std::size_t i = 1; i < n; ++i) {
    const double accel = (v[i] - v[i - 1]) / dt;
    outlier[i] = accel > spec.max_accel || accel < spec.min_accel;
  }

  ClampResult result;
  result.values.assign(v.begin(), v.end());
  const auto w = static_cast<std::size_t>(spec.neighbor_window);
  for (std::size_t i = 0; i < n; ++i) {
    if (!outlier[i]) continue;
    double sum = 0.0;
    std::size_t count = 0;
    const std::size_t lo = i >= w ? i - w : 0;
    const std::size_t hi = std::min(n - 1, i + w);
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j == i || outlier[j]) continue;
      sum += v[j];
      ++count;
    }
    if (count == 0) {
      result.unresolved.push_back(i);
      continue;
    }
    result.values[i] = std::max(0.0, sum / static_cast<double>(count));
    result.replaced.push_back(i);
  }
  return result;
}

std::vector<double> central_difference(std::span<const double> v, std::span<const double> t) {
  const std::size_t n = v.size();
  if (t.size() != n) throw Error(ErrorCode::kParameter, "central_difference: size mismatch");
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    d[i] = (v[hi] - v[lo]) / (t[hi] - t[lo]);
  }
  return d;
}

void smooth_track(TrajectoryTrack& track, const FilterSpec& filter, const OutlierSpec& outliers) {
  std::vector<double> speed;
  std::vector<double> times;
  speed.reserve(track.points.size());
  for (const auto& p : track.points) {
    speed.push_back(p.v);
    times.push_back(p.t);
  }
  const auto clamped = clamp_outliers(speed, 1.0 / filter.sample_hz, outliers);
  if (!clamped.unresolved.empty()) {
    log().warn("track {}: {} outlier sample(s) had no usable neighbours", track.track_id, clamped.unresolved.size());
  }
  const auto smoothed = smooth_speed(clamped.values, filter);
  for (std::size_t i = 0; i < track.points.size(); ++i) track.points[i].v = smoothed[i];
  if (track.accel_missing) {
    const auto accel = central_difference(smoothed, times);
    for (std::size_t i = 0; i < track.points.size(); ++i) track.points[i].a = accel[i];
    track.accel_missing = false;
  }
}

void smooth_scenario(Scenario& scenario, const FilterSpec& filter, const OutlierSpec& outliers) {
  if (scenario.smoothed) return;
  for (auto& track : scenario.tracks) smooth_track(track, filter, outliers);
  scenario.smoothed = true;
}

}  // namespace avix::smoothing
