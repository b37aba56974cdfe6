#pragma once

// Conflict counts and group moments published for the Waymo and Lyft
// conflict datasets. Used only when that dataset is available locally.

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "avix/core/model.hpp"

namespace avix::testing::published {

struct Count {
  DataSource source;
  ConflictKind kind;
  InteractionClass klass;
  std::size_t n;
};

inline constexpr DataSource W = DataSource::kWaymo;
inline constexpr DataSource L = DataSource::kLyft;
inline constexpr ConflictKind X = ConflictKind::kCrossing;
inline constexpr ConflictKind M = ConflictKind::kMerging;
inline constexpr InteractionClass HH = InteractionClass::kHvHv;
inline constexpr InteractionClass AH = InteractionClass::kAvHv;
inline constexpr InteractionClass HA = InteractionClass::kHvAv;

inline constexpr Count kCounts[] = {
    {W, X, HH, 283}, {W, X, HA, 142}, {W, X, AH, 149}, {W, M, HH, 107}, {W, M, HA, 48},  {W, M, AH, 135},
    {L, X, HH, 456}, {L, X, HA, 93},  {L, X, AH, 62},  {L, M, HH, 793}, {L, M, HA, 190}, {L, M, AH, 151},
};

struct Moment {
  DataSource source;
  ConflictKind kind;
  InteractionClass klass;
  std::string_view metric;
  double mean;
  double std;
};

namespace detail {

// One published row: mean (std) for Waymo crossing, Waymo merging, Lyft
// crossing, Lyft merging.
struct Row {
  std::string_view metric;
  InteractionClass klass;
  std::array<double, 8> values;
};

inline constexpr Row kRows[] = {
    {"pet", HH, {4.08, 1.52, 3.97, 1.88, 4.68, 2.18, 4.62, 2.38}},
    {"pet", AH, {3.83, 1.46, 3.43, 0.97, 3.85, 1.28, 3.33, 1.89}},
    {"pet", HA, {5.33, 1.74, 4.73, 1.69, 7.35, 1.30, 7.08, 1.68}},
    {"min_ttc", HH, {5.08, 1.84, 6.30, 1.73, 4.71, 1.98, 6.12, 1.89}},
    {"min_ttc", AH, {4.53, 1.58, 5.05, 1.49, 3.85, 1.24, 5.27, 1.66}},
    {"min_ttc", HA, {5.37, 1.47, 6.88, 1.49, 4.81, 1.01, 7.23, 1.39}},
    {"mrd", HH, {0.53, 0.47, 0.58, 0.41, 0.61, 0.52, 0.59, 0.49}},
    {"mrd", AH, {0.69, 0.47, 0.89, 0.43, 0.88, 0.56, 0.85, 0.39}},
    {"mrd", HA, {0.39, 0.28, 0.38, 0.18, 0.65, 0.25, 0.54, 0.23}},
    {"follower_speed", HH, {6.53, 1.36, 7.08, 2.16, 5.94, 1.59, 6.28, 1.65}},
    {"follower_speed", AH, {5.99, 1.26, 6.06, 1.82, 6.40, 1.41, 6.42, 1.75}},
    {"follower_speed", HA, {6.28, 1.37, 6.34, 2.23, 5.24, 1.52, 6.42, 0.99}},
    {"avg_speed", HH, {3.40, 0.71, 4.00, 3.76, 3.51, 2.79, 3.66, 1.75}},
    {"avg_speed", AH, {3.20, 0.67, 3.70, 1.36, 3.72, 2.75, 3.90, 2.26}},
    {"avg_speed", HA, {3.20, 0.40, 3.50, 1.34, 2.86, 1.72, 3.07, 0.35}},
    {"avg_accel", HH, {1.20, 0.62, 0.60, 0.48, 0.65, 0.66, 0.57, 0.49}},
    {"avg_accel", AH, {0.80, 0.62, 0.60, 0.66, 0.83, 0.76, 0.49, 0.48}},
    {"avg_accel", HA, {1.30, 0.12, 1.00, 0.29, 1.02, 0.21, 0.99, 0.07}},
};

}  // namespace detail

inline const std::vector<Moment> kMoments = [] {
  constexpr std::array<std::pair<DataSource, ConflictKind>, 4> columns{{{W, X}, {W, M}, {L, X}, {L, M}}};
  std::vector<Moment> out;
  for (const auto& row : detail::kRows) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out.push_back({columns[c].first, columns[c].second, row.klass, row.metric, row.values[2 * c],
                     row.values[2 * c + 1]});
    }
  }
  return out;
}();

}  // namespace avix::testing::published
