#pragma once

// Speed-series preprocessing: acceleration-bound outlier replacement followed
// by a zero-phase low-pass Butterworth filter.

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "avix/core/model.hpp"

namespace avix::smoothing {

struct FilterSpec {
  double cutoff_hz = 0.5;
  double sample_hz = 10.0;
  int order = 4;

  void validate() const;  // throws kParameter
  std::size_t pad_length() const { return 3 * static_cast<std::size_t>(order); }
};

struct OutlierSpec {
  double max_accel = 10.0;
  double min_accel = -10.0;
  int neighbor_window = 5;

  void validate() const;  // throws kParameter
};

/// One biquad, a[0] == 1. Transposed direct form II.
struct SecondOrderSection {
  std::array<double, 3> b{};
  std::array<double, 3> a{1.0, 0.0, 0.0};
};

struct SosFilter {
  std::vector<SecondOrderSection> sections;

  /// Expanded single transfer function (numerator, denominator), highest
  /// power of z^-1 last.
  std::vector<double> numerator() const;
  std::vector<double> denominator() const;
};

/// Digital low-pass Butterworth via the bilinear transform with the cutoff
/// prewarped, so |H| = 1/sqrt(2) exactly at cutoff_hz. Every section has unit
/// DC gain.
SosFilter design_butterworth(const FilterSpec& spec);

std::complex<double> frequency_response(const SosFilter& filter, double freq_hz, double sample_hz);

/// Single causal pass with every section initialised to the steady state of a
/// constant input equal to x[0].
std::vector<double> filter_once(const SosFilter& filter, std::span<const double> x);

/// Forward-backward pass with odd-reflection padding of `pad` samples at both
/// ends. No clipping. Series shorter than pad + 1 are edge-replicated at the end
/// and truncated back.
std::vector<double> filtfilt(const SosFilter& filter, std::span<const double> x, std::size_t pad);

struct ClampResult {
  std::vector<double> values;
  std::vector<std::size_t> replaced;    // indices that were outliers and got a neighbour mean
  std::vector<std::size_t> unresolved;  // outliers with no usable neighbour; left unchanged
};

/// A sample is an outlier when (v[i] - v[i-1]) / dt falls outside
/// [min_accel, max_accel]. It is replaced by the mean of the non-outlier
/// samples among the `neighbor_window` preceding and following ones.
ClampResult clamp_outliers(std::span<const double> v, double dt, const OutlierSpec& spec = {});

/// Zero-phase smoothing of a speed series; output clipped below at 0.
/// Throws kDomain naming the first non-finite sample.
std::vector<double> smooth_speed(std::span<const double> v, const FilterSpec& spec = {});

/// Central differences (one-sided at the ends) of v against t.
std::vector<double> central_difference(std::span<const double> v, std::span<const double> t);

/// Outlier clamping then smoothing of the track's speed. Rebuilds `a` from the
/// smoothed speed when the input carried none.
void smooth_track(TrajectoryTrack& track, const FilterSpec& filter = {}, const OutlierSpec& outliers = {});

/// Applies smooth_track to every track; no-op when already smoothed.
void smooth_scenario(Scenario& scenario, const FilterSpec& filter = {}, const OutlierSpec& outliers = {});

}  // namespace avix::smoothing
