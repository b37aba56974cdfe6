#pragma once

// Two-sample tests and the grouped comparison tables built from them.
// All p-values are two-sided.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "avix/core/model.hpp"
#include "avix/metrics/metrics.hpp"

namespace avix::stats {

enum class TestKind { kWelchT, kStudentT, kMannWhitneyU, kKs2Sample, kAd2Sample };
std::string_view to_string(TestKind t);

struct TestResult {
  TestKind test = TestKind::kWelchT;
  double statistic = 0.0;
  double p_value = 1.0;
  double df = 0.0;  // t tests only
};

double mean(std::span<const double> x);
double sample_std(std::span<const double> x);  // n - 1 denominator; NaN for n < 2

/// Welch's unequal-variance t test (or pooled-variance Student t when
/// `pooled`). Needs n >= 2 per sample. Both variances zero: equal means give
/// t = 0, p = 1; different means throw kDegenerateSample.
TestResult t_test(std::span<const double> a, std::span<const double> b, bool pooled = false);
inline TestResult welch_t(std::span<const double> a, std::span<const double> b) { return t_test(a, b, false); }

enum class UMethod { kAuto, kExact, kNormal };

/// U statistic of sample a (midranks for ties). kAuto is exact unless both
/// samples have more than 8 observations, then the tie-corrected normal
/// approximation with continuity correction.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b, UMethod method = UMethod::kAuto);

/// Two-sided tail probability of the Kolmogorov limit distribution.
double kolmogorov_sf(double x);

/// D = sup |F_a - F_b|; p from the asymptotic distribution at
/// sqrt(n_a n_b / (n_a + n_b)) D.
TestResult ks_2sample(std::span<const double> a, std::span<const double> b);

inline constexpr double kAdPMin = 0.001;
inline constexpr double kAdPMax = 0.25;

/// Standardized k-sample Anderson-Darling statistic (k = 2, midranks) with p
/// interpolated from the critical-value table and capped to [0.001, 0.25].
/// Needs n >= 2 per sample and at least two distinct pooled values.
TestResult ad_2sample(std::span<const double> a, std::span<const double> b);

// Comparison tables.

struct Group {
  DataSource source = DataSource::kSynthetic;
  ConflictKind kind = ConflictKind::kCrossing;
  InteractionClass klass = InteractionClass::kHvHv;
};

struct GroupSummary {
  Group group;
  std::string metric;
  std::size_t n = 0;
  double mean = 0.0;  // NaN when n == 0
  double std = 0.0;   // NaN when n < 2
};

/// One benchmark row: t test and U test between two classes.
struct Comparison {
  DataSource source = DataSource::kSynthetic;
  ConflictKind kind = ConflictKind::kCrossing;
  std::string metric;
  InteractionClass class_a = InteractionClass::kAvHv;
  InteractionClass class_b = InteractionClass::kHvHv;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  std::optional<TestResult> t;
  std::optional<TestResult> u;
  std::string note;  // why a test was skipped
};

/// KS and AD on pooled per-frame TA samples.
struct TaComparison {
  DataSource source = DataSource::kSynthetic;
  ConflictKind kind = ConflictKind::kCrossing;
  InteractionClass class_a = InteractionClass::kHvAv;
  InteractionClass class_b = InteractionClass::kAvHv;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  std::optional<TestResult> ks;
  std::optional<TestResult> ad;
  std::string note;
};

struct StatReport {
  std::vector<GroupSummary> summaries;
  std::vector<Comparison> comparisons;
  std::vector<TaComparison> ta_tests;
};

struct StatsOptions {
  bool pooled_t = false;
};

inline constexpr std::string_view kMetricNames[] = {"pet",           "min_ttc",   "mrd",
                                                    "follower_speed", "avg_speed", "avg_accel"};

/// Value of a named metric; nullopt when undefined for the conflict.
std::optional<double> metric_value(const metrics::MetricBundle& m, std::string_view name);

/// Summaries for every (source, kind) present and every class and metric,
/// benchmark comparisons AV-HV vs HV-HV, HV-AV vs HV-HV, HV-AV vs AV-HV, and
/// TA distribution tests HV-AV vs AV-HV.
StatReport build_comparison_tables(std::span<const metrics::MetricBundle> bundles, const StatsOptions& options = {});

}  // namespace avix::stats
