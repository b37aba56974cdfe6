#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "avix/core/error.hpp"
#include "avix/stats/stats.hpp"

namespace avix::stats {

std::optional<double> metric_value(const metrics::MetricBundle& m, std::string_view name) {
  if (name == "pet") return m.pet;
  if (name == "min_ttc") return m.min_ttc;
  if (name == "mrd") return m.mrd;
  if (name == "follower_speed") return m.follower_speed_at_cp;
  if (name == "avg_speed") return m.avg_speed;
  if (name == "avg_accel") return m.avg_accel;
  throw Error(ErrorCode::kParameter, "unknown metric '" + std::string(name) + "'");
}

namespace {

constexpr std::pair<InteractionClass, InteractionClass> kBenchmarks[] = {
    {InteractionClass::kAvHv, InteractionClass::kHvHv},
    {InteractionClass::kHvAv, InteractionClass::kHvHv},
    {InteractionClass::kHvAv, InteractionClass::kAvHv},
};
constexpr InteractionClass kClasses[] = {InteractionClass::kHvHv, InteractionClass::kAvHv, InteractionClass::kHvAv};

std::vector<double> collect(std::span<const metrics::MetricBundle> bundles, DataSource source, ConflictKind kind,
                            InteractionClass klass, std::string_view metric) {
  std::vector<double> out;
  for (const auto& m : bundles) {
    if (m.source != source || m.kind != kind || m.klass != klass) continue;
    if (const auto v = metric_value(m, metric)) out.push_back(*v);
  }
  return out;
}

std::vector<double> collect_ta(std::span<const metrics::MetricBundle> bundles, DataSource source, ConflictKind kind,
                               InteractionClass klass) {
  std::vector<double> out;
  for (const auto& m : bundles) {
    if (m.source != source || m.kind != kind || m.klass != klass) continue;
    for (const auto& s : m.ta_series) {
      if (s.ta) out.push_back(*s.ta);
    }
  }
  return out;
}

void append_note(std::string& note, const std::string& text) {
  if (!note.empty()) note += "; ";
  note += text;
}

template <typename F>
std::optional<TestResult> attempt(F&& run, const char* label, std::string& note) {
  try {
    return run();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateSample) throw;
    append_note(note, std::string(label) + ": " + e.what());
    return std::nullopt;
  }
}

}  // namespace

StatReport build_comparison_tables(std::span<const metrics::MetricBundle> bundles, const StatsOptions& options) {
  std::set<std::pair<DataSource, ConflictKind>> strata;
  for (const auto& m : bundles) strata.insert({m.source, m.kind});

  StatReport report;
  for (const auto& [source, kind] : strata) {
    for (std::string_view metric : kMetricNames) {
      for (InteractionClass klass : kClasses) {
        const auto values = collect(bundles, source, kind, klass, metric);
        GroupSummary s;
        s.group = {source, kind, klass};
        s.metric = std::string(metric);
        s.n = values.size();
        s.mean = mean(values);
        s.std = sample_std(values);
        report.summaries.push_back(std::move(s));
      }
      for (const auto& [ca, cb] : kBenchmarks) {
        const auto a = collect(bundles, source, kind, ca, metric);
        const auto b = collect(bundles, source, kind, cb, metric);
        Comparison c;
        c.source = source;
        c.kind = kind;
        c.metric = std::string(metric);
        c.class_a = ca;
        c.class_b = cb;
        c.n_a = a.size();
        c.n_b = b.size();
        if (a.empty() || b.empty()) {
          c.note = "empty group";
        } else {
          c.t = attempt([&] { return t_test(a, b, options.pooled_t); }, "t test", c.note);
          c.u = attempt([&] { return mann_whitney_u(a, b); }, "u test", c.note);
        }
        report.comparisons.push_back(std::move(c));
      }
    }

    TaComparison ta;
    ta.source = source;
    ta.kind = kind;
    const auto a = collect_ta(bundles, source, kind, ta.class_a);
    const auto b = collect_ta(bundles, source, kind, ta.class_b);
    ta.n_a = a.size();
    ta.n_b = b.size();
    if (a.empty() || b.empty()) {
      ta.note = "empty group";
    } else {
      ta.ks = attempt([&] { return ks_2sample(a, b); }, "ks", ta.note);
      ta.ad = attempt([&] { return ad_2sample(a, b); }, "ad", ta.note);
    }
    report.ta_tests.push_back(std::move(ta));
  }
  return report;
}

}  // namespace avix::stats
