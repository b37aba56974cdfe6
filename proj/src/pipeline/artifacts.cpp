#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <tuple>

#include "avix/core/error.hpp"
#include "avix/pipeline/pipeline.hpp"

namespace avix::pipeline {

using io::Cell;
using io::Table;
using metrics::MetricBundle;

namespace {

Cell str(std::string_view s) { return std::string(s); }
Cell num(double v) { return v; }
Cell opt(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }
Cell count(std::size_t n) { return static_cast<std::int64_t>(n); }

using GroupKey = std::tuple<DataSource, ConflictKind, InteractionClass>;

GroupKey key_of(const MetricBundle& m) { return {m.source, m.kind, m.klass}; }

void push_group(std::vector<Cell>& row, const GroupKey& k) {
  row.push_back(str(to_string(std::get<0>(k))));
  row.push_back(str(to_string(std::get<1>(k))));
  row.push_back(str(to_string(std::get<2>(k))));
}

std::optional<double> parse_optional(const std::string& s, std::string_view what) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, std::string(what) + ": not a number: \"" + s + "\"");
  }
}

double parse_required(const std::string& s, std::string_view what) {
  const auto v = parse_optional(s, what);
  if (!v) throw Error(ErrorCode::kParse, std::string(what) + ": missing value");
  return *v;
}

template <typename T>
T parse_enum(std::optional<T> v, const std::string& s, std::string_view what) {
  if (!v) throw Error(ErrorCode::kParse, std::string(what) + ": unknown value \"" + s + "\"");
  return *v;
}

// Mean and normal 95% interval; bounds undefined for a single observation.
std::array<double, 3> mean_ci(const std::vector<double>& x) {
  const double m = stats::mean(x);
  const double se = stats::sample_std(x) / std::sqrt(static_cast<double>(x.size()));
  return {m, m - 1.96 * se, m + 1.96 * se};
}

}  // namespace

Table intersections_table(const IntersectionIndex& ixs) {
  Table t({"id", "center_x", "center_y", "radius", "n_signs", "n_legs"});
  for (const auto& [map_id, list] : ixs) {
    for (const auto& ix : list) {
      t.add_row({str(ix.intersection_id), num(ix.center.x), num(ix.center.y), num(ix.radius),
                 count(ix.sign_ids.size()), count(ix.n_legs)});
    }
  }
  return t;
}

Table conflicts_table(const std::vector<conflict::Conflict>& conflicts) {
  Table t({"conflict_id", "scenario_id", "source", "intersection_id", "leader_track_id", "follower_track_id", "kind",
           "class", "conflict_x", "conflict_y", "t_leader_arrive", "t_leader_exit", "t_follower_arrive",
           "window_start", "pet"});
  for (const auto& c : conflicts) {
    t.add_row({str(c.conflict_id), str(c.scenario_id), str(to_string(c.source)), str(c.intersection_id),
               str(c.leader_track_id), str(c.follower_track_id), str(to_string(c.kind)), str(to_string(c.klass)),
               num(c.conflict_point.x), num(c.conflict_point.y), num(c.t_leader_arrive), num(c.t_leader_exit),
               num(c.t_follower_arrive), num(c.window_start), num(c.pet())});
  }
  return t;
}

Table metrics_table(const std::vector<MetricBundle>& bundles) {
  Table t({"conflict_id", "scenario_id", "source", "kind", "class", "pet", "min_ttc", "mrd", "follower_speed_at_cp",
           "avg_speed", "avg_accel", "ta_frames"});
  for (const auto& m : bundles) {
    std::size_t defined = 0;
    for (const auto& s : m.ta_series) defined += s.ta ? 1 : 0;
    t.add_row({str(m.conflict_id), str(m.scenario_id), str(to_string(m.source)), str(to_string(m.kind)),
               str(to_string(m.klass)), num(m.pet), opt(m.min_ttc), num(m.mrd), num(m.follower_speed_at_cp),
               opt(m.avg_speed), opt(m.avg_accel), count(defined)});
  }
  return t;
}

Table profiles_table(const std::vector<MetricBundle>& bundles) {
  Table t({"conflict_id", "role", "t_rel", "v", "a"});
  for (const auto& m : bundles) {
    if (!m.profile) continue;
    for (const auto& s : m.profile->samples) {
      t.add_row({str(m.conflict_id), str(m.profile->role), num(s.t_rel), num(s.v), num(s.a)});
    }
  }
  return t;
}

Table ta_series_table(const std::vector<MetricBundle>& bundles) {
  Table t({"conflict_id", "t", "ta"});
  for (const auto& m : bundles) {
    for (const auto& s : m.ta_series) t.add_row({str(m.conflict_id), num(s.t), opt(s.ta)});
  }
  return t;
}

Table summaries_table(const stats::StatReport& report) {
  Table t({"source", "kind", "metric", "class", "n", "mean", "std"});
  for (const auto& s : report.summaries) {
    t.add_row({str(to_string(s.group.source)), str(to_string(s.group.kind)), str(s.metric),
               str(to_string(s.group.klass)), count(s.n), num(s.mean), num(s.std)});
  }
  return t;
}

Table comparisons_table(const stats::StatReport& report) {
  Table t({"source", "kind", "metric", "benchmark", "n_a", "n_b", "t_test", "t_statistic", "t_df", "t_p",
           "u_statistic", "u_p", "note"});
  for (const auto& c : report.comparisons) {
    const std::string bench = std::string(to_string(c.class_a)) + " vs " + std::string(to_string(c.class_b));
    std::vector<Cell> row{str(to_string(c.source)), str(to_string(c.kind)), str(c.metric), str(bench),
                          count(c.n_a), count(c.n_b)};
    if (c.t) {
      row.insert(row.end(), {str(stats::to_string(c.t->test)), num(c.t->statistic), num(c.t->df), num(c.t->p_value)});
    } else {
      row.insert(row.end(), {Cell{}, Cell{}, Cell{}, Cell{}});
    }
    if (c.u) {
      row.insert(row.end(), {num(c.u->statistic), num(c.u->p_value)});
    } else {
      row.insert(row.end(), {Cell{}, Cell{}});
    }
    row.push_back(str(c.note));
    t.add_row(std::move(row));
  }
  return t;
}

Table ta_tests_table(const stats::StatReport& report) {
  Table t({"source", "kind", "benchmark", "n_a", "n_b", "ks_statistic", "ks_p", "ad_statistic", "ad_p", "note"});
  for (const auto& c : report.ta_tests) {
    const std::string bench = std::string(to_string(c.class_a)) + " vs " + std::string(to_string(c.class_b));
    t.add_row({str(to_string(c.source)), str(to_string(c.kind)), str(bench), count(c.n_a), count(c.n_b),
               c.ks ? num(c.ks->statistic) : Cell{}, c.ks ? num(c.ks->p_value) : Cell{},
               c.ad ? num(c.ad->statistic) : Cell{}, c.ad ? num(c.ad->p_value) : Cell{}, str(c.note)});
  }
  return t;
}

std::vector<MetricBundle> bundles_from_tables(const io::TextTable& mt, const io::TextTable* ta_csv,
                                              const io::TextTable* profiles_csv) {
  const auto col = [&](std::string_view name) { return mt.column_index(name); };
  const std::size_t c_id = col("conflict_id"), c_scn = col("scenario_id"), c_src = col("source"),
                    c_kind = col("kind"), c_class = col("class"), c_pet = col("pet"), c_ttc = col("min_ttc"),
                    c_mrd = col("mrd"), c_fs = col("follower_speed_at_cp"), c_as = col("avg_speed"),
                    c_aa = col("avg_accel");

  std::vector<MetricBundle> out;
  std::map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < mt.rows.size(); ++r) {
    const auto& row = mt.rows[r];
    const std::string where = "metrics.csv row " + std::to_string(r + 1);
    MetricBundle m;
    m.conflict_id = row[c_id];
    m.scenario_id = row[c_scn];
    m.source = parse_enum(parse_data_source(row[c_src]), row[c_src], where + " source");
    m.kind = parse_enum(parse_conflict_kind(row[c_kind]), row[c_kind], where + " kind");
    m.klass = parse_enum(parse_interaction_class(row[c_class]), row[c_class], where + " class");
    m.pet = parse_required(row[c_pet], where + " pet");
    m.min_ttc = parse_optional(row[c_ttc], where + " min_ttc");
    m.mrd = parse_required(row[c_mrd], where + " mrd");
    m.follower_speed_at_cp = parse_required(row[c_fs], where + " follower_speed_at_cp");
    m.avg_speed = parse_optional(row[c_as], where + " avg_speed");
    m.avg_accel = parse_optional(row[c_aa], where + " avg_accel");
    index[m.conflict_id] = out.size();
    out.push_back(std::move(m));
  }

  const auto lookup = [&](const std::string& id, std::string_view file) -> MetricBundle& {
    const auto it = index.find(id);
    if (it == index.end()) {
      throw Error(ErrorCode::kDanglingReference, std::string(file) + ": unknown conflict_id \"" + id + "\"");
    }
    return out[it->second];
  };
  if (ta_csv) {
    const std::size_t c_cid = ta_csv->column_index("conflict_id"), c_t = ta_csv->column_index("t"),
                      c_ta = ta_csv->column_index("ta");
    for (const auto& row : ta_csv->rows) {
      lookup(row[c_cid], "ta_series.csv")
          .ta_series.push_back({parse_required(row[c_t], "ta_series.csv t"), parse_optional(row[c_ta], "ta_series.csv ta")});
    }
  }
  if (profiles_csv) {
    const auto& p = *profiles_csv;
    const std::size_t c_cid = p.column_index("conflict_id"), c_role = p.column_index("role"),
                      c_t = p.column_index("t_rel"), c_v = p.column_index("v"), c_a = p.column_index("a");
    for (const auto& row : p.rows) {
      auto& m = lookup(row[c_cid], "profiles.csv");
      if (!m.profile) {
        m.profile.emplace();
        m.profile->conflict_id = m.conflict_id;
        m.profile->role = row[c_role];
      }
      m.profile->samples.push_back({parse_required(row[c_t], "profiles.csv t_rel"),
                                    parse_required(row[c_v], "profiles.csv v"),
                                    parse_required(row[c_a], "profiles.csv a")});
    }
  }
  return out;
}

BoxStats box_stats(std::vector<double> v) {
  BoxStats b;
  b.n = v.size();
  if (v.empty()) return b;
  std::sort(v.begin(), v.end());
  const auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  b.q1 = quantile(0.25);
  b.median = quantile(0.5);
  b.q3 = quantile(0.75);
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr;
  const double hi_fence = b.q3 + 1.5 * iqr;
  b.whisker_low = b.q1;
  b.whisker_high = b.q3;
  for (double x : v) {
    if (x < lo_fence || x > hi_fence) {
      ++b.n_outliers;
      continue;
    }
    b.whisker_low = std::min(b.whisker_low, x);
    b.whisker_high = std::max(b.whisker_high, x);
  }
  return b;
}

PlotData build_plot_data(const std::vector<MetricBundle>& bundles) {
  PlotData out{
      Table({"conflict_id", "source", "kind", "class", "pet", "min_ttc"}),
      Table({"source", "kind", "class", "n", "q1", "median", "q3", "whisker_low", "whisker_high", "n_outliers"}),
      Table({"source", "kind", "class", "bin_start", "bin_end", "count"}),
      Table({"source", "kind", "class", "role", "t_rel", "n", "v_mean", "v_lower95", "v_upper95", "a_mean",
             "a_lower95", "a_upper95"}),
  };

  std::map<GroupKey, std::vector<double>> mrd;
  std::map<GroupKey, std::map<long, std::size_t>> ta_bins;
  // (group, role) -> bin -> (v samples, a samples)
  std::map<std::pair<GroupKey, std::string>, std::map<long, std::pair<std::vector<double>, std::vector<double>>>>
      profile_bins;

  for (const auto& m : bundles) {
    const GroupKey k = key_of(m);
    std::vector<Cell> row{str(m.conflict_id)};
    push_group(row, k);
    row.push_back(num(m.pet));
    row.push_back(opt(m.min_ttc));
    out.joint_pet_minttc.add_row(std::move(row));

    mrd[k].push_back(m.mrd);
    auto& bins = ta_bins[k];
    for (const auto& s : m.ta_series) {
      if (s.ta) ++bins[static_cast<long>(std::floor(*s.ta / kTaBinWidth))];
    }
    if (m.profile) {
      auto& pb = profile_bins[{k, m.profile->role}];
      for (const auto& s : m.profile->samples) {
        auto& slot = pb[static_cast<long>(std::floor(s.t_rel / kProfileBinWidth + 1e-6))];
        slot.first.push_back(s.v);
        slot.second.push_back(s.a);
      }
    }
  }

  for (const auto& [k, values] : mrd) {
    const BoxStats b = box_stats(values);
    std::vector<Cell> row;
    push_group(row, k);
    row.insert(row.end(), {count(b.n), num(b.q1), num(b.median), num(b.q3), num(b.whisker_low), num(b.whisker_high),
                           count(b.n_outliers)});
    out.mrd_box.add_row(std::move(row));
  }
  for (const auto& [k, bins] : ta_bins) {
    if (bins.empty()) continue;
    // Contiguous bins between the extremes, empty ones included.
    for (long b = bins.begin()->first; b <= bins.rbegin()->first; ++b) {
      const auto it = bins.find(b);
      std::vector<Cell> row;
      push_group(row, k);
      row.insert(row.end(), {num(static_cast<double>(b) * kTaBinWidth), num(static_cast<double>(b + 1) * kTaBinWidth),
                             count(it == bins.end() ? 0 : it->second)});
      out.ta_hist.add_row(std::move(row));
    }
  }
  for (const auto& [key, bins] : profile_bins) {
    for (const auto& [b, samples] : bins) {
      const auto v = mean_ci(samples.first);
      const auto a = mean_ci(samples.second);
      std::vector<Cell> row;
      push_group(row, key.first);
      row.insert(row.end(), {str(key.second), num(static_cast<double>(b) * kProfileBinWidth),
                             count(samples.first.size()), num(v[0]), num(v[1]), num(v[2]), num(a[0]), num(a[1]),
                             num(a[2])});
      out.profile_ci.add_row(std::move(row));
    }
  }
  return out;
}

}  // namespace avix::pipeline
