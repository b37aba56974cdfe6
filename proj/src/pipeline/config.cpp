#include <fstream>
#include <set>

#include "avix/core/error.hpp"
#include "avix/pipeline/pipeline.hpp"

namespace avix::pipeline {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::kConfig, msg); }

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, const std::string& where) {
  if (!obj.is_object()) config_error(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) config_error(where + ": unknown key \"" + key + "\"");
  }
}

template <typename T>
void read_key(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw std::invalid_argument("boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw std::invalid_argument("integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.get<long long>() < 0) throw std::invalid_argument("non-negative integer");
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw std::invalid_argument("number");
    } else {
      if (!v.is_string()) throw std::invalid_argument("string");
    }
    out = v.get<T>();
  } catch (const std::invalid_argument& e) {
    config_error(where + "." + key + ": expected " + e.what());
  }
}

}  // namespace

void PipelineConfig::validate() const {
  if (threads < 1) config_error("threads must be at least 1");
  if (!input.empty() && !std::filesystem::exists(input)) config_error("input file not found: " + input.string());
  for (const auto& m : maps) {
    if (!std::filesystem::exists(m)) config_error("map file not found: " + m.string());
  }
  if (!(read.max_bridge_gap >= 0.0)) throw Error(ErrorCode::kParameter, "max_bridge_gap must be non-negative");
  filter.validate();
  outliers.validate();
  cluster.validate();
  conflict.validate();
}

json PipelineConfig::to_json() const {
  json maps_j = json::array();
  for (const auto& m : maps) maps_j.push_back(m.generic_string());
  return {
      {"input", input.generic_string()},
      {"maps", maps_j},
      {"threads", threads},
      {"seed", seed},
      {"io", {{"max_bridge_gap", read.max_bridge_gap}}},
      {"filter", {{"cutoff_hz", filter.cutoff_hz}, {"sample_hz", filter.sample_hz}, {"order", filter.order}}},
      {"outliers",
       {{"max_accel", outliers.max_accel},
        {"min_accel", outliers.min_accel},
        {"neighbor_window", outliers.neighbor_window}}},
      {"cluster",
       {{"link_distance", cluster.link_distance},
        {"min_signs", cluster.min_signs},
        {"radius_buffer", cluster.radius_buffer}}},
      {"conflict",
       {{"pet_max", conflict.pet_max},
        {"speed_change_min", conflict.speed_change_min},
        {"merge_buffer", conflict.merge_buffer},
        {"clearance", conflict.clearance},
        {"approach_margin", conflict.approach_margin},
        {"min_displacement", conflict.min_displacement},
        {"lane_match_distance", conflict.lane_match_distance}}},
      {"stats", {{"pooled_t", stats.pooled_t}}},
  };
}

PipelineConfig config_from_json(const json& j, PipelineConfig cfg) {
  reject_unknown(j, {"input", "maps", "out_dir", "threads", "seed", "io", "filter", "outliers", "cluster", "conflict", "stats"},
                 "config");
  std::string s;
  if (j.contains("input")) {
    read_key(j, "input", s, "config");
    cfg.input = s;
  }
  if (j.contains("out_dir")) {
    read_key(j, "out_dir", s, "config");
    cfg.out_dir = s;
  }
  if (j.contains("maps")) {
    if (!j["maps"].is_array()) config_error("config.maps: expected an array of paths");
    cfg.maps.clear();
    for (const auto& m : j["maps"]) {
      if (!m.is_string()) config_error("config.maps: expected an array of paths");
      cfg.maps.emplace_back(m.get<std::string>());
    }
  }
  read_key(j, "threads", cfg.threads, "config");
  read_key(j, "seed", cfg.seed, "config");
  if (j.contains("io")) {
    reject_unknown(j["io"], {"max_bridge_gap"}, "config.io");
    read_key(j["io"], "max_bridge_gap", cfg.read.max_bridge_gap, "config.io");
  }
  if (j.contains("filter")) {
    const auto& f = j["filter"];
    reject_unknown(f, {"cutoff_hz", "sample_hz", "order"}, "config.filter");
    read_key(f, "cutoff_hz", cfg.filter.cutoff_hz, "config.filter");
    read_key(f, "sample_hz", cfg.filter.sample_hz, "config.filter");
    read_key(f, "order", cfg.filter.order, "config.filter");
  }
  if (j.contains("outliers")) {
    const auto& o = j["outliers"];
    reject_unknown(o, {"max_accel", "min_accel", "neighbor_window"}, "config.outliers");
    read_key(o, "max_accel", cfg.outliers.max_accel, "config.outliers");
    read_key(o, "min_accel", cfg.outliers.min_accel, "config.outliers");
    read_key(o, "neighbor_window", cfg.outliers.neighbor_window, "config.outliers");
  }
  if (j.contains("cluster")) {
    const auto& c = j["cluster"];
    reject_unknown(c, {"link_distance", "min_signs", "radius_buffer"}, "config.cluster");
    read_key(c, "link_distance", cfg.cluster.link_distance, "config.cluster");
    read_key(c, "min_signs", cfg.cluster.min_signs, "config.cluster");
    read_key(c, "radius_buffer", cfg.cluster.radius_buffer, "config.cluster");
  }
  if (j.contains("conflict")) {
    const auto& c = j["conflict"];
    reject_unknown(c,
                   {"pet_max", "speed_change_min", "merge_buffer", "clearance", "approach_margin", "min_displacement",
                    "lane_match_distance"},
                   "config.conflict");
    read_key(c, "pet_max", cfg.conflict.pet_max, "config.conflict");
    read_key(c, "speed_change_min", cfg.conflict.speed_change_min, "config.conflict");
    read_key(c, "merge_buffer", cfg.conflict.merge_buffer, "config.conflict");
    read_key(c, "clearance", cfg.conflict.clearance, "config.conflict");
    read_key(c, "approach_margin", cfg.conflict.approach_margin, "config.conflict");
    read_key(c, "min_displacement", cfg.conflict.min_displacement, "config.conflict");
    read_key(c, "lane_match_distance", cfg.conflict.lane_match_distance, "config.conflict");
  }
  if (j.contains("stats")) {
    reject_unknown(j["stats"], {"pooled_t"}, "config.stats");
    read_key(j["stats"], "pooled_t", cfg.stats.pooled_t, "config.stats");
  }
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    config_error(path.string() + ": " + e.what());
  }
  return config_from_json(j, std::move(base));
}

}  // namespace avix::pipeline
