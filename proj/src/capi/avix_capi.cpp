#include "avix/avix.h"

#include <cmath>
#include <exception>
#include <string>

#include "avix/core/error.hpp"
#include "avix/metrics/metrics.hpp"
#include "avix/pipeline/pipeline.hpp"
#include "avix/smoothing/smoothing.hpp"

struct avix_config {
  avix::pipeline::PipelineConfig cfg;
  std::string json_cache;
};

namespace {

thread_local std::string g_last_error;

avix_status status_of(avix::ErrorCode code) {
  using avix::ErrorCode;
  switch (code) {
    case ErrorCode::kConfig:
    case ErrorCode::kParameter: return AVIX_ERR_CONFIG;
    case ErrorCode::kParse: return AVIX_ERR_PARSE;
    case ErrorCode::kDependency: return AVIX_ERR_DEPENDENCY;
    case ErrorCode::kDomain: return AVIX_ERR_DOMAIN;
    case ErrorCode::kIo: return AVIX_ERR_IO;
    case ErrorCode::kInternal: return AVIX_ERR_INTERNAL;
    case ErrorCode::kDanglingReference:
    case ErrorCode::kValidation:
    case ErrorCode::kUnsupportedPair:
    case ErrorCode::kDegenerateSample:
    case ErrorCode::kMetricUndefined:
    case ErrorCode::kUnassignedLane:
    case ErrorCode::kPrecondition: return AVIX_ERR_DATA;
  }
  return AVIX_ERR_INTERNAL;
}

template <typename F>
avix_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return AVIX_OK;
  } catch (const avix::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return AVIX_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return AVIX_ERR_INTERNAL;
  }
}

avix_status null_arg(const char* what) {
  g_last_error = std::string(what) + " is NULL";
  return AVIX_ERR_NULL;
}

bool is_integer_key(const std::string& key) {
  return key == "threads" || key == "seed" || key == "filter.order" || key == "outliers.neighbor_window" ||
         key == "cluster.min_signs";
}

// "a.b" -> {"a": {"b": value}}
nlohmann::json nest(const std::string& key, nlohmann::json value) {
  const auto dot = key.find('.');
  if (dot == std::string::npos) return {{key, std::move(value)}};
  return {{key.substr(0, dot), nest(key.substr(dot + 1), std::move(value))}};
}

void put_optional(const std::optional<double>& v, double* out, int* defined) {
  *defined = v ? 1 : 0;
  *out = v.value_or(std::nan(""));
}

}  // namespace

extern "C" {

const char* avix_version(void) { return avix::pipeline::version().data(); }

const char* avix_last_error(void) { return g_last_error.c_str(); }

avix_status avix_config_create(avix_config** out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = new avix_config(); });
}

void avix_config_destroy(avix_config* cfg) { delete cfg; }

avix_status avix_config_load_json(avix_config* cfg, const char* json_text) {
  if (!cfg) return null_arg("cfg");
  if (!json_text) return null_arg("json_text");
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
      throw avix::Error(avix::ErrorCode::kConfig, e.what());
    }
    cfg->cfg = avix::pipeline::config_from_json(j, cfg->cfg);
  });
}

avix_status avix_config_load_file(avix_config* cfg, const char* path) {
  if (!cfg) return null_arg("cfg");
  if (!path) return null_arg("path");
  return guarded([&] { cfg->cfg = avix::pipeline::load_config(path, cfg->cfg); });
}

avix_status avix_config_set_double(avix_config* cfg, const char* key, double value) {
  if (!cfg) return null_arg("cfg");
  if (!key) return null_arg("key");
  return guarded([&] {
    const std::string k(key);
    nlohmann::json v = value;
    if (is_integer_key(k)) {
      if (value != std::floor(value) || !std::isfinite(value)) {
        throw avix::Error(avix::ErrorCode::kConfig, k + " takes an integer value");
      }
      v = static_cast<long long>(value);
    }
    cfg->cfg = avix::pipeline::config_from_json(nest(k, v), cfg->cfg);
  });
}

avix_status avix_config_set_bool(avix_config* cfg, const char* key, int value) {
  if (!cfg) return null_arg("cfg");
  if (!key) return null_arg("key");
  return guarded([&] { cfg->cfg = avix::pipeline::config_from_json(nest(key, value != 0), cfg->cfg); });
}

avix_status avix_config_set_string(avix_config* cfg, const char* key, const char* value) {
  if (!cfg) return null_arg("cfg");
  if (!key) return null_arg("key");
  if (!value) return null_arg("value");
  return guarded([&] {
    const std::string k(key);
    if (k != "input" && k != "out_dir") throw avix::Error(avix::ErrorCode::kConfig, "unknown string key " + k);
    cfg->cfg = avix::pipeline::config_from_json(nest(k, value), cfg->cfg);
  });
}

avix_status avix_config_add_map(avix_config* cfg, const char* path) {
  if (!cfg) return null_arg("cfg");
  if (!path) return null_arg("path");
  return guarded([&] { cfg->cfg.maps.emplace_back(path); });
}

avix_status avix_config_clear_maps(avix_config* cfg) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] { cfg->cfg.maps.clear(); });
}

const char* avix_config_to_json(avix_config* cfg) {
  if (!cfg) return "";
  auto j = cfg->cfg.to_json();
  j["out_dir"] = cfg->cfg.out_dir.generic_string();
  cfg->json_cache = j.dump();
  return cfg->json_cache.c_str();
}

avix_status avix_run_stage(const avix_config* cfg, const char* stage) {
  if (!cfg) return null_arg("cfg");
  if (!stage) return null_arg("stage");
  return guarded([&] {
    const std::string s(stage);
    if (s == "run") {
      avix::pipeline::run_pipeline(cfg->cfg);
      return;
    }
    const auto st = avix::pipeline::parse_stage(s);
    if (!st) throw avix::Error(avix::ErrorCode::kConfig, "unknown stage \"" + s + "\"");
    avix::pipeline::run_stage(*st, cfg->cfg);
  });
}

avix_status avix_ttc_crossing(double d_f, double v_f, double* out, int* defined) {
  if (!out || !defined) return null_arg("out");
  return guarded([&] { put_optional(avix::metrics::ttc_crossing(d_f, v_f), out, defined); });
}

avix_status avix_ttc_merging(double d_f, double v_f, double v_l, double* out, int* defined) {
  if (!out || !defined) return null_arg("out");
  return guarded([&] { put_optional(avix::metrics::ttc_merging(d_f, v_f, v_l), out, defined); });
}

avix_status avix_time_advantage(double d_f, double v_f, double d_l, double v_l, double* out, int* defined) {
  if (!out || !defined) return null_arg("out");
  return guarded([&] { put_optional(avix::metrics::time_advantage(d_f, v_f, d_l, v_l), out, defined); });
}

avix_status avix_smooth_speed(const double* v, size_t n, double cutoff_hz, int order, double* out) {
  if ((!v || !out) && n > 0) return null_arg("v/out");
  return guarded([&] {
    avix::smoothing::FilterSpec spec;
    if (cutoff_hz > 0.0) spec.cutoff_hz = cutoff_hz;
    if (order > 0) spec.order = order;
    spec.validate();
    const auto smoothed = avix::smoothing::smooth_speed(std::span<const double>(v, n), spec);
    std::copy(smoothed.begin(), smoothed.end(), out);
  });
}

}  // extern "C"
