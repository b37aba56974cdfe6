#include "avix/io/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "avix/core/error.hpp"
#include "avix/core/log.hpp"

namespace avix::io {

using nlohmann::json;

const LanePolyline* MapBundle::find_lane(std::string_view lane_id) const {
  for (const auto& lane : lanes) {
    if (lane.lane_id == lane_id) return &lane;
  }
  return nullptr;
}

namespace {

// Error context: file name, record index and a path inside the record.
struct Where {
  std::string_view file;
  std::size_t record = 0;

  [[noreturn]] void fail(std::string_view field, const std::string& path, const std::string& what,
                         ErrorCode code = ErrorCode::kParse) const {
    std::string msg = std::string(file) + ": record " + std::to_string(record) + ": field \"" +
                      std::string(field) + "\"";
    if (!path.empty()) msg += " (" + path + ")";
    msg += ": " + what;
    throw Error(code, msg);
  }
};

const json& require(const json& obj, const char* key, const Where& where, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) where.fail(key, path, "is required");
  return *it;
}

double require_number(const json& obj, const char* key, const Where& where, const std::string& path) {
  const json& v = require(obj, key, where, path);
  if (!v.is_number()) where.fail(key, path, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) where.fail(key, path, "must be finite");
  return d;
}

std::optional<double> optional_number(const json& obj, const char* key, const Where& where,
                                      const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) where.fail(key, path, "must be a number");
  const double d = it->get<double>();
  if (!std::isfinite(d)) where.fail(key, path, "must be finite");
  return d;
}

std::string require_string(const json& obj, const char* key, const Where& where, const std::string& path) {
  const json& v = require(obj, key, where, path);
  if (!v.is_string()) where.fail(key, path, "must be a string");
  return v.get<std::string>();
}

struct RawPoint {
  TrajectoryPoint p;
  bool has_v = false;
  bool has_a = false;
  bool has_heading = false;
};

double lerp(double a, double b, double w) { return a + (b - a) * w; }

// Bridges short invalid runs, splits at long ones, then fills missing speed and
// heading from positions.
std::vector<TrajectoryTrack> prepare_track(const std::string& track_id, AgentClass agent_class,
                                           std::vector<RawPoint> raw, const ReadOptions& options) {
  std::vector<std::vector<RawPoint>> pieces(1);
  std::optional<std::size_t> last_valid;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!raw[i].p.valid) continue;
    if (last_valid && *last_valid + 1 < i) {
      const RawPoint& lo = raw[*last_valid];
      const RawPoint& hi = raw[i];
      if (hi.p.t - lo.p.t <= options.max_bridge_gap + 1e-9) {
        for (std::size_t j = *last_valid + 1; j < i; ++j) {
          RawPoint fill = raw[j];
          const double w = (fill.p.t - lo.p.t) / (hi.p.t - lo.p.t);
          fill.p.x = lerp(lo.p.x, hi.p.x, w);
          fill.p.y = lerp(lo.p.y, hi.p.y, w);
          fill.p.v = lerp(lo.p.v, hi.p.v, w);
          fill.p.a = lerp(lo.p.a, hi.p.a, w);
          fill.p.heading = wrap_angle(lo.p.heading + w * wrap_angle(hi.p.heading - lo.p.heading));
          fill.has_v = lo.has_v && hi.has_v;
          fill.has_a = lo.has_a && hi.has_a;
          fill.has_heading = lo.has_heading && hi.has_heading;
          fill.p.valid = true;
          pieces.back().push_back(fill);
        }
      } else {
        pieces.emplace_back();
      }
    }
    pieces.back().push_back(raw[i]);
    last_valid = i;
  }

  std::vector<TrajectoryTrack> out;
  const bool split = pieces.size() > 1;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    auto& piece = pieces[k];
    const std::string id = split ? track_id + "." + std::to_string(k + 1) : track_id;
    if (piece.size() < 2) {
      log().warn("dropping track {}: fewer than 2 valid points", id);
      continue;
    }
    TrajectoryTrack track;
    track.track_id = id;
    track.agent_class = agent_class;
    if (split) track.source_track_id = track_id;

    bool all_v = true, all_a = true, all_heading = true;
    for (const auto& rp : piece) {
      all_v &= rp.has_v;
      all_a &= rp.has_a;
      all_heading &= rp.has_heading;
      track.points.push_back(rp.p);
    }
    auto& pts = track.points;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = i == 0 ? 0 : i - 1;
      const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
      const double dt = pts[hi].t - pts[lo].t;
      const double dx = pts[hi].x - pts[lo].x;
      const double dy = pts[hi].y - pts[lo].y;
      if (!all_v) pts[i].v = std::hypot(dx, dy) / dt;
      if (!all_heading) {
        if (dx != 0.0 || dy != 0.0) {
          pts[i].heading = std::atan2(dy, dx);
        } else {
          pts[i].heading = i > 0 ? pts[i - 1].heading : 0.0;
        }
      }
    }
    if (!all_heading) {
      // Stationary prefix: take the first heading that was resolved.
      for (std::size_t i = 0; i < n; ++i) {
        if (pts[i].x != pts[std::min(i + 1, n - 1)].x || pts[i].y != pts[std::min(i + 1, n - 1)].y) {
          for (std::size_t j = 0; j < i; ++j) pts[j].heading = pts[i].heading;
          break;
        }
      }
    }
    track.accel_missing = !all_a;
    if (!all_a) {
      for (auto& p : pts) p.a = 0.0;
    }
    out.push_back(std::move(track));
  }
  return out;
}

Scenario parse_scenario(const json& rec, const Where& where, const ReadOptions& options) {
  if (!rec.is_object()) where.fail("<record>", "", "must be a JSON object");
  Scenario sc;
  sc.scenario_id = require_string(rec, "scenario_id", where, "");
  const std::string source = require_string(rec, "source", where, "");
  const auto parsed_source = parse_data_source(source);
  if (!parsed_source) where.fail("source", "", "unknown source \"" + source + "\"");
  sc.source = *parsed_source;
  sc.duration = require_number(rec, "duration", where, "");
  if (!(sc.duration > 0.0)) where.fail("duration", "", "must be positive");

  auto map_it = rec.find("map_ref");
  if (map_it == rec.end() || !map_it->is_string() || map_it->get<std::string>().empty()) {
    where.fail("map_ref", "", "is missing; every scenario must reference a map", ErrorCode::kDanglingReference);
  }
  sc.map_ref = map_it->get<std::string>();
  if (auto it = rec.find("smoothed"); it != rec.end() && it->is_boolean()) sc.smoothed = it->get<bool>();

  const json& tracks = require(rec, "tracks", where, "");
  if (!tracks.is_array()) where.fail("tracks", "", "must be an array");

  std::set<std::string> av_agents;
  for (std::size_t ti = 0; ti < tracks.size(); ++ti) {
    const json& jt = tracks[ti];
    const std::string tpath = "tracks[" + std::to_string(ti) + "]";
    if (!jt.is_object()) where.fail("tracks", tpath, "must be an object");
    const std::string track_id = require_string(jt, "track_id", where, tpath);
    const std::string cls = require_string(jt, "agent_class", where, tpath);
    const auto agent_class = parse_agent_class(cls);
    if (!agent_class) where.fail("agent_class", tpath, "unknown class \"" + cls + "\"");
    std::string source_track_id;
    if (auto it = jt.find("source_track_id"); it != jt.end() && it->is_string()) {
      source_track_id = it->get<std::string>();
    }

    const json& pts = require(jt, "points", where, tpath);
    if (!pts.is_array()) where.fail("points", tpath, "must be an array");
    std::vector<RawPoint> raw;
    raw.reserve(pts.size());
    for (std::size_t pi = 0; pi < pts.size(); ++pi) {
      const json& jp = pts[pi];
      const std::string ppath = tpath + ".points[" + std::to_string(pi) + "]";
      if (!jp.is_object()) where.fail("points", ppath, "must be an object");
      RawPoint rp;
      rp.p.t = require_number(jp, "t", where, ppath);
      if (!raw.empty() && !(rp.p.t > raw.back().p.t)) where.fail("t", ppath, "must be strictly increasing");
      if (rp.p.t < -1e-6 || rp.p.t > sc.duration + 1e-6) where.fail("t", ppath, "lies outside [0, duration]");
      if (auto it = jp.find("valid"); it != jp.end() && !it->is_null()) {
        if (!it->is_boolean()) where.fail("valid", ppath, "must be a boolean");
        rp.p.valid = it->get<bool>();
      }
      if (rp.p.valid) {
        rp.p.x = require_number(jp, "x", where, ppath);
        rp.p.y = require_number(jp, "y", where, ppath);
      }
      if (auto v = optional_number(jp, "v", where, ppath)) {
        if (*v < 0.0) where.fail("v", ppath, "must be non-negative");
        rp.p.v = *v;
        rp.has_v = true;
      }
      if (auto a = optional_number(jp, "a", where, ppath)) {
        rp.p.a = *a;
        rp.has_a = true;
      }
      if (auto h = optional_number(jp, "heading", where, ppath)) {
        if (std::abs(*h) > std::numbers::pi + 1e-9) where.fail("heading", ppath, "must lie in [-pi, pi]");
        rp.p.heading = *h;
        rp.has_heading = true;
      }
      raw.push_back(rp);
    }

    if (*agent_class == AgentClass::kAv) {
      av_agents.insert(source_track_id.empty() ? track_id : source_track_id);
      if (av_agents.size() > 1) where.fail("agent_class", tpath, "a scenario may contain only one AV");
    }
    for (auto& track : prepare_track(track_id, *agent_class, std::move(raw), options)) {
      if (!source_track_id.empty() && track.source_track_id.empty()) track.source_track_id = source_track_id;
      sc.tracks.push_back(std::move(track));
    }
  }

  try {
    validate(sc);
  } catch (const Error& e) {
    where.fail("<scenario>", "", e.what());
  }
  return sc;
}

json point_to_json(const TrajectoryPoint& p, bool write_accel) {
  json j = {{"t", p.t}, {"x", p.x}, {"y", p.y}, {"v", p.v}};
  if (write_accel) j["a"] = p.a;
  j["heading"] = p.heading;
  return j;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

}  // namespace

std::vector<Scenario> parse_scenarios(std::istream& in, std::string_view name, const ReadOptions& options) {
  std::vector<Scenario> out;
  std::optional<DatasetManifest> manifest;
  std::string line;
  std::size_t record = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kParse, std::string(name) + ": line " + std::to_string(line_no) + ": " + e.what());
    }
    if (rec.is_object() && rec.contains("manifest")) {
      const Where where{name, 0};
      const json& m = rec["manifest"];
      DatasetManifest dm;
      const std::string src = require_string(m, "source", where, "manifest");
      const auto parsed = parse_data_source(src);
      if (!parsed) where.fail("source", "manifest", "unknown source \"" + src + "\"");
      dm.source = *parsed;
      const json& count = require(m, "scenario_count", where, "manifest");
      if (!count.is_number_unsigned()) where.fail("scenario_count", "manifest", "must be a non-negative integer");
      dm.scenario_count = count.get<std::size_t>();
      dm.schema_version = require_string(m, "schema_version", where, "manifest");
      if (dm.schema_version != kSchemaVersion) {
        where.fail("schema_version", "manifest", "unsupported version \"" + dm.schema_version + "\"");
      }
      manifest = dm;
      continue;
    }
    ++record;
    out.push_back(parse_scenario(rec, Where{name, record}, options));
  }
  if (manifest && manifest->scenario_count != out.size()) {
    throw Error(ErrorCode::kParse, std::string(name) + ": manifest declares " +
                                       std::to_string(manifest->scenario_count) + " scenarios, found " +
                                       std::to_string(out.size()));
  }
  return out;
}

std::vector<Scenario> read_scenarios(const std::filesystem::path& path, const ReadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return parse_scenarios(in, path.filename().string(), options);
}

void check_map_refs(const std::vector<Scenario>& scenarios, const std::vector<MapBundle>& maps) {
  for (const auto& sc : scenarios) {
    bool found = false;
    for (const auto& m : maps) found |= m.map_id == sc.map_ref;
    if (!found) {
      throw Error(ErrorCode::kDanglingReference,
                  "scenario " + sc.scenario_id + " references unknown map \"" + sc.map_ref + "\"");
    }
  }
}

MapBundle parse_map(std::string_view text, std::string_view name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string(name) + ": " + e.what());
  }
  const Where where{name, 1};
  if (!doc.is_object()) where.fail("<map>", "", "must be a JSON object");

  MapBundle map;
  map.map_id = require_string(doc, "map_id", where, "");
  const json& lanes = require(doc, "lanes", where, "");
  if (!lanes.is_array()) where.fail("lanes", "", "must be an array");
  std::set<std::string> lane_ids;
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    const std::string path = "lanes[" + std::to_string(i) + "]";
    const json& jl = lanes[i];
    LanePolyline lane;
    lane.lane_id = require_string(jl, "lane_id", where, path);
    if (!lane_ids.insert(lane.lane_id).second) where.fail("lane_id", path, "duplicates \"" + lane.lane_id + "\"");
    if (auto it = jl.find("role"); it != jl.end() && !it->is_null()) {
      if (!it->is_string()) where.fail("role", path, "must be a string");
      const auto role = parse_lane_role(it->get<std::string>());
      if (!role) where.fail("role", path, "unknown role \"" + it->get<std::string>() + "\"");
      lane.role = *role;
    }
    const json& cl = require(jl, "centerline", where, path);
    if (!cl.is_array()) where.fail("centerline", path, "must be an array");
    for (const auto& pt : cl) {
      if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
        where.fail("centerline", path, "points must be [x, y] pairs");
      }
      lane.centerline.push_back({pt[0].get<double>(), pt[1].get<double>()});
    }
    try {
      validate(lane);
    } catch (const Error& e) {
      where.fail("centerline", path, e.what());
    }
    map.lanes.push_back(std::move(lane));
  }

  const json& signs = require(doc, "stop_signs", where, "");
  if (!signs.is_array()) where.fail("stop_signs", "", "must be an array");
  for (std::size_t i = 0; i < signs.size(); ++i) {
    const std::string path = "stop_signs[" + std::to_string(i) + "]";
    const json& js = signs[i];
    StopSign sign;
    sign.sign_id = require_string(js, "sign_id", where, path);
    sign.x = require_number(js, "x", where, path);
    sign.y = require_number(js, "y", where, path);
    sign.lane_id = require_string(js, "lane_id", where, path);
    if (!lane_ids.count(sign.lane_id)) {
      where.fail("lane_id", path, "references unknown lane \"" + sign.lane_id + "\"",
                 ErrorCode::kDanglingReference);
    }
    map.stop_signs.push_back(std::move(sign));
  }
  return map;
}

MapBundle read_map(const std::filesystem::path& path) {
  return parse_map(read_file(path), path.filename().string());
}

void write_scenarios(const std::vector<Scenario>& scenarios, const std::filesystem::path& path) {
  std::string text;
  DataSource source = scenarios.empty() ? DataSource::kSynthetic : scenarios.front().source;
  json manifest = {{"manifest",
                    {{"source", std::string(to_string(source))},
                     {"scenario_count", scenarios.size()},
                     {"schema_version", std::string(kSchemaVersion)}}}};
  text += manifest.dump() + "\n";
  for (const auto& sc : scenarios) {
    json tracks = json::array();
    for (const auto& track : sc.tracks) {
      json pts = json::array();
      const bool write_accel = !track.accel_missing;
      for (const auto& p : track.points) pts.push_back(point_to_json(p, write_accel));
      json jt = {{"track_id", track.track_id},
                 {"agent_class", std::string(to_string(track.agent_class))},
                 {"points", std::move(pts)}};
      if (!track.source_track_id.empty()) jt["source_track_id"] = track.source_track_id;
      tracks.push_back(std::move(jt));
    }
    json rec = {{"scenario_id", sc.scenario_id},
                {"source", std::string(to_string(sc.source))},
                {"duration", sc.duration},
                {"map_ref", sc.map_ref},
                {"smoothed", sc.smoothed},
                {"tracks", std::move(tracks)}};
    text += rec.dump() + "\n";
  }
  write_file(path, text);
}

void write_map(const MapBundle& map, const std::filesystem::path& path) {
  json lanes = json::array();
  for (const auto& lane : map.lanes) {
    json cl = json::array();
    for (const auto& p : lane.centerline) cl.push_back({p.x, p.y});
    lanes.push_back({{"lane_id", lane.lane_id}, {"role", std::string(to_string(lane.role))}, {"centerline", cl}});
  }
  json signs = json::array();
  for (const auto& s : map.stop_signs) {
    signs.push_back({{"sign_id", s.sign_id}, {"x", s.x}, {"y", s.y}, {"lane_id", s.lane_id}});
  }
  json doc = {{"map_id", map.map_id}, {"stop_signs", signs}, {"lanes", lanes}};
  write_file(path, doc.dump(1) + "\n");
}

}  // namespace avix::io
