#include <filesystem>
#include <random>
#include <sstream>

#include "avix/core/error.hpp"
#include "avix/io/scenario_io.hpp"
#include "avix/io/table.hpp"
#include "doctest.h"
#include "support/builders.hpp"

using namespace avix;
namespace fs = std::filesystem;

namespace {

std::string record(const std::string& id, const std::string& points) {
  return R"({"scenario_id":")" + id + R"(","source":"WAYMO","duration":2.0,"map_ref":"m","tracks":[)" +
         R"({"track_id":"a","agent_class":"HV","points":)" + points + "}]}";
}

const std::string kGoodPoints = R"([{"t":0,"x":0,"y":0,"v":1},{"t":0.1,"x":0.1,"y":0,"v":1},{"t":0.2,"x":0.2,"y":0,"v":1}])";

std::vector<Scenario> parse(const std::string& text, io::ReadOptions opt = {}) {
  std::istringstream in(text);
  return io::parse_scenarios(in, "test.jsonl", opt);
}

Error error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected avix::Error");
  return Error(ErrorCode::kInternal, "");
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("avix_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("three well-formed records give three scenarios") {
  const auto out = parse(record("s1", kGoodPoints) + "\n" + record("s2", kGoodPoints) + "\n\n" +
                         record("s3", kGoodPoints) + "\n");
  REQUIRE(out.size() == 3);
  CHECK(out[2].scenario_id == "s3");
  CHECK(out[0].source == DataSource::kWaymo);
  CHECK(out[0].tracks[0].points.size() == 3);
}

TEST_CASE("negative speed is a parse error naming v and the record") {
  const std::string bad = R"([{"t":0,"x":0,"y":0,"v":1},{"t":0.1,"x":0.1,"y":0,"v":-2}])";
  const auto e = error_of([&] { parse(record("ok", kGoodPoints) + "\n" + record("bad", bad)); });
  CHECK(e.code() == ErrorCode::kParse);
  const std::string msg = e.what();
  CHECK(msg.find("test.jsonl") != std::string::npos);
  CHECK(msg.find("record 2") != std::string::npos);
  CHECK(msg.find("\"v\"") != std::string::npos);
}

TEST_CASE("schema errors") {
  SUBCASE("malformed JSON") { CHECK(error_of([] { parse("{not json\n"); }).code() == ErrorCode::kParse); }
  SUBCASE("missing map_ref is a dangling reference") {
    std::string rec = record("s", kGoodPoints);
    rec.replace(rec.find(R"("map_ref":"m",)"), std::string(R"("map_ref":"m",)").size(), "");
    CHECK(error_of([&] { parse(rec); }).code() == ErrorCode::kDanglingReference);
  }
  SUBCASE("unknown agent class") {
    std::string rec = record("s", kGoodPoints);
    rec.replace(rec.find("\"HV\""), 4, "\"TRUCK\"");
    CHECK(error_of([&] { parse(rec); }).code() == ErrorCode::kParse);
  }
  SUBCASE("manifest count mismatch") {
    const std::string manifest = R"({"manifest":{"source":"WAYMO","scenario_count":2,"schema_version":"1.0"}})";
    CHECK(error_of([&] { parse(manifest + "\n" + record("s", kGoodPoints)); }).code() == ErrorCode::kParse);
  }
}

TEST_CASE("invalid frames are bridged or split") {
  const std::string pts =
      R"([{"t":0,"x":0,"y":0},{"t":0.1,"x":1,"y":0},{"t":0.2,"valid":false},{"t":0.3,"x":3,"y":0},)"
      R"({"t":0.4,"valid":false},{"t":0.5,"valid":false},{"t":0.6,"valid":false},{"t":0.7,"valid":false},)"
      R"({"t":0.8,"valid":false},{"t":0.9,"x":9,"y":0},{"t":1.0,"x":10,"y":0}])";
  const auto out = parse(record("s", pts));
  const auto& tracks = out[0].tracks;
  REQUIRE(tracks.size() == 2);
  CHECK(tracks[0].track_id == "a.1");
  CHECK(tracks[1].track_id == "a.2");
  CHECK(tracks[0].agent_id() == "a");
  REQUIRE(tracks[0].points.size() == 4);
  CHECK(tracks[0].points[2].x == doctest::Approx(2.0));
  // Speed rebuilt from positions when absent.
  CHECK(tracks[1].points[0].v == doctest::Approx(10.0));
  CHECK(tracks[0].accel_missing);
}

TEST_CASE("map parsing") {
  const auto map = testing::four_way_map();
  CHECK(map.map_id == "town_4way");
  CHECK(map.find_lane("S_in") != nullptr);
  CHECK(map.find_lane("nope") == nullptr);

  SUBCASE("empty stop sign list is valid") {
    const auto m = io::parse_map(R"({"map_id":"m","stop_signs":[],"lanes":[]})", "m.json");
    CHECK(m.stop_signs.empty());
  }
  SUBCASE("one-point lane is rejected") {
    const auto e = error_of([] {
      io::parse_map(R"({"map_id":"m","stop_signs":[],"lanes":[{"lane_id":"L","centerline":[[0,0]]}]})", "m.json");
    });
    CHECK(e.code() == ErrorCode::kParse);
  }
  SUBCASE("sign on an unknown lane") {
    const auto e = error_of([] {
      io::parse_map(R"({"map_id":"m","stop_signs":[{"sign_id":"s","x":0,"y":0,"lane_id":"X"}],"lanes":[]})",
                    "m.json");
    });
    CHECK(e.code() == ErrorCode::kDanglingReference);
  }
}

TEST_CASE("map references are checked") {
  const auto scenarios = parse(record("s", kGoodPoints));
  io::MapBundle m;
  m.map_id = "other";
  CHECK(error_of([&] { io::check_map_refs(scenarios, {m}); }).code() == ErrorCode::kDanglingReference);
  m.map_id = "m";
  CHECK_NOTHROW(io::check_map_refs(scenarios, {m}));
}

TEST_CASE("scenario and map files round trip") {
  TempDir dir;
  const auto scenarios = io::read_scenarios(testing::fixture_dir() / "scenarios.jsonl");
  CHECK(scenarios.size() == 28);
  io::write_scenarios(scenarios, dir.path / "s.jsonl");
  const auto again = io::read_scenarios(dir.path / "s.jsonl");
  REQUIRE(again.size() == scenarios.size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    REQUIRE(again[i].tracks.size() == scenarios[i].tracks.size());
    for (std::size_t k = 0; k < again[i].tracks.size(); ++k) {
      const auto& a = again[i].tracks[k].points;
      const auto& b = scenarios[i].tracks[k].points;
      REQUIRE(a.size() == b.size());
      for (std::size_t j = 0; j < a.size(); ++j) {
        CHECK(a[j].x == b[j].x);
        CHECK(a[j].v == b[j].v);
      }
    }
  }
  const auto map = testing::four_way_map();
  io::write_map(map, dir.path / "m.json");
  const auto map2 = io::read_map(dir.path / "m.json");
  CHECK(map2.stop_signs.size() == map.stop_signs.size());
  CHECK(map2.lanes.size() == map.lanes.size());
}

TEST_CASE("number formatting keeps six significant digits") {
  CHECK(io::format_double(4.08) == "4.08000");
  CHECK(io::format_double(0.0) == "0.00000");
  CHECK(io::format_double(-1234.5678) == "-1234.57");
  CHECK(io::format_double(std::nan("")).empty());
  CHECK(io::format_cell(io::Cell{}).empty());
  CHECK(io::format_cell(io::Cell{std::int64_t{42}}) == "42");
}

TEST_CASE("tables") {
  TempDir dir;
  SUBCASE("zero rows write only the header") {
    io::Table t({"a", "b"});
    io::write_table(t, dir.path / "t.csv");
    const auto back = io::read_table(dir.path / "t.csv");
    CHECK(back.columns == std::vector<std::string>{"a", "b"});
    CHECK(back.rows.empty());
    CHECK(io::to_csv(t) == "a,b\n");
  }
  SUBCASE("row width is checked") {
    io::Table t({"a", "b"});
    CHECK(error_of([&] { t.add_row({std::int64_t{1}}); }).code() == ErrorCode::kParameter);
  }
  SUBCASE("missing column") {
    const auto back = io::parse_csv("a,b\n1,2\n", "x.csv");
    CHECK(back.column_index("b") == 1);
    CHECK(error_of([&] { (void)back.column_index("c"); }).code() == ErrorCode::kParse);
  }
  SUBCASE("unwritable path") {
    io::Table t({"a"});
    CHECK(error_of([&] { io::write_table(t, dir.path / "no" / "such" / "t.csv"); }).code() == ErrorCode::kIo);
  }
  SUBCASE("random rows round trip") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> real(-1e4, 1e4);
    std::uniform_int_distribution<int> pick(0, 3);
    const std::string alphabet = "ab,\"\n x";
    for (int trial = 0; trial < 50; ++trial) {
      io::Table t({"c0", "c1", "c2"});
      std::vector<std::vector<std::string>> expected;
      for (int r = 0; r < 8; ++r) {
        std::vector<io::Cell> row;
        std::vector<std::string> text;
        for (int c = 0; c < 3; ++c) {
          io::Cell cell;
          switch (pick(rng)) {
            case 0: break;
            case 1: cell = static_cast<std::int64_t>(real(rng)); break;
            case 2: cell = real(rng); break;
            default: {
              std::string s;
              for (int k = 0; k < 5; ++k) s += alphabet[rng() % alphabet.size()];
              cell = s;
            }
          }
          text.push_back(io::format_cell(cell));
          row.push_back(cell);
        }
        t.add_row(row);
        expected.push_back(text);
      }
      const auto back = io::parse_csv(io::to_csv(t), "r.csv");
      CHECK(back.columns == t.columns);
      CHECK(back.rows == expected);
    }
  }
}
