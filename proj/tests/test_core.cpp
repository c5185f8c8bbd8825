#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/raster.hpp"
#include "core/record.hpp"

using namespace recho;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::vector<unsigned char> slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("raster format: 1x1 zero raster has an 8-byte zero payload") {
  Raster2D r;
  r.nx = r.ny = 1;
  r.x0 = r.y0 = 0.0;
  r.dx = r.dy = 1.0;
  r.values = {0.0};
  const std::string p = temp_path("recho_zero.rgf");
  write_raster(r, p);
  const auto bytes = slurp(p);
  // Header: "RGF1\n" "1 1\n" "0 0 1 1\n", then 8 zero bytes.
  REQUIRE(bytes.size() > 8);
  for (size_t i = bytes.size() - 8; i < bytes.size(); ++i) CHECK(bytes[i] == 0);
  const Raster2D back = read_raster(p);
  CHECK(back.values == r.values);
}

TEST_CASE("raster format: 2x2 payload is little-endian doubles in order") {
  Raster2D r;
  r.nx = r.ny = 2;
  r.x0 = r.y0 = 0.0;
  r.dx = r.dy = 0.5;
  r.values = {1.0, 2.0, 3.0, 4.0};
  const std::string p = temp_path("recho_2x2.rgf");
  write_raster(r, p);
  const auto bytes = slurp(p);
  REQUIRE(bytes.size() >= 32);
  const size_t off = bytes.size() - 32;
  for (int v = 0; v < 4; ++v) {
    uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
      bits |= static_cast<uint64_t>(bytes[off + 8 * v + i]) << (8 * i);
    double d;
    static_assert(sizeof(d) == 8);
    std::memcpy(&d, &bits, 8);
    CHECK(d == static_cast<double>(v + 1));
  }
}

TEST_CASE("raster round-trip is bit-exact for random rasters") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  Raster2D r;
  r.nx = r.ny = 64;
  r.x0 = -1.25;
  r.y0 = 0.5;
  r.dx = 0.013;
  r.dy = 0.021;
  r.values.resize(64 * 64);
  for (double& v : r.values) v = dist(rng);
  const std::string p = temp_path("recho_rand.rgf");
  write_raster(r, p);
  const Raster2D back = read_raster(p);
  CHECK(back.nx == r.nx);
  CHECK(back.ny == r.ny);
  CHECK(back.x0 == r.x0);
  CHECK(back.y0 == r.y0);
  CHECK(back.dx == r.dx);
  CHECK(back.dy == r.dy);
  CHECK(back.values == r.values);  // element-wise bit-exact
  // Byte-for-byte: rewriting reproduces the file.
  const std::string p2 = temp_path("recho_rand2.rgf");
  write_raster(back, p2);
  CHECK(slurp(p) == slurp(p2));
}

TEST_CASE("raster read errors carry the offending field") {
  const std::string p = temp_path("recho_bad.rgf");
  {
    std::ofstream os(p, std::ios::binary);
    os << "RGF2\n1 1\n0 0 1 1\n";
    const char zeros[8] = {};
    os.write(zeros, 8);
  }
  CHECK_THROWS_WITH_AS(read_raster(p), doctest::Contains("magic"), FormatError);

  Raster2D r;
  r.nx = 2;
  r.ny = 1;
  r.dx = r.dy = 1.0;
  r.values = {1.0, 2.0};
  write_raster(r, p);
  // Truncate the last float.
  {
    const auto bytes = slurp(p);
    std::ofstream os(p, std::ios::binary);
    os.write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size() - 8));
  }
  CHECK_THROWS_WITH_AS(read_raster(p), doctest::Contains("payload length"), FormatError);

  // Non-finite payload.
  {
    std::ofstream os(p, std::ios::binary);
    os << "RGF1\n1 1\n0 0 1 1\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    os.write(reinterpret_cast<const char*>(&nan), 8);
  }
  CHECK_THROWS_WITH_AS(read_raster(p), doctest::Contains("non-finite"), FormatError);
}

TEST_CASE("speed model extrema match a rescan") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(0.5, 2.0);
  Raster2D r;
  r.nx = r.ny = 16;
  r.dx = r.dy = 0.1;
  r.values.resize(256);
  for (double& v : r.values) v = dist(rng);
  const SpeedModel m = SpeedModel::from_raster(r);
  CHECK(m.c_plus == m.raster.max_value());
  CHECK(m.c_minus == m.raster.min_value());
  CHECK(m.c_minus > 0.0);
  CHECK(m.c_minus <= m.c_plus);
}

TEST_CASE("record CSV export: header and 17 significant digits") {
  TimeSeriesRecord rec;
  rec.dt = 0.1;
  rec.t_start = 0.0;
  rec.channels = {{{1.0, 0.0}, {1.0, 0.0}}, {{0.0, 1.0}, {0.0, 1.0}}};
  rec.samples = {0.1234567890123456789, -2.0, 3.0, 4.0};
  const std::string p = temp_path("recho_rec.csv");
  write_record_csv(rec, p);
  std::ifstream is(p);
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,ch0,ch1");
  std::getline(is, line);
  CHECK(line.find("0.12345678901234568") != std::string::npos);
  const TimeSeriesRecord back = read_record_csv(p, rec.channels);
  CHECK(back.samples == rec.samples);  // %.17g round-trips doubles
  CHECK(back.dt == doctest::Approx(rec.dt));
}

TEST_CASE("record validation rejects non-unit normals") {
  TimeSeriesRecord rec;
  rec.dt = 0.1;
  rec.channels = {{{1.0, 0.0}, {1.0, 1e-5}}};
  rec.samples = {0.0};
  CHECK_THROWS_AS(rec.validate(), FormatError);
}

namespace {

std::string config_json(const std::string& sources, const std::string& extra = "") {
  return R"({
    "domain": {"x0": -1, "y0": -1, "x1": 1, "y1": 1, "nx": 64, "ny": 64},
    "omega": {"center": [0, 0], "radius": 0.85},
    "speed": {"kind": "constant", "c0": 1.0},
    "T": 2.0,
    "sources": [)" + sources + "]" + extra + "}";
}

}  // namespace

TEST_CASE("config: minimal valid single-event run") {
  const RunConfig cfg = parse_config(
      config_json(R"({"t": 0.3, "center": [0.1, 0.0], "support": {"kind": "ball", "radius": 0.1}})"),
      "");
  REQUIRE(cfg.sources.size() == 1);
  CHECK(cfg.sources[0].t == doctest::Approx(0.3));
  CHECK(cfg.domain.grid().dx == doctest::Approx(2.0 / 63));
}

TEST_CASE("config: each invariant violation has a distinct diagnostic") {
  // Unordered times.
  CHECK_THROWS_WITH_AS(
      parse_config(config_json(R"({"t": 0.5, "center": [0,0], "support": {"kind":"ball","radius":0.1}},
                                  {"t": 0.2, "center": [0,0], "support": {"kind":"ball","radius":0.1}})"),
                   ""),
      doctest::Contains("not strictly increasing"), ConfigError);
  // T before the last source.
  CHECK_THROWS_WITH_AS(
      parse_config(config_json(R"({"t": 2.5, "center": [0,0], "support": {"kind":"ball","radius":0.1}})"),
                   ""),
      doctest::Contains("T must exceed"), ConfigError);
  // Support outside the box.
  CHECK_THROWS_WITH_AS(
      parse_config(config_json(R"({"t": 0.3, "center": [0.95, 0], "support": {"kind":"ball","radius":0.1}})"),
                   ""),
      doctest::Contains("support escapes domain"), ConfigError);
  // CFL out of range.
  CHECK_THROWS_WITH_AS(
      parse_config(config_json(R"({"t": 0.3, "center": [0,0], "support": {"kind":"ball","radius":0.1}})",
                               R"(, "solver": {"cfl": 1.1})"),
                   ""),
      doctest::Contains("CFL"), ConfigError);
}
