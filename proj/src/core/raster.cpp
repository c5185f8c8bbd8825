#include "core/raster.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "core/errors.hpp"

namespace recho {

double Raster2D::sample(const Vec2& p) const {
  double fx = (p.x - x0) / dx;
  double fy = (p.y - y0) / dy;
  fx = std::clamp(fx, 0.0, static_cast<double>(nx - 1));
  fy = std::clamp(fy, 0.0, static_cast<double>(ny - 1));
  int ix = std::min(static_cast<int>(fx), nx - 2);
  int iy = std::min(static_cast<int>(fy), ny - 2);
  if (nx == 1) ix = 0;
  if (ny == 1) iy = 0;
  const double tx = nx == 1 ? 0.0 : fx - ix;
  const double ty = ny == 1 ? 0.0 : fy - iy;
  const int ix1 = std::min(ix + 1, nx - 1);
  const int iy1 = std::min(iy + 1, ny - 1);
  const double v00 = at(ix, iy);
  const double v10 = at(ix1, iy);
  const double v01 = at(ix, iy1);
  const double v11 = at(ix1, iy1);
  return v00 * (1 - tx) * (1 - ty) + v10 * tx * (1 - ty) + v01 * (1 - tx) * ty +
         v11 * tx * ty;
}

double Raster2D::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double Raster2D::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : values) m = std::min(m, v);
  return m;
}

double Raster2D::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values) m = std::max(m, v);
  return m;
}

double Raster2D::sum() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

double Raster2D::l2_diff_rel(const Raster2D& other) const {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - other.values[i];
    num += d * d;
    den += other.values[i] * other.values[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

namespace {

void put_le64(std::ostream& os, double v) {
  const uint64_t bits = std::bit_cast<uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

double get_le64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_raster(const Raster2D& r, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open for writing: " + path);
  os << "RGF1\n";
  os << r.nx << " " << r.ny << "\n";
  os << fmt_full(r.x0) << " " << fmt_full(r.y0) << " " << fmt_full(r.dx) << " "
     << fmt_full(r.dy) << "\n";
  for (double v : r.values) put_le64(os, v);
  if (!os) throw FormatError("write failed: " + path);
}

Raster2D read_raster(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open: " + path);
  std::string magic;
  if (!std::getline(is, magic) || magic != "RGF1")
    throw FormatError(path + ": bad magic line (expected RGF1)");

  Raster2D r;
  {
    std::string line;
    if (!std::getline(is, line)) throw FormatError(path + ": missing dimension line");
    std::istringstream ss(line);
    if (!(ss >> r.nx >> r.ny) || r.nx <= 0 || r.ny <= 0)
      throw FormatError(path + ": bad dimensions nx ny");
  }
  {
    std::string line;
    if (!std::getline(is, line)) throw FormatError(path + ": missing geometry line");
    std::istringstream ss(line);
    if (!(ss >> r.x0 >> r.y0 >> r.dx >> r.dy))
      throw FormatError(path + ": bad geometry x0 y0 dx dy");
    if (!(r.dx > 0.0) || !(r.dy > 0.0))
      throw FormatError(path + ": grid spacing must be positive");
  }
  const size_t n = static_cast<size_t>(r.nx) * r.ny;
  r.values.resize(n);
  for (size_t i = 0; i < n; ++i) {
    r.values[i] = get_le64(is);
    if (is.eof() || is.fail())
      throw FormatError(path + ": payload length (expected " + std::to_string(n) +
                        " values, got " + std::to_string(i) + ")");
    if (!std::isfinite(r.values[i]))
      throw FormatError(path + ": non-finite value at index " + std::to_string(i));
  }
  return r;
}

SpeedModel SpeedModel::from_raster(Raster2D r) {
  SpeedModel m;
  m.c_plus = r.max_value();
  m.c_minus = r.min_value();
  if (!(m.c_minus > 0.0)) throw ConfigError("speed raster must be strictly positive");
  m.raster = std::move(r);
  return m;
}

}  // namespace recho
