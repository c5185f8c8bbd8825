#include "core/record.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace recho {

double TimeSeriesRecord::value_at(double t, int ch) const {
  const double f = (t - t_start) / dt;
  if (f <= 0.0) return f < -1e-9 ? 0.0 : at(0, ch);
  const int n = n_steps();
  if (f >= n - 1) return f > n - 1 + 1e-9 ? 0.0 : at(n - 1, ch);
  const int i = static_cast<int>(f);
  const double a = f - i;
  return at(i, ch) * (1.0 - a) + at(i + 1, ch) * a;
}

void TimeSeriesRecord::validate() const {
  if (!(dt > 0.0)) throw FormatError("record dt must be positive");
  if (n_steps() < 1) throw FormatError("record must contain at least one step");
  if (samples.size() != static_cast<size_t>(n_steps()) * channels.size())
    throw FormatError("record sample count does not match channel layout");
  for (const Channel& c : channels) {
    if (std::abs(c.normal.norm() - 1.0) > 1e-12)
      throw FormatError("channel normal is not unit length");
  }
}

double TimeSeriesRecord::l2_norm() const {
  double s = 0.0;
  for (double v : samples) s += v * v;
  return std::sqrt(s);
}

double TimeSeriesRecord::l2_diff_rel(const TimeSeriesRecord& other) const {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double d = samples[i] - other.samples[i];
    num += d * d;
    den += other.samples[i] * other.samples[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

TimeSeriesRecord TimeSeriesRecord::zeros_like(const TimeSeriesRecord& proto) {
  TimeSeriesRecord r;
  r.dt = proto.dt;
  r.t_start = proto.t_start;
  r.channels = proto.channels;
  r.samples.assign(proto.samples.size(), 0.0);
  return r;
}

void write_record_csv(const TimeSeriesRecord& rec, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot open for writing: " + path);
  os << "t";
  for (int c = 0; c < rec.n_channels(); ++c) os << ",ch" << c;
  os << "\n";
  char buf[64];
  for (int s = 0; s < rec.n_steps(); ++s) {
    std::snprintf(buf, sizeof(buf), "%.17g", rec.time_of(s));
    os << buf;
    for (int c = 0; c < rec.n_channels(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", rec.at(s, c));
      os << ',' << buf;
    }
    os << "\n";
  }
  if (!os) throw FormatError("write failed: " + path);
}

TimeSeriesRecord read_record_csv(const std::string& path, const std::vector<Channel>& channels) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open: " + path);
  std::string header;
  if (!std::getline(is, header) || header.rfind("t,", 0) != 0)
    throw FormatError(path + ": bad CSV header");

  TimeSeriesRecord rec;
  rec.channels = channels;
  std::vector<double> times;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    if (!std::getline(ss, cell, ',')) throw FormatError(path + ": short row");
    times.push_back(std::stod(cell));
    for (size_t c = 0; c < channels.size(); ++c) {
      if (!std::getline(ss, cell, ','))
        throw FormatError(path + ": row has fewer channels than expected");
      rec.samples.push_back(std::stod(cell));
    }
  }
  if (times.size() < 2) throw FormatError(path + ": need at least two rows");
  rec.t_start = times.front();
  rec.dt = times[1] - times[0];
  rec.validate();
  return rec;
}

void CauchyRecord::validate() const {
  dirichlet.validate();
  neumann.validate();
  if (dirichlet.dt != neumann.dt || dirichlet.t_start != neumann.t_start ||
      dirichlet.n_channels() != neumann.n_channels() ||
      dirichlet.n_steps() != neumann.n_steps())
    throw FormatError("Cauchy record: Dirichlet/Neumann grids do not match");
}

}  // namespace recho
