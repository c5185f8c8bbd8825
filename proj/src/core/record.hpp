#pragma once

#include <string>
#include <vector>

#include "core/vec2.hpp"

namespace recho {

// One boundary sample point: position on the recording curve plus the
// outward unit normal there.
struct Channel {
  Vec2 pos;
  Vec2 normal;
};

// Uniformly sampled multi-channel time series (boundary traces).
struct TimeSeriesRecord {
  double dt = 0.0;
  double t_start = 0.0;
  std::vector<Channel> channels;
  std::vector<double> samples;  // [n_steps x n_channels], step-major

  int n_channels() const { return static_cast<int>(channels.size()); }
  int n_steps() const {
    return channels.empty() ? 0 : static_cast<int>(samples.size() / channels.size());
  }
  double t_end() const { return t_start + (n_steps() - 1) * dt; }
  double time_of(int step) const { return t_start + step * dt; }

  double& at(int step, int ch) { return samples[static_cast<size_t>(step) * channels.size() + ch]; }
  double at(int step, int ch) const {
    return samples[static_cast<size_t>(step) * channels.size() + ch];
  }

  // Value at arbitrary time by linear interpolation; zero outside the span.
  double value_at(double t, int ch) const;

  void validate() const;  // throws on violated invariants (unit normals etc.)

  double l2_norm() const;
  double l2_diff_rel(const TimeSeriesRecord& other) const;

  static TimeSeriesRecord zeros_like(const TimeSeriesRecord& proto);
};

// CSV export/import: header "t,ch0,ch1,...", one row per step, 17 significant
// digits. Channel geometry is not part of the CSV.
void write_record_csv(const TimeSeriesRecord& rec, const std::string& path);
// Reads values back into `proto`'s channel layout (count must match).
TimeSeriesRecord read_record_csv(const std::string& path, const std::vector<Channel>& channels);

// Boundary Cauchy data: Dirichlet trace u and Neumann trace du/dnu on the
// same channels and time grid.
struct CauchyRecord {
  TimeSeriesRecord dirichlet;
  TimeSeriesRecord neumann;

  void validate() const;  // matching dt, t_start, channel layout
};

}  // namespace recho
