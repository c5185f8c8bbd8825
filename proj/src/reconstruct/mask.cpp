#include "reconstruct/mask.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "geometry/fast_marching.hpp"

namespace recho::reconstruct {

double ConeMask::max_h() const {
  double m = 0.0;
  for (double v : h) m = std::max(m, v);
  return m;
}

double ConeMask::factor(double t, int ch, double ramp) const {
  const double margin = h[ch] - std::abs(t);
  if (margin <= 0.0) return 0.0;
  if (ramp <= 0.0) return 1.0;
  return std::min(1.0, margin / ramp);
}

ConeMask full_mask(int n_channels, double span) {
  ConeMask m;
  m.kind = ConeMask::Kind::full;
  m.h.assign(n_channels, span);
  return m;
}

ConeMask build_mask(const Vec2& center, double R, double eps,
                    const std::vector<Channel>& channels,
                    const geometry::SpeedField& speed, double span, bool clamp) {
  if (!(eps > 0.0)) throw GeometryError("mask eps must be positive");
  ConeMask m;
  m.kind = ConeMask::Kind::ball_offset;
  m.center = center;
  m.radius = R;
  m.eps = eps;
  const geometry::DistanceField dist(center, speed);
  m.h.reserve(channels.size());
  for (const Channel& ch : channels) {
    double hv = std::max(dist.at(ch.pos) - R, 0.0) + eps;
    if (hv > span) {
      if (!clamp)
        throw SolverError("record too short for mask: need max h(y) <= record span");
      hv = span;
      m.clamped = true;
    }
    m.h.push_back(hv);
  }
  return m;
}

TimeSeriesRecord odd_extend(const TimeSeriesRecord& rec) {
  if (std::abs(rec.t_start) > 1e-12 * std::max(1.0, rec.dt))
    throw SolverError("odd_extend expects a record starting at t = 0");
  const int n = rec.n_steps();
  const int nc = rec.n_channels();
  TimeSeriesRecord out;
  out.dt = rec.dt;
  out.t_start = -rec.dt * (n - 1);
  out.channels = rec.channels;
  out.samples.assign(static_cast<size_t>(2 * n - 1) * nc, 0.0);
  for (int k = 0; k < n; ++k) {
    for (int c = 0; c < nc; ++c) {
      out.at(n - 1 + k, c) = rec.at(k, c);
      if (k > 0) out.at(n - 1 - k, c) = -rec.at(k, c);
    }
  }
  // t = 0 sample is forced to zero by oddness.
  for (int c = 0; c < nc; ++c) out.at(n - 1, c) = 0.0;
  return out;
}

CauchyRecord odd_extend(const CauchyRecord& rec) {
  return {odd_extend(rec.dirichlet), odd_extend(rec.neumann)};
}

}  // namespace recho::reconstruct
