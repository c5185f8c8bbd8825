#pragma once

#include <vector>

#include "core/record.hpp"
#include "geometry/boundary.hpp"
#include "geometry/speed_field.hpp"

namespace recho::reconstruct {

// Truncated influence cone on the boundary cylinder: data at channel y is
// kept for |t| < h(y). Built either as a full mask (h = span) or from
// h(y) = dist_to_ball(y, center, R) + eps.
struct ConeMask {
  enum class Kind { full, ball_offset };
  Kind kind = Kind::full;
  std::vector<double> h;  // per channel, seconds
  Vec2 center;
  double radius = 0.0;
  double eps = 0.0;
  bool clamped = false;  // true when h was clamped to the record span

  double max_h() const;

  // Masking factor in [0,1] at time t for channel ch; `ramp` is a smoothing
  // width (seconds) applied strictly inside the cone, 0 = sharp indicator.
  double factor(double t, int ch, double ramp = 0.0) const;
};

ConeMask full_mask(int n_channels, double span);

// h(y) = max(d(y, center) - R, 0) + eps per channel. eps must be positive;
// `span` is the available record half-width. If h exceeds the span: throws by
// default, clamps with a warning flag when clamp = true.
ConeMask build_mask(const Vec2& center, double R, double eps,
                    const std::vector<Channel>& channels,
                    const geometry::SpeedField& speed, double span, bool clamp = false);

// Odd time extension around t = 0: H(t) = H0(t) for t > 0, -H0(-t) for t < 0,
// 0 at t = 0. The input record must start at t = 0.
TimeSeriesRecord odd_extend(const TimeSeriesRecord& rec);
CauchyRecord odd_extend(const CauchyRecord& rec);

}  // namespace recho::reconstruct
