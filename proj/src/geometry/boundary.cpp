#include "geometry/boundary.hpp"

#include <cmath>

namespace recho::geometry {

std::vector<Channel> CircleBoundary::make_channels(int n, const RecordingSpec* rec) const {
  std::vector<Channel> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double theta = 2.0 * M_PI * i / n;
    if (rec && rec->arc) {
      // Normalize to [0, 2pi) and test membership in the (possibly wrapping) arc.
      double a0 = rec->arc->first, a1 = rec->arc->second;
      const double two_pi = 2.0 * M_PI;
      auto wrap = [two_pi](double a) {
        a = std::fmod(a, two_pi);
        return a < 0 ? a + two_pi : a;
      };
      const double t = wrap(theta), b0 = wrap(a0), b1 = wrap(a1);
      const bool inside = b0 <= b1 ? (t >= b0 && t <= b1) : (t >= b0 || t <= b1);
      if (!inside) continue;
    }
    const double s = theta * r_;
    out.push_back({point(s), normal(s)});
  }
  return out;
}

}  // namespace recho::geometry
