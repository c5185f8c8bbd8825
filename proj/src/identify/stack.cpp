#include "identify/stack.hpp"

#include "core/errors.hpp"
#include "geometry/fast_marching.hpp"

namespace recho::identify {

TimeSeriesRecord backproject_stack(const CauchyRecord& data, const std::vector<Vec2>& sigma,
                                   const geometry::CircleBoundary& omega,
                                   const geometry::SpeedField& speed) {
  const TimeSeriesRecord& u = data.dirichlet;
  const int nch = u.n_channels();
  if (sigma.empty()) throw GeometryError("empty stacking surface");
  for (const Vec2& z : sigma)
    if (omega.sdf(z) >= 0.0) throw GeometryError("stacking surface leaves Omega");

  // One travel-time field per surface point; channels read at their positions.
  TimeSeriesRecord out;
  out.dt = u.dt;
  out.t_start = u.t_start;
  for (const Vec2& z : sigma) out.channels.push_back({z, {1.0, 0.0}});
  out.samples.assign(static_cast<size_t>(u.n_steps()) * sigma.size(), 0.0);

  for (size_t k = 0; k < sigma.size(); ++k) {
    const geometry::DistanceField dist(sigma[k], speed);
    std::vector<double> delay(nch);
    for (int c = 0; c < nch; ++c) delay[c] = dist.at(u.channels[c].pos);
    for (int s = 0; s < out.n_steps(); ++s) {
      const double t = out.time_of(s);
      double acc = 0.0;
      for (int c = 0; c < nch; ++c) acc += u.value_at(t + delay[c], c);
      out.at(s, static_cast<int>(k)) = acc / nch;
    }
  }
  return out;
}

}  // namespace recho::identify
