#include "oracles/scenarios.hpp"

#include <cmath>

#include "wavefield/source.hpp"

namespace recho::scenarios {

GridGeom box_grid(int n) {
  return {n, n, -1.0, -1.0, 2.0 / (n - 1), 2.0 / (n - 1)};
}

std::unique_ptr<geometry::SpeedField> constant_speed(const GridGeom& g, double c0) {
  return std::make_unique<geometry::ConstantSpeed>(c0, g);
}

std::unique_ptr<geometry::SpeedField> gradient_speed(const GridGeom& g) {
  return std::make_unique<geometry::GradientSpeed>(1.0, Vec2{0.0, 0.15}, Vec2{0.0, 0.0}, g);
}

std::unique_ptr<geometry::SpeedField> bump_speed(const GridGeom& g, double amplitude) {
  return std::make_unique<geometry::BumpSpeed>(1.0, amplitude, 0.45, Vec2{0.0, 0.0}, g);
}

geometry::CircleBoundary omega_disc() { return {{0.0, 0.0}, 0.85}; }

wavefield::WaveSetup make_setup(const GridGeom& g, const geometry::SpeedField& speed,
                                int sponge, double cfl) {
  wavefield::WaveSetup ws;
  ws.grid = g;
  ws.solver.sponge_width = sponge;
  ws.solver.cfl = cfl;
  ws.speed = &speed;
  return ws;
}

std::vector<Channel> make_channels(int n) { return omega_disc().make_channels(n); }

Raster2D ball_source(const Vec2& center, double radius, const geometry::SpeedField& speed,
                     const GridGeom& g, double amplitude, double edge_cells,
                     SupportMetric metric) {
  const double edge = edge_cells * std::max(g.dx, g.dy);
  return wavefield::ball_profile(center, radius, amplitude, edge, metric, speed, g);
}

double masked_l2_rel(const Raster2D& got, const Raster2D& truth, const Raster2D& weight) {
  double num = 0.0, den = 0.0;
  const bool use_mask = !weight.values.empty();
  for (size_t i = 0; i < truth.values.size(); ++i) {
    if (use_mask && !(weight.values[i] > 0.0)) continue;
    const double d = got.values[i] - truth.values[i];
    num += d * d;
    den += truth.values[i] * truth.values[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace recho::scenarios
