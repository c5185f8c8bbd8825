#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/errors.hpp"
#include "geometry/fast_marching.hpp"
#include "oracles/poisson2d.hpp"
#include "oracles/scenarios.hpp"
#include "reconstruct/mask.hpp"
#include "wavefield/solver.hpp"
#include "wavefield/source.hpp"

using namespace recho;
using namespace recho::wavefield;
using recho::geometry::CircleBoundary;

namespace {

// C2 ball bump with a fixed physical edge width (resolution independent, so
// refinement studies compare against the same continuum source).
double bump_value(const Vec2& p, const Vec2& center, double radius, double edge) {
  const double u = (radius - (p - center).norm()) / edge;
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

Raster2D bump_raster(const GridGeom& g, const Vec2& center, double radius, double edge) {
  Raster2D f(g);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      f.at(ix, iy) = bump_value(g.node(ix, iy), center, radius, edge);
  return f;
}

}  // namespace

TEST_CASE("solve_ivp: zero source gives a zero field and record") {
  const GridGeom g = scenarios::box_grid(97);
  auto c1 = scenarios::constant_speed(g);
  const WaveSetup ws = scenarios::make_setup(g, *c1, 20);
  const auto res = solve_ivp(Raster2D(g), 0.0, 0.5, ws, scenarios::make_channels(64));
  CHECK(res.state.u.max_abs() == 0.0);
  CHECK(res.record.dirichlet.l2_norm() == 0.0);
  CHECK(res.record.neumann.l2_norm() == 0.0);
}

TEST_CASE("solve_ivp: constant-speed field matches the Poisson-formula oracle") {
  const GridGeom g = scenarios::box_grid(193);
  auto c1 = scenarios::constant_speed(g);
  const WaveSetup ws = scenarios::make_setup(g, *c1);
  const Vec2 center{0.0, 0.0};
  const double radius = 0.25, edge = 0.06;
  const Raster2D f = bump_raster(g, center, radius, edge);

  const double dt = ws.dt();
  const double t_probe = std::round(0.45 / dt) * dt;
  const auto res = solve_ivp(f, 0.0, t_probe, ws, scenarios::make_channels(16));
  CHECK(res.state.t == doctest::Approx(t_probe));

  auto fc = [&](Vec2 p) { return bump_value(p, center, radius, edge); };
  double num = 0.0, den = 0.0;
  for (int k = 0; k < 10; ++k) {
    const double a = 2.0 * M_PI * k / 10 + 0.3;
    const double rad = 0.25 + 0.04 * k;
    const Vec2 p{rad * std::cos(a), rad * std::sin(a)};
    const double got = res.state.u.sample(p);
    const double want = oracles::poisson2d_value(fc, t_probe, p);
    num += (got - want) * (got - want);
    den += want * want;
  }
  CHECK(std::sqrt(num / den) < 0.01);
}

TEST_CASE("solve_ivp: grid refinement shows second-order convergence") {
  const Vec2 center{0.0, 0.0};
  const double radius = 0.25, edge = 0.06;
  auto fc = [&](Vec2 p) { return bump_value(p, center, radius, edge); };

  auto probe_error = [&](int n) {
    const GridGeom g = scenarios::box_grid(n);
    auto c1 = scenarios::constant_speed(g);
    const WaveSetup ws = scenarios::make_setup(g, *c1);
    const double t_probe = std::round(0.45 / ws.dt()) * ws.dt();
    const auto res = solve_ivp(bump_raster(g, center, radius, edge), 0.0, t_probe, ws,
                               scenarios::make_channels(8));
    double num = 0.0, den = 0.0;
    for (int k = 0; k < 10; ++k) {
      const double a = 2.0 * M_PI * k / 10 + 0.3;
      const double rad = 0.25 + 0.04 * k;
      const Vec2 p{rad * std::cos(a), rad * std::sin(a)};
      const double want = oracles::poisson2d_value(fc, t_probe, p);
      const double got = res.state.u.sample(p);
      num += (got - want) * (got - want);
      den += want * want;
    }
    return std::sqrt(num / den);
  };

  const double e1 = probe_error(129);
  const double e2 = probe_error(257);
  CHECK(e1 / e2 >= 3.5);  // ~4 for a second-order scheme
}

TEST_CASE("solve_forward: single event equals solve_ivp; superposition is exact") {
  const GridGeom g = scenarios::box_grid(129);
  auto c1 = scenarios::constant_speed(g);
  const WaveSetup ws = scenarios::make_setup(g, *c1, 30);
  const auto channels = scenarios::make_channels(64);
  const double T = 1.2;

  SourceEvent e1;
  e1.t = 0.2;
  e1.center = {-0.3, 0.0};
  e1.profile = bump_raster(g, e1.center, 0.12, 0.04);
  e1.kind = SupportKind::ball;
  e1.radius = 0.12;
  SourceEvent e2 = e1;
  e2.t = 0.55;
  e2.center = {0.35, 0.1};
  e2.profile = bump_raster(g, e2.center, 0.12, 0.04);

  const auto sum = solve_forward({e1, e2}, T, ws, channels);
  const auto r1 = solve_ivp(e1.profile, ws.snap_step(e1.t) * ws.dt(), T, ws, channels);
  const auto r2 = solve_ivp(e2.profile, ws.snap_step(e2.t) * ws.dt(), T, ws, channels);

  TimeSeriesRecord manual = TimeSeriesRecord::zeros_like(sum.record.dirichlet);
  for (size_t i = 0; i < manual.samples.size(); ++i)
    manual.samples[i] = r1.record.dirichlet.samples[i] + r2.record.dirichlet.samples[i];
  CHECK(sum.record.dirichlet.l2_diff_rel(manual) < 1e-12);

  const auto single = solve_forward({e1}, T, ws, channels);
  CHECK(single.record.dirichlet.l2_diff_rel(r1.record.dirichlet) < 1e-12);
}

TEST_CASE("solve_forward: linearity under amplitude scaling") {
  const GridGeom g = scenarios::box_grid(97);
  auto c1 = scenarios::constant_speed(g);
  const WaveSetup ws = scenarios::make_setup(g, *c1, 20);
  const auto channels = scenarios::make_channels(32);

  SourceEvent ev;
  ev.t = 0.15;
  ev.center = {0.0, 0.0};
  ev.profile = bump_raster(g, ev.center, 0.15, 0.05);
  SourceEvent scaled = ev;
  scaled.profile = ev.profile;
  for (double& v : scaled.profile.values) v *= 3.5;

  const auto base = solve_forward({ev}, 0.9, ws, channels);
  const auto big = solve_forward({scaled}, 0.9, ws, channels);
  double worst = 0.0;
  for (size_t i = 0; i < base.record.dirichlet.samples.size(); ++i)
    worst = std::max(worst, std::abs(big.record.dirichlet.samples[i] -
                                     3.5 * base.record.dirichlet.samples[i]));
  CHECK(worst < 1e-12 * big.record.dirichlet.l2_norm());
}

TEST_CASE("discrete energy: conserved inside the box, decays in the sponge") {
  const GridGeom g = scenarios::box_grid(129);
  auto c1 = scenarios::constant_speed(g);
  const WaveSetup ws = scenarios::make_setup(g, *c1, 30);
  const auto channels = scenarios::make_channels(8);
  const Raster2D f = bump_raster(g, {0.0, 0.0}, 0.2, 0.06);

  auto energy_at = [&](double t) {
    const auto res = solve_ivp(f, 0.0, t, ws, channels);
    return wave_energy(res.state.u, res.state.u_prev, res.state.dt, *c1);
  };
  const double e_early = energy_at(0.3);
  const double e_mid = energy_at(0.55);  // support radius 0.75 < 1: still inside
  CHECK(std::abs(e_mid - e_early) / e_early < 1e-6);
  const double e_late = energy_at(2.2);  // front has crossed the sponge
  CHECK(e_late < 0.05 * e_early);
}

TEST_CASE("causality: records vanish before the travel-time arrival") {
  const GridGeom g = scenarios::box_grid(161);
  auto cb = scenarios::bump_speed(g, 0.15);
  const WaveSetup ws = scenarios::make_setup(g, *cb);
  const auto channels = scenarios::make_channels(32);

  SourceEvent ev;
  ev.t = 0.1;
  ev.center = {0.15, -0.1};
  ev.radius = 0.12;
  ev.profile = scenarios::ball_source(ev.center, ev.radius, *cb, g);

  const auto res = solve_forward({ev}, 1.2, ws, channels);
  const double fmax = ev.profile.max_abs();
  const geometry::DistanceField dist(ev.center, *cb, g);
  const double t1 = ws.snap_step(ev.t) * ws.dt();
  int checked = 0;
  for (int c = 0; c < res.record.dirichlet.n_channels(); ++c) {
    const double arrival =
        t1 + std::max(dist.at(channels[c].pos) - ev.radius, 0.0) - 3.0 * g.dx / cb->c_minus();
    for (int k = 0; k < res.record.dirichlet.n_steps(); ++k) {
      if (res.record.dirichlet.time_of(k) >= arrival) break;
      CHECK(std::abs(res.record.dirichlet.at(k, c)) <= 1e-8 * fmax);
      ++checked;
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("exterior_neumann: zero record and self-consistency with the recorded trace") {
  const GridGeom g = scenarios::box_grid(161);
  auto c1 = scenarios::constant_speed(g);
  const WaveSetup ws = scenarios::make_setup(g, *c1);
  const CircleBoundary omega = scenarios::omega_disc();
  const auto channels = scenarios::make_channels(128);

  const TimeSeriesRecord zero = [&] {
    TimeSeriesRecord r;
    r.dt = ws.dt();
    r.t_start = 0.0;
    r.channels = channels;
    r.samples.assign(200 * channels.size(), 0.0);
    return r;
  }();
  CHECK(exterior_neumann(zero, omega, ws).l2_norm() == 0.0);

  SourceEvent ev;
  ev.t = 0.1;
  ev.center = {0.1, 0.05};
  ev.radius = 0.15;
  ev.profile = bump_raster(g, ev.center, ev.radius, 0.05);
  const auto res = solve_forward({ev}, 1.6, ws, channels);

  const TimeSeriesRecord neumann = exterior_neumann(res.record.dirichlet, omega, ws);
  CHECK(neumann.l2_diff_rel(res.record.neumann) < 0.05);
}

TEST_CASE("exterior_neumann: Poisson-formula normal derivative cross-check") {
  const GridGeom g = scenarios::box_grid(161);
  auto c1 = scenarios::constant_speed(g);
  const WaveSetup ws = scenarios::make_setup(g, *c1);
  const CircleBoundary omega = scenarios::omega_disc();
  const auto channels = scenarios::make_channels(64);

  const Vec2 center{0.1, 0.05};
  const double radius = 0.15, edge = 0.05;
  SourceEvent ev;
  ev.t = 0.0;
  ev.center = center;
  ev.radius = radius;
  ev.profile = bump_raster(g, center, radius, edge);
  // Event snapped to step 1 so t_j > 0; shift the oracle accordingly.
  const double t1 = ws.dt();
  ev.t = t1;
  const auto res = solve_forward({ev}, 1.6, ws, channels);
  const TimeSeriesRecord neumann = exterior_neumann(res.record.dirichlet, omega, ws);

  auto fc = [&](Vec2 p) { return bump_value(p, center, radius, edge); };
  const double h = 1e-3;
  double num = 0.0, den = 0.0;
  for (int c = 0; c < 8; ++c) {
    const Channel& ch = channels[c * 8];
    for (double t : {0.9, 1.1}) {
      const int k = static_cast<int>(std::lround(t / ws.dt()));
      const double tt = k * ws.dt() - t1;
      const double up = oracles::poisson2d_value(fc, tt, ch.pos + ch.normal * h);
      const double dn = oracles::poisson2d_value(fc, tt, ch.pos - ch.normal * h);
      const double want = (up - dn) / (2.0 * h);
      const double got = neumann.at(k, c * 8);
      num += (got - want) * (got - want);
      den += want * want;
    }
  }
  CHECK(std::sqrt(num / den) < 0.05);
}

TEST_CASE("time reversal: zero data and zero mask give zero output") {
  const GridGeom g = scenarios::box_grid(129);
  auto c1 = scenarios::constant_speed(g);
  const WaveSetup ws = scenarios::make_setup(g, *c1, 30);
  const CircleBoundary omega = scenarios::omega_disc();
  const auto channels = scenarios::make_channels(64);

  CauchyRecord zero;
  zero.dirichlet.dt = zero.neumann.dt = ws.dt();
  zero.dirichlet.t_start = zero.neumann.t_start = -0.5;
  zero.dirichlet.channels = zero.neumann.channels = channels;
  const int n = static_cast<int>(std::lround(1.0 / ws.dt())) + 1;
  zero.dirichlet.samples.assign(static_cast<size_t>(n) * channels.size(), 0.0);
  zero.neumann.samples = zero.dirichlet.samples;

  const auto full = reconstruct::full_mask(static_cast<int>(channels.size()), 0.45);
  const auto out = solve_time_reversal(zero, full, 0.0, omega, ws);
  CHECK(out.u.max_abs() == 0.0);
  CHECK(out.ut.max_abs() == 0.0);

  // Zero mask: nonzero data, but everything masked out.
  CauchyRecord noisy = zero;
  for (size_t i = 0; i < noisy.dirichlet.samples.size(); ++i)
    noisy.dirichlet.samples[i] = std::sin(0.01 * i);
  reconstruct::ConeMask none = full;
  for (double& h : none.h) h = 0.0;
  const auto out2 = solve_time_reversal(noisy, none, 0.0, omega, ws);
  CHECK(out2.u.max_abs() == 0.0);
  CHECK(out2.ut.max_abs() == 0.0);
}

TEST_CASE("time reversal: J=1 full mask reproduces the source profile") {
  const GridGeom g = scenarios::box_grid(161);
  auto c1 = scenarios::constant_speed(g);
  const WaveSetup ws = scenarios::make_setup(g, *c1);
  const CircleBoundary omega = scenarios::omega_disc();
  const auto channels = scenarios::make_channels(256);

  SourceEvent ev;
  ev.t = 0.1;
  ev.center = {0.1, -0.05};
  ev.radius = 0.15;
  ev.profile = bump_raster(g, ev.center, ev.radius, 0.05);
  const double T = ev.t + 1.8 + 0.1;  // > t_1 + diam Omega
  const auto res = solve_forward({ev}, T, ws, channels);

  // Shift to the source time, extend oddly, impose everything.
  const double t1 = ws.snap_step(ev.t) * ws.dt();
  const int k1 = ws.snap_step(ev.t);
  CauchyRecord shifted;
  shifted.dirichlet.dt = shifted.neumann.dt = ws.dt();
  shifted.dirichlet.t_start = shifted.neumann.t_start = 0.0;
  shifted.dirichlet.channels = shifted.neumann.channels = channels;
  const int n = res.record.dirichlet.n_steps() - k1;
  shifted.dirichlet.samples.assign(static_cast<size_t>(n) * channels.size(), 0.0);
  shifted.neumann.samples = shifted.dirichlet.samples;
  for (int k = 0; k < n; ++k)
    for (size_t c = 0; c < channels.size(); ++c) {
      shifted.dirichlet.at(k, c) = res.record.dirichlet.at(k + k1, c);
      shifted.neumann.at(k, c) = res.record.neumann.at(k + k1, c);
    }
  const CauchyRecord ext = reconstruct::odd_extend(shifted);
  const auto mask =
      reconstruct::full_mask(static_cast<int>(channels.size()), -ext.dirichlet.t_start);
  const auto tr = solve_time_reversal(ext, mask, 0.0, omega, ws, 2.0 * ws.dt());

  // Relative L2 error on the support S_1.
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < ev.profile.values.size(); ++i) {
    if (ev.profile.values[i] == 0.0) continue;
    const double d = tr.ut.values[i] - ev.profile.values[i];
    num += d * d;
    den += ev.profile.values[i] * ev.profile.values[i];
  }
  CHECK(std::sqrt(num / den) <= 0.10);
  (void)t1;
}

TEST_CASE("CFL bookkeeping and blow-up guard") {
  const GridGeom g = scenarios::box_grid(65);
  auto c1 = scenarios::constant_speed(g, 2.0);
  WaveSetup ws = scenarios::make_setup(g, *c1, 10);
  const double lhs = c1->c_plus() * ws.dt() *
                     std::sqrt(1.0 / (g.dx * g.dx) + 1.0 / (g.dy * g.dy));
  CHECK(lhs == doctest::Approx(ws.solver.cfl));
}
