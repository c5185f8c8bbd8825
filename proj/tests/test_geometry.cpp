#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "core/errors.hpp"
#include "geometry/boundary.hpp"
#include "geometry/fast_marching.hpp"
#include "geometry/metric_ops.hpp"
#include "geometry/ray.hpp"
#include "geometry/speed_field.hpp"
#include "oracles/dijkstra.hpp"
#include "oracles/scenarios.hpp"

using namespace recho;
using namespace recho::geometry;
using recho::oracles::DijkstraOracle;

namespace {

const GridGeom kGrid = scenarios::box_grid(129);

}  // namespace

TEST_CASE("flow: straight line in constant speed") {
  auto c1 = scenarios::constant_speed(kGrid);
  const CotangentSample s = unit_cotangent({0.0, 0.0}, {1.0, 0.0}, *c1);
  // Stay inside the extent: length 0.9.
  const CotangentSample end = geodesic_flow(s, 0.9, *c1);
  CHECK(end.x.x == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(end.x.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(end.xi.x == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("flow: s = 0 is the identity") {
  auto cb = scenarios::bump_speed(kGrid);
  const CotangentSample s = unit_cotangent({0.2, -0.1}, {0.3, 0.7}, *cb);
  const CotangentSample same = geodesic_flow(s, 0.0, *cb);
  CHECK(same.x.x == s.x.x);
  CHECK(same.x.y == s.x.y);
}

TEST_CASE("flow: reversibility and half-step cross-check in a gradient speed") {
  auto cg = scenarios::gradient_speed(kGrid);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(-0.4, 0.4), ang(0.0, 2.0 * M_PI);
  for (int k = 0; k < 20; ++k) {
    const Vec2 x{pos(rng), pos(rng)};
    const double a = ang(rng);
    const CotangentSample s = unit_cotangent(x, {std::cos(a), std::sin(a)}, *cg);
    const CotangentSample fwd = geodesic_flow(s, 0.5, *cg);
    const CotangentSample back = geodesic_flow(fwd, -0.5, *cg);
    CHECK((back.x - s.x).norm() < 1e-6);
    CHECK((back.xi - s.xi).norm() < 1e-6);

    // Position against RK4 at half the step size.
    TraceOptions fine;
    fine.ds = 0.5 * cg->step_hint() / (2.0 * cg->c_plus());
    const CotangentSample ref = geodesic_flow(s, 0.5, *cg, fine);
    CHECK((fwd.x - ref.x).norm() < 1e-8);
  }
}

TEST_CASE("flow: Hamiltonian c^2|xi|^2 conserved along traced rays") {
  auto cb = scenarios::bump_speed(kGrid);
  const CotangentSample s = unit_cotangent({-0.3, 0.2}, {1.0, 0.4}, *cb);
  const GeodesicPath path = trace_geodesic(s, 1.2, *cb);
  for (const auto& node : path.nodes) {
    const double h = cb->value(node.x) * node.xi.norm();
    CHECK(std::abs(h - 1.0) < 1e-6);
  }
}

TEST_CASE("exit_time: unit disc radii") {
  auto c1 = scenarios::constant_speed(kGrid);
  const CircleBoundary disc({0.0, 0.0}, 0.85);
  const CotangentSample center = unit_cotangent({0.0, 0.0}, {0.0, 1.0}, *c1);
  CHECK(exit_time(center, disc, *c1) == doctest::Approx(0.85).epsilon(1e-8));
  const CotangentSample off = unit_cotangent({0.35, 0.0}, {1.0, 0.0}, *c1);
  CHECK(exit_time(off, disc, *c1) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("exit_time: refinement oracle with 10x finer marching") {
  auto cb = scenarios::bump_speed(kGrid);
  const CircleBoundary disc = scenarios::omega_disc();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(-0.3, 0.3), ang(0.0, 2.0 * M_PI);
  for (int k = 0; k < 10; ++k) {
    const double a = ang(rng);
    const CotangentSample s =
        unit_cotangent({pos(rng), pos(rng)}, {std::cos(a), std::sin(a)}, *cb);
    const double coarse = exit_time(s, disc, *cb);
    TraceOptions fine;
    fine.ds = 0.1 * cb->step_hint() / (2.0 * cb->c_plus());
    const double refined = exit_time(s, disc, *cb, fine);
    CHECK(std::abs(coarse - refined) < 1e-6 * std::max(1.0, refined));
  }
}

TEST_CASE("psi_forward: radial exit from the disc center") {
  auto c1 = scenarios::constant_speed(kGrid);
  const CircleBoundary disc({0.0, 0.0}, 0.85);
  const CotangentSample s = unit_cotangent({0.0, 0.0}, {1.0, 0.0}, *c1);
  const BoundaryCotangentSample b = psi_forward(0.0, s, disc, *c1);
  CHECK(b.r == doctest::Approx(0.85).epsilon(1e-8));
  CHECK(b.y.x == doctest::Approx(0.85).epsilon(1e-8));
  CHECK(b.y.y == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(b.tau == doctest::Approx(1.0));
  CHECK(b.eta_prime == doctest::Approx(0.0).epsilon(1e-7));

  // The time offset enters only through r.
  const BoundaryCotangentSample b3 = psi_forward(3.0, s, disc, *c1);
  CHECK(b3.r == doctest::Approx(3.85).epsilon(1e-8));
  CHECK(b3.y.x == doctest::Approx(b.y.x));
  CHECK(b3.eta_prime == doctest::Approx(b.eta_prime));
}

TEST_CASE("psi_inverse: inverse of the radial example and precondition") {
  auto c1 = scenarios::constant_speed(kGrid);
  const CircleBoundary disc({0.0, 0.0}, 0.85);
  BoundaryCotangentSample b;
  b.r = 0.85;
  b.y = {0.85, 0.0};
  b.tau = 1.0;
  b.eta_prime = 0.0;
  const CotangentSample s = psi_inverse(0.0, b, disc, *c1);
  CHECK(s.x.norm() < 1e-8);
  CHECK(s.xi.x == doctest::Approx(1.0).epsilon(1e-8));

  b.eta_prime = 1.5;  // |eta'| > tau
  CHECK_THROWS_WITH_AS(psi_inverse(0.0, b, disc, *c1),
                       doctest::Contains("non-characteristic"), GeometryError);
}

TEST_CASE("psi roundtrip and injectivity witness on random cosphere samples") {
  auto cg = scenarios::gradient_speed(kGrid);
  const CircleBoundary disc = scenarios::omega_disc();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pos(-0.45, 0.45), ang(0.0, 2.0 * M_PI);

  std::vector<CotangentSample> samples;
  for (int k = 0; k < 100; ++k) {
    const double a = ang(rng);
    samples.push_back(unit_cotangent({pos(rng), pos(rng)}, {std::cos(a), std::sin(a)}, *cg));
  }
  std::vector<BoundaryCotangentSample> images;
  for (const CotangentSample& s : samples) {
    const BoundaryCotangentSample b = psi_forward(0.3, s, disc, *cg);
    images.push_back(b);
    const CotangentSample back = psi_inverse(0.3, b, disc, *cg);
    CHECK((back.x - s.x).norm() < 1e-6);
    CHECK((back.xi - s.xi).norm() < 1e-6);
  }
  // Injectivity: distinct samples map to distinct boundary data.
  int checked = 0;
  for (size_t i = 0; i < samples.size() && checked < 1000; ++i) {
    for (size_t j = i + 1; j < samples.size() && checked < 1000; ++j) {
      const double sep = (samples[i].x - samples[j].x).norm() +
                         (samples[i].xi - samples[j].xi).norm();
      if (sep < 1e-3) continue;
      ++checked;
      const double gap = std::abs(images[i].r - images[j].r) +
                         (images[i].y - images[j].y).norm() +
                         std::abs(images[i].eta_prime - images[j].eta_prime);
      CHECK(gap >= 1e-6);
    }
  }
}

TEST_CASE("distance: constant speeds give euclidean scaling") {
  GridGeom g = kGrid;
  g.x0 = g.y0 = -0.5;
  g.dx = g.dy = 5.0 / (g.nx - 1);  // [-0.5, 4.5]^2 so (3,4) fits
  auto c1 = scenarios::constant_speed(g, 1.0);
  CHECK(distance({0.0, 0.0}, {3.0, 4.0}, *c1) == doctest::Approx(5.0).epsilon(0.01));
  auto c2 = scenarios::constant_speed(g, 2.0);
  CHECK(distance({0.0, 0.0}, {3.0, 4.0}, *c2) == doctest::Approx(2.5).epsilon(0.01));
}

TEST_CASE("distance: Dijkstra oracle on a smooth bump speed, lattice directions") {
  // The 8-connected graph metric is exact along axis and diagonal directions;
  // generic directions carry its chamfer bias, so the oracle is compared
  // where it is valid.
  const GridGeom g = scenarios::box_grid(161);
  auto cb = scenarios::bump_speed(g, 0.15);
  const Vec2 src{0.05, -0.07};
  const DistanceField fmm(src, *cb, g);
  const DijkstraOracle oracle(src, *cb, g, 4);
  for (int dir = 0; dir < 8; ++dir) {
    const double a = 2.0 * M_PI * dir / 8;
    for (double rad : {0.35, 0.6}) {
      const Vec2 p = src + Vec2{std::cos(a), std::sin(a)} * rad;
      const double got = fmm.at(p);
      const double want = oracle.at(p);
      CHECK(std::abs(got - want) / want < 0.02);
    }
  }
}

TEST_CASE("distance: triangle inequality on random triples") {
  const GridGeom g = scenarios::box_grid(129);
  auto cb = scenarios::bump_speed(g);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> pos(-0.6, 0.6);
  const double tol = 3.0 * std::max(g.dx, g.dy) / cb->c_minus();
  for (int k = 0; k < 6; ++k) {
    const Vec2 a{pos(rng), pos(rng)}, b{pos(rng), pos(rng)}, c{pos(rng), pos(rng)};
    const DistanceField fa(a, *cb, g), fb(b, *cb, g);
    CHECK(fa.at(c) <= fa.at(b) + fb.at(c) + tol);
    // Symmetry within solver tolerance.
    CHECK(std::abs(fa.at(b) - fb.at(a)) < tol);
  }
}

TEST_CASE("dist_to_ball: clamping and the sampled-boundary oracle") {
  const GridGeom g = scenarios::box_grid(161);
  auto c1 = scenarios::constant_speed(g);
  CHECK(dist_to_ball({0.9, 0.0}, {0.0, 0.0}, 0.5, *c1) == doctest::Approx(0.4).epsilon(0.02));
  CHECK(dist_to_ball({0.1, 0.0}, {0.0, 0.0}, 0.5, *c1) == 0.0);

  // Variable speed: compare against the min distance to 256 points of the
  // geodesic sphere traced by radial geodesics.
  auto cb = scenarios::bump_speed(g, 0.15);
  const Vec2 p{0.1, 0.05};
  const double R = 0.3;
  const Vec2 y{-0.55, -0.5};
  const double got = dist_to_ball(y, p, R, *cb);
  const DistanceField from_y(y, *cb, g);
  double want = 1e300;
  for (int k = 0; k < 256; ++k) {
    const double a = 2.0 * M_PI * k / 256;
    const CotangentSample s = unit_cotangent(p, {std::cos(a), std::sin(a)}, *cb);
    const Vec2 rim = geodesic_flow(s, R, *cb).x;
    want = std::min(want, from_y.at(rim));
  }
  CHECK(std::abs(got - want) < 3.0 * g.dx / cb->c_minus());
}

TEST_CASE("exp_map: euclidean specialization, zero vector, log roundtrip") {
  const GridGeom g = scenarios::box_grid(129);
  auto c1 = scenarios::constant_speed(g);
  const Vec2 p{0.1, -0.2}, v{0.3, 0.25};
  const Vec2 q = exp_map(p, v, *c1);
  CHECK((q - (p + v)).norm() < 1e-10);
  CHECK((exp_map(p, {0.0, 0.0}, *c1) - p).norm() == 0.0);

  auto cb = scenarios::bump_speed(g);
  const Vec2 x = exp_map(p, v, *cb);
  const Vec2 v_back = log_map(p, x, *cb);
  CHECK((v_back - v).norm() < 1e-6);
  CHECK((exp_map(p, v_back, *cb) - x).norm() < 1e-8);
}

TEST_CASE("parallel_transport: identity in constant speed, isometry in variable") {
  const GridGeom g = scenarios::box_grid(129);
  auto c1 = scenarios::constant_speed(g);
  const Vec2 v{0.4, -0.1};
  const Vec2 moved = parallel_transport(v, {0.0, 0.0}, {0.3, 0.2}, *c1);
  CHECK((moved - v).norm() < 1e-9);
  CHECK(parallel_transport({0.0, 0.0}, {0.0, 0.0}, {0.3, 0.2}, *c1).norm() == 0.0);

  auto cb = scenarios::bump_speed(g);
  const Vec2 x0{-0.2, 0.1}, x1{0.35, 0.3};
  const Vec2 w = parallel_transport(v, x0, x1, *cb);
  const double n0 = v.norm() / cb->value(x0);
  const double n1 = w.norm() / cb->value(x1);
  CHECK(std::abs(n0 - n1) < 1e-8 * std::max(1.0, n0));
}

TEST_CASE("exp/transport consistency in constant speed") {
  const GridGeom g = scenarios::box_grid(129);
  auto c1 = scenarios::constant_speed(g);
  const Vec2 x{0.25, -0.15}, v{0.2, 0.3};
  const Vec2 tv = parallel_transport(v, {0.0, 0.0}, x, *c1);
  CHECK((exp_map(x, tv, *c1) - (x + v)).norm() < 1e-9);
}

TEST_CASE("diameter: disc values and a refinement oracle") {
  const GridGeom g = scenarios::box_grid(161);
  const CircleBoundary disc({0.0, 0.0}, 0.85);
  auto c1 = scenarios::constant_speed(g);
  CHECK(diameter(disc, *c1, 64) == doctest::Approx(1.7).epsilon(0.02));
  auto c2 = scenarios::constant_speed(g, 2.0);
  CHECK(diameter(disc, *c2, 64) == doctest::Approx(0.85).epsilon(0.02));

  // Variable speed: refining the grid and the boundary sampling moves the
  // estimate by < 2% (the estimate is a lower bound in the sampling).
  auto cg = scenarios::gradient_speed(g);
  const double coarse = diameter(disc, *cg, 24);
  const GridGeom fine_grid = scenarios::box_grid(321);
  auto cg_fine = scenarios::gradient_speed(fine_grid);
  const double fine = diameter(disc, *cg_fine, 48);
  CHECK(coarse <= fine + 1e-9);
  CHECK(std::abs(fine - coarse) / fine < 0.02);
}
