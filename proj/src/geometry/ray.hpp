#pragma once

#include <functional>
#include <vector>

#include "core/vec2.hpp"
#include "geometry/boundary.hpp"
#include "geometry/speed_field.hpp"

namespace recho::geometry {

// Interior cotangent sample (x, xi) with tau = c(x)|xi| cached.
struct CotangentSample {
  Vec2 x;
  Vec2 xi;
  double tau = 0.0;
};

CotangentSample make_cotangent(const Vec2& x, const Vec2& xi, const SpeedField& speed);

// Scales xi so that c(x)|xi| = 1 (unit cosphere).
CotangentSample unit_cotangent(const Vec2& x, const Vec2& direction, const SpeedField& speed);

// Boundary exit datum (r, y, tau, eta'): arrival time, boundary point,
// time frequency, and the tangential covector as a signed metric-norm scalar
// relative to the counterclockwise unit tangent.
struct BoundaryCotangentSample {
  double r = 0.0;
  Vec2 y;
  double tau = 0.0;
  double eta_prime = 0.0;
};

struct GeodesicPath {
  struct Node {
    double s;
    Vec2 x;
    Vec2 xi;
  };
  std::vector<Node> nodes;
  double ds = 0.0;
};

struct TraceOptions {
  double ds = 0.0;        // 0 = derived from the speed field and c+
  double horizon = 0.0;   // 0 = generous default from the extent size
};

// Hamiltonian flow of H = c^2 |xi|^2 / 2 for parameter s (classic RK4, fixed
// step). Throws GeometryError if the ray leaves the speed extent.
CotangentSample geodesic_flow(const CotangentSample& start, double s, const SpeedField& speed,
                              const TraceOptions& opt = {});

// Full sampled path from 0 to s (inclusive endpoints).
GeodesicPath trace_geodesic(const CotangentSample& start, double s, const SpeedField& speed,
                            const TraceOptions& opt = {});

// Smallest s >= 0 with gamma(s) on the boundary, leaving afterwards; crossing
// refined by bisection to 1e-9 relative. Parametrized like the input sample
// (unit cosphere samples exit in travel time).
double exit_time(const CotangentSample& start, const CircleBoundary& omega,
                 const SpeedField& speed, const TraceOptions& opt = {});

// Psi_t: interior sample at time t -> boundary exit datum.
BoundaryCotangentSample psi_forward(double t, const CotangentSample& s,
                                    const CircleBoundary& omega, const SpeedField& speed,
                                    const TraceOptions& opt = {});

// Inverse of Psi_t: solves |eta' + a nu|_g = tau for a >= 0, traces backward
// for sigma = (r - t)/tau, and orients the result so that psi_forward
// reproduces the input.
CotangentSample psi_inverse(double t, const BoundaryCotangentSample& b,
                            const CircleBoundary& omega, const SpeedField& speed,
                            const TraceOptions& opt = {});

}  // namespace recho::geometry
