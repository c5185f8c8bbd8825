#pragma once

#include <functional>

#include "core/vec2.hpp"

namespace recho::oracles {

// Free-space solution of u_tt = lap u (unit speed) with u(0) = 0,
// u_t(0) = f, by quadrature of the 2D Poisson formula
//   u(t,x) = (1/2pi) int_{|y-x|<t} f(y) / sqrt(t^2 - |y-x|^2) dy.
// The substitution r = t sin(phi) removes the rim singularity; Gauss-Legendre
// in phi, trapezoid in theta. Independent of the finite-difference solver.
double poisson2d_value(const std::function<double(Vec2)>& f, double t, const Vec2& x,
                       int n_phi = 96, int n_theta = 256);

}  // namespace recho::oracles
