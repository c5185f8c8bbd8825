#pragma once

#include <vector>

#include "core/config.hpp"
#include "core/vec2.hpp"
#include "geometry/speed_field.hpp"

namespace recho::translate {

// Injectivity-radius / curvature bounds with the derived uniqueness radius
// r_Omega = min(kappa, pi / (2 sqrt(K))) for K > 0, kappa otherwise.
struct CurvatureBounds {
  double kappa = 1e9;
  double K = 0.0;

  double r_omega() const;

  static CurvatureBounds from_config(const CurvatureSpec& spec) {
    return {spec.kappa, spec.K};
  }
};

// Length-weighted centroid of a polyline (the discrete surface measure on
// Sigma). `closed` appends the wrap-around segment.
Vec2 center_of_mass(const std::vector<Vec2>& polyline, bool closed = true);

// Minimizer of rho_S(x) = max_k d(x, z_k): deterministic grid scan followed
// by coordinate-wise golden-section refinement. Requires the cloud to sit
// inside a geodesic ball of radius < r_Omega.
Vec2 minimax_center(const std::vector<Vec2>& cloud, const geometry::SpeedField& speed,
                    const CurvatureBounds& bounds);

}  // namespace recho::translate
