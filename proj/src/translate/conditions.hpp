#pragma once

#include <optional>
#include <vector>

#include "core/raster.hpp"
#include "geometry/boundary.hpp"
#include "geometry/speed_field.hpp"
#include "translate/centers.hpp"
#include "wavefield/source.hpp"

namespace recho::translate {

// Hypothesis margins for the separation conditions. Margins are "distance to
// failure": positive = pass. Conditions that are vacuous (J = 1) pass with an
// empty margin.
struct ConditionReport {
  double rho = 0.0;  // max d(x_{j+1}, x_j) / (t_{j+1} - t_j)
  double R = 0.0;    // max_j minimal enclosing geodesic radius
  bool ss_pass = true;
  std::optional<double> ss_margin;   // min_j (t_{j+1}-t_j) - d(x_{j+1},x_j)
  bool ss2_pass = true;
  std::optional<double> ss2_margin;  // min_{j,k} rho |t_k - t_j| - d(x_k,x_j)
  bool ts_pass = true;
  std::optional<double> ts_margin;   // min_j (1-rho)(t_j - t_{j-1}) - 2R
  bool e2_pass = true;
  std::optional<double> e2_margin;   // (t_2-t_1) - (1 - c-/c+) R / (1-rho)
  std::vector<double> radii;         // per-source enclosing radius
  std::vector<double> gaps;          // consecutive travel-time distances
};

ConditionReport check_conditions(const wavefield::SourceTrain& train,
                                 const geometry::SpeedField& speed);

struct R2Report {
  bool pass_radius = false;     // (i)  all support samples inside radius R
  bool pass_antipodal = false;  // (ii) antipodal support pair at radius R
  double max_norm = 0.0;        // largest metric norm over the support
  Vec2 witness_plus, witness_minus;
  bool pass() const { return pass_radius && pass_antipodal; }
};

// Checks (R2) for a base-frame profile: raster coordinates are tangent
// coordinates at the origin, metric norms use c(0). Angular tolerance for the
// antipodal pair: 5 degrees; radial band: 2 cells.
R2Report check_R2(const Raster2D& profile, double R, const geometry::SpeedField& speed);

struct Ml1Falsifier {
  int j = 0, k = 0;
  double t = 0.0;
  Vec2 x;
};

struct Ml1Report {
  std::vector<Ml1Falsifier> falsifiers;
  int rays_traced = 0;

  bool pass() const { return falsifiers.empty(); }
};

// Empirical falsifier for the outgoing half of (ML1): traces outward normal
// rays from each dSigma_j and reports rays meeting S_k at a global time
// t >= t_k.
Ml1Report check_ml1_outgoing(const wavefield::SourceTrain& train,
                             const geometry::CircleBoundary& omega,
                             const geometry::SpeedField& speed, int n_rays);

}  // namespace recho::translate
