#pragma once

#include <utility>
#include <vector>

#include "core/config.hpp"
#include "identify/singular.hpp"

namespace recho::identify {

// A detected source event: two singular components pairing under the dual
// reflection at time t_hat, with interior midpoint samples of Sigma_j.
struct PairingEvent {
  double t_hat = 0.0;
  std::vector<geometry::CotangentSample> sigma_points;
  double score = 0.0;
  std::pair<int, int> component_pair{-1, -1};
  bool ambiguous = false;  // unresolved tie / spurious-pairing diagnostic
  bool partial = false;
};

struct PairingOptions {
  double pair_threshold = 0.5;
  double delta_x = 0.0;      // spatial match radius (absolute)
  double delta_theta = 0.0;  // covector angle tolerance (radians)
  double delta_t = 0.0;      // merge window for score maxima (seconds)
  double tie_margin = 0.1;
  int max_samples = 160;
  bool partial = false;
};

PairingOptions pairing_options(const IdentifySpec& spec, const GridGeom& grid, double dt,
                               bool partial);

// Candidate times: the recording grid decimated, clipped to before the last
// arrival.
std::vector<double> make_t_grid(const CauchyRecord& data, int decimate);

// Score-vs-time series per component pair, for diagnostics and plot exports.
struct ScoreSeries {
  std::pair<int, int> pair;
  std::vector<double> scores;  // aligned with the t_grid
};

// Reflection-pairing scores over (t, component pair); events at score maxima
// above the threshold. Ties sharing a component are resolved by score;
// unresolved ties are flagged ambiguous.
std::vector<PairingEvent> detect_pairings(const std::vector<SingularSample>& samples,
                                          const std::vector<double>& t_grid,
                                          const geometry::CircleBoundary& omega,
                                          const geometry::SpeedField& speed,
                                          const PairingOptions& opt,
                                          std::vector<ScoreSeries>* series = nullptr);

// Pairing score for one component pair at one time (exposed for the
// symmetry property and score-vs-t exports).
double pairing_score(const std::vector<SingularSample>& samples, int comp_a, int comp_b,
                     double t, const geometry::CircleBoundary& omega,
                     const geometry::SpeedField& speed, const PairingOptions& opt);

struct SupportEstimate {
  double t_hat = 0.0;
  double score = 0.0;
  std::vector<Vec2> polyline;  // ordered along the curve
  std::vector<geometry::CotangentSample> cloud;
  bool closed = false;   // closed curve => dim S = n; open arc => dim S = n-1
  bool partial = false;
  bool ambiguous = false;
  double enclosed_area = 0.0;
  Vec2 circle_center;
  double circle_radius = 0.0;
  double circle_mean_dev = 0.0;
};

// Orders events by time and classifies each point cloud as a closed curve or
// an open arc. Throws GeometryError("insufficient Sigma samples") below 8
// points.
std::vector<SupportEstimate> estimate_supports(const std::vector<PairingEvent>& events);

// Algebraic circle fit (Kasa); returns center, radius and the mean absolute
// radial deviation of the points.
void fit_circle(const std::vector<Vec2>& pts, Vec2& center, double& radius, double& mean_dev);

}  // namespace recho::identify
