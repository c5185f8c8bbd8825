#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/raster.hpp"
#include "core/vec2.hpp"

namespace recho {

struct DomainSpec {
  double x0 = -1.0, y0 = -1.0, x1 = 1.0, y1 = 1.0;
  int nx = 256, ny = 256;

  GridGeom grid() const {
    return {nx, ny, x0, y0, (x1 - x0) / (nx - 1), (y1 - y0) / (ny - 1)};
  }
};

struct OmegaSpec {
  Vec2 center{0.0, 0.0};
  double radius = 0.85;
};

enum class SpeedKind { constant, gradient, bump, raster };

struct SpeedSpec {
  SpeedKind kind = SpeedKind::constant;
  double c0 = 1.0;
  Vec2 grad{0.0, 0.0};     // gradient kind: c(p) = c0 + grad . (p - ref)
  Vec2 ref{0.0, 0.0};
  double amplitude = 0.0;  // bump kind: c = c0 (1 + A exp(-|p-ctr|^2 / 2 s^2))
  double sigma = 0.4;
  Vec2 bump_center{0.0, 0.0};
  std::string raster_path;  // raster kind
};

enum class SupportKind { ball, band, raster };
enum class SupportMetric { geodesic, euclidean };

struct SupportSpec {
  SupportKind kind = SupportKind::ball;
  double radius = 0.1;                      // ball
  SupportMetric metric = SupportMetric::geodesic;
  std::vector<Vec2> polyline;               // band: center curve
  double band_width = 0.0;                  // band: full width; 0 = 3 grid cells
  std::string raster_path;                  // raster: explicit profile
};

struct SourceSpec {
  double t = 0.0;
  Vec2 center{0.0, 0.0};
  SupportSpec support;
  double amplitude = 1.0;
};

struct RecordingSpec {
  int channels = 256;
  // Partial data: record only on the arc [theta0, theta1] (radians,
  // counterclockwise). Empty optional = full boundary.
  std::optional<std::pair<double, double>> arc;
};

struct SolverSpec {
  double cfl = 0.5;
  int sponge_width = 40;          // cells
  double sponge_strength = 15.0;  // dimensionless; sigma_max = k c+ / (W h)
  double mollifier_cells = 3.0;   // profile edge width in cells
  int snapshot_every = 0;         // 0 = no snapshots
};

struct IdentifySpec {
  double threshold = 0.1;          // detection: theta * max |du/dt|
  double pair_threshold = 0.5;
  double delta_x_cells = 3.0;
  double delta_theta_deg = 10.0;
  double delta_t_steps = 4.0;
  double tie_margin = 0.1;         // scores closer than this are an unresolved tie
  int min_component = 3;           // discard smaller clusters
  int max_component_samples = 160; // decimate clouds beyond this for scoring
  int t_decimate = 2;
  double dead_time_steps = 8.0;    // per-channel non-max suppression window
};

enum class PeelVariant { vs, riemannian, euclidean };
enum class MergeMode { last_write, sum };

struct ReconstructSpec {
  PeelVariant variant = PeelVariant::vs;
  double eps = 0.0;           // 0 = variant default
  double taper_cells = 2.0;
  double mask_ramp_steps = 2.0;
  bool clamp_mask = false;    // clamp h(y) to the record span instead of failing
  MergeMode merge = MergeMode::last_write;
  Vec2 base_point{0.0, 0.0};  // origin of the translation model
};

struct CurvatureSpec {
  double kappa = 1e9;  // injectivity radius lower bound
  double K = 0.0;      // sectional curvature upper bound
};

struct CheckSpec {
  int n_rays = 128;
};

struct RunConfig {
  DomainSpec domain;
  OmegaSpec omega;
  SpeedSpec speed;
  double T = 2.0;
  SolverSpec solver;
  RecordingSpec recording;
  std::vector<SourceSpec> sources;
  IdentifySpec identify;
  ReconstructSpec reconstruct;
  CurvatureSpec curvature;
  CheckSpec check;

  void validate() const;  // throws ConfigError with a distinct diagnostic
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text, const std::string& base_dir);

}  // namespace recho
