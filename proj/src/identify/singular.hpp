#pragma once

#include <optional>
#include <vector>

#include "core/config.hpp"
#include "core/record.hpp"
#include "geometry/boundary.hpp"
#include "geometry/ray.hpp"
#include "geometry/speed_field.hpp"

namespace recho::identify {

// One detected singular arrival on the boundary cylinder, normalized to the
// unit cosphere (tau = 1).
struct SingularSample {
  geometry::BoundaryCotangentSample b;
  double amplitude = 0.0;
  int component_id = -1;
  int channel = -1;
};

struct ExtractOptions {
  double threshold = 0.1;        // fraction of the global |du/dt| max
  double dead_time_steps = 8.0;  // per-channel non-max suppression window
  int slant_half_channels = 2;   // 5-channel slant stack
  int slant_half_samples = 5;    // 11-sample window
  int min_component = 3;
  double link_time_steps = 3.0;  // adjacency: |dr - p dzeta| tolerance
  int link_channels = 3;
  double link_slope = 0.25;      // |eta| continuity between neighbors
  bool partial = false;          // set when the record covers only an arc
};

ExtractOptions extract_options(const IdentifySpec& spec, bool partial);

// Local maxima of |du/dt| per channel above the threshold; arrival slope
// estimated by a slant stack over neighboring channels, tau normalized to 1,
// samples grouped into connected components of the detected singular set.
std::vector<SingularSample> extract_singular_samples(const CauchyRecord& data,
                                                     const geometry::CircleBoundary& omega,
                                                     const geometry::SpeedField& speed,
                                                     const ExtractOptions& opt);

struct BackPropagated {
  std::vector<geometry::CotangentSample> samples;
  int dropped = 0;  // back-traces that left Omega or had r <= t
};

// Psi_t^{-1} applied per sample; drops are counted, not fatal.
BackPropagated back_propagate(const std::vector<SingularSample>& samples, double t,
                              const geometry::CircleBoundary& omega,
                              const geometry::SpeedField& speed);

int component_count(const std::vector<SingularSample>& samples);

}  // namespace recho::identify
